// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fermient {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fermient
