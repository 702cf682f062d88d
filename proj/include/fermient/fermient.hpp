// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

// Convenience header pulling in the whole library.

#pragma once

#include "fermient/detector.hpp"
#include "fermient/entanglement.hpp"
#include "fermient/firstq.hpp"
#include "fermient/fock.hpp"
#include "fermient/io.hpp"
#include "fermient/scenarios.hpp"
#include "fermient/transforms.hpp"
#include "fermient/version.hpp"
