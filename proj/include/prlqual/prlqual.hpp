#pragma once

// Umbrella header for the prompt readiness qualification library.

#include "prlqual/asset.hpp"       // IWYU pragma: export
#include "prlqual/dimensions.hpp"  // IWYU pragma: export
#include "prlqual/errors.hpp"      // IWYU pragma: export
#include "prlqual/evidence.hpp"    // IWYU pragma: export
#include "prlqual/gating.hpp"      // IWYU pragma: export
#include "prlqual/jsonio.hpp"      // IWYU pragma: export
#include "prlqual/paths.hpp"       // IWYU pragma: export
#include "prlqual/registry.hpp"    // IWYU pragma: export
#include "prlqual/reporting.hpp"   // IWYU pragma: export
#include "prlqual/scoring.hpp"     // IWYU pragma: export
#include "prlqual/sha256.hpp"      // IWYU pragma: export
#include "prlqual/timeutil.hpp"    // IWYU pragma: export
#include "prlqual/version.hpp"     // IWYU pragma: export
