#pragma once

namespace prlqual {

inline constexpr const char* kToolVersion = "0.1.0";

// Version of the readiness framework this engine implements. Conformance
// labels must cite it.
inline constexpr const char* kFrameworkVersion = "PRL/PRS v1.0";

// Attribution sentence required by the framework's CC BY 4.0 licence.
// Embedded verbatim in every markdown report.
inline constexpr const char* kFrameworkAttribution =
    "Prompt Readiness Levels (PRL) & Prompt Readiness Score (PRS); "
    "Sébastien Guinard - v1.0 (2026) - CC BY 4.0 - canonical source: "
    "arXiv (forthcoming; identifier pending)";

}  // namespace prlqual
