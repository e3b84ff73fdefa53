#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prlqual/asset.hpp"
#include "prlqual/gating.hpp"
#include "prlqual/version.hpp"

namespace prlqual {

inline constexpr std::string_view kReportSchema = "1";

// ---------------------------------------------------------------------------
// Display formatting. Gating always compares unrounded values; rounding here
// is presentation only: half-to-even at 2 decimals, trailing zeros trimmed.
// ---------------------------------------------------------------------------

inline std::string format_score(double value) {
  bool negative = std::signbit(value) && value != 0.0;
  double magnitude = negative ? -value : value;
  // nearbyint honours the default rounding mode: nearest, ties to even.
  auto cents = static_cast<std::int64_t>(std::nearbyint(magnitude * 100.0));
  std::string out = negative && cents != 0 ? "-" : "";
  out += std::to_string(cents / 100);
  std::int64_t rest = cents % 100;
  if (rest != 0) {
    out += '.';
    out += static_cast<char>('0' + rest / 10);
    if (rest % 10 != 0) out += static_cast<char>('0' + rest % 10);
  }
  return out;
}

inline std::string format_score_tuple(const ScoreVector& values) {
  std::string out = "(";
  bool first = true;
  for (Dimension d : kDimensions) {
    if (!first) out += ", ";
    out += format_score(values[d]);
    first = false;
  }
  out += ")";
  return out;
}

// Single-line qualification tuple. The applied theta/delta are omitted at
// level 0, where no row was earned.
inline std::string render_tuple(const QualificationResult& result) {
  std::string out = "(PRL=" + std::to_string(result.effective_level);
  out += ", PRS=" + format_score(result.prs);
  out += ", S=" + format_score_tuple(result.score_vector);
  if (result.applied_row) {
    out += ", theta=" + format_score(result.applied_row->theta);
    out += ", delta=" + format_score_tuple(result.applied_row->delta);
  }
  out += ")";
  return out;
}

// ---------------------------------------------------------------------------
// Conformance labels.
// ---------------------------------------------------------------------------

enum class LabelKind { prl_conformant, prl_compatible, unlabeled };

inline std::string_view label_key(LabelKind kind) {
  switch (kind) {
    case LabelKind::prl_conformant: return "prl_conformant";
    case LabelKind::prl_compatible: return "prl_compatible";
    case LabelKind::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

inline std::string_view label_display(LabelKind kind) {
  switch (kind) {
    case LabelKind::prl_conformant: return "PRL-Conformant";
    case LabelKind::prl_compatible: return "PRL-Compatible";
    case LabelKind::unlabeled: return "Unlabeled";
  }
  return "Unlabeled";
}

struct ConformanceLabel {
  LabelKind kind = LabelKind::unlabeled;
  std::string cited_version;

  friend bool operator==(const ConformanceLabel&, const ConformanceLabel&) = default;
};

// prl_conformant: canonical profile, default matrix, nothing deviates.
// prl_compatible: deviations exist and are enumerated.
// unlabeled: something deviates (e.g. a custom profile) but the caller
// documented nothing, so no claim can be made.
inline ConformanceLabel determine_label(bool profile_is_canonical, bool matrix_is_default,
                                        const std::vector<std::string>& deviations) {
  ConformanceLabel label;
  label.cited_version = kFrameworkVersion;
  if (!deviations.empty())
    label.kind = LabelKind::prl_compatible;
  else if (profile_is_canonical && matrix_is_default)
    label.kind = LabelKind::prl_conformant;
  else
    label.kind = LabelKind::unlabeled;
  return label;
}

inline ConformanceLabel determine_label(const ThresholdProfile& profile, bool matrix_is_default,
                                        const std::vector<std::string>& deviations) {
  return determine_label(profile.canonical, matrix_is_default, deviations);
}

// ---------------------------------------------------------------------------
// Conformance report.
// ---------------------------------------------------------------------------

struct FindingCounts {
  std::int64_t errors = 0;
  std::int64_t warnings = 0;

  static FindingCounts of(const std::vector<Finding>& findings) {
    return {static_cast<std::int64_t>(count_errors(findings)),
            static_cast<std::int64_t>(count_warnings(findings))};
  }

  friend bool operator==(const FindingCounts&, const FindingCounts&) = default;
};

struct ConformanceReport {
  QualificationResult result;
  ConformanceLabel label;
  std::vector<std::string> deviations;
  FindingCounts validation_findings;
  FindingCounts evidence_findings;
  std::string generated_at;  // ISO 8601 instant
  std::string tool_version;
};

inline void validate_report(const ConformanceReport& report) {
  const bool compatible = report.label.kind == LabelKind::prl_compatible;
  if (compatible != !report.deviations.empty())
    throw Error(ErrorCode::invalid_value, "deviations",
                "deviations must be non-empty exactly when the label is prl_compatible");
  if (!is_rfc3339_instant(report.generated_at))
    throw Error(ErrorCode::invalid_value, "generated_at", "expected an RFC 3339 instant");
}

inline json finding_counts_to_json(const FindingCounts& counts) {
  json j = json::object();
  j["errors"] = counts.errors;
  j["warnings"] = counts.warnings;
  return j;
}

inline json report_to_json(const ConformanceReport& report) {
  json j = json::object();
  j["report_schema"] = kReportSchema;
  j["generated_at"] = report.generated_at;
  j["tool_version"] = report.tool_version;
  j["tuple"] = render_tuple(report.result);
  j["prs"] = report.result.prs;
  j["score_level"] = report.result.score_level;
  j["evidence_level"] = report.result.evidence_level;
  j["effective_level"] = report.result.effective_level;
  j["scores"] = score_object_to_json(report.result.score_vector);
  j["instabilities"] = score_object_to_json(report.result.instabilities);
  j["degraded"] = report.result.degraded;
  j["profile_id"] = report.result.profile_id;
  json label = json::object();
  label["kind"] = std::string(label_key(report.label.kind));
  label["cited_version"] = report.label.cited_version;
  j["label"] = std::move(label);
  j["deviations"] = report.deviations;
  json findings = json::object();
  findings["validation"] = finding_counts_to_json(report.validation_findings);
  findings["evidence"] = finding_counts_to_json(report.evidence_findings);
  j["findings"] = std::move(findings);
  return j;
}

inline std::string render_report_json(const ConformanceReport& report) {
  return canonical_pretty(report_to_json(report));
}

inline std::string render_report_markdown(const ConformanceReport& report) {
  const QualificationResult& r = report.result;
  std::string out;
  out += "# Prompt Readiness Report\n\n";
  out += "`" + render_tuple(r) + "`\n\n";
  out += "- Profile: `" + r.profile_id + "`\n";
  out += "- Score level: " + std::to_string(r.score_level) + ", evidence level: " +
         std::to_string(r.evidence_level) + ", effective level: **" +
         std::to_string(r.effective_level) + "**\n";
  out += std::string("- Degraded: ") + (r.degraded ? "yes (too few batches)" : "no") + "\n";
  out += "- Generated: " + report.generated_at + "\n\n";

  out += "## Dimension scores\n\n";
  const std::string level_header =
      r.applied_row ? "Minimum (L" + std::to_string(r.applied_row->n) + ")" : "Minimum";
  out += "| Dimension | Score | Sigma | " + level_header + " | Margin |\n";
  out += "|-----------|------:|------:|--------:|-------:|\n";
  for (Dimension d : kDimensions) {
    out += "| " + std::string(dimension_key(d)) + " (" + std::string(dimension_title(d)) +
           ") | " + format_score(r.score_vector[d]) + " | " + format_score(r.instabilities[d]) +
           " | ";
    if (r.applied_row) {
      double minimum = r.applied_row->delta[d];
      out += format_score(minimum) + " | " + format_score(r.score_vector[d] - minimum) + " |\n";
    } else {
      out += "n/a | n/a |\n";
    }
  }
  out += "\n## Evidence\n\n";
  out += "| Level | Status |\n|------:|--------|\n";
  for (int n = kMinLevel; n <= kMaxLevel; ++n)
    out += "| " + std::to_string(n) + " | " +
           (n <= r.evidence_level ? "satisfied" : "missing") + " |\n";

  out += "\n## Conformance\n\n";
  out += "Label: **" + std::string(label_display(report.label.kind)) + "** (" +
         report.label.cited_version + ")\n\n";
  if (report.deviations.empty()) {
    out += "No deviations recorded.\n";
  } else {
    out += "Deviations:\n\n";
    for (const std::string& deviation : report.deviations) out += "- " + deviation + "\n";
  }

  out += "\n## Findings\n\n";
  out += "- Validation: " + std::to_string(report.validation_findings.errors) + " error(s), " +
         std::to_string(report.validation_findings.warnings) + " warning(s)\n";
  out += "- Evidence: " + std::to_string(report.evidence_findings.errors) + " error(s), " +
         std::to_string(report.evidence_findings.warnings) + " warning(s)\n";

  out += "\n---\n\n";
  out += std::string(kFrameworkAttribution) + ". Generated by prlqual " + report.tool_version +
         ".\n";
  return out;
}

// Canonical writer for manifests: sorted keys, two-space indent, trailing
// newline. parse_manifest(serialize_manifest(m)) round-trips every manifest.
inline std::string serialize_manifest(const PromptAssetManifest& manifest) {
  return canonical_pretty(manifest_to_json(manifest));
}

}  // namespace prlqual
