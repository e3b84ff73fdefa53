#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prlqual/gating.hpp"
#include "prlqual/paths.hpp"
#include "prlqual/sha256.hpp"
#include "prlqual/timeutil.hpp"

namespace prlqual {

// ---------------------------------------------------------------------------
// Evidence kinds. Twelve builtin deliverable kinds plus open-ended
// "custom:<suffix>" kinds for organization-specific requirements.
// ---------------------------------------------------------------------------

inline constexpr std::array<std::string_view, 12> kBuiltinEvidenceKinds = {
    "semantic_scope_document", "feasibility_report",
    "structural_blueprint",    "initial_prompt_version",
    "reasoning_path_analysis", "behavioral_validation_report",
    "qualitative_success_logs", "performance_baseline_report",
    "metric_measures",          "optimization_matrix",
    "variance_stability_report", "token_efficiency_analysis",
};

inline constexpr std::string_view kCustomKindPrefix = "custom:";
inline constexpr std::string_view kMetricMeasuresKind = "metric_measures";

inline bool is_builtin_evidence_kind(std::string_view kind) {
  return std::find(kBuiltinEvidenceKinds.begin(), kBuiltinEvidenceKinds.end(), kind) !=
         kBuiltinEvidenceKinds.end();
}

inline bool is_valid_evidence_kind(std::string_view kind) {
  if (is_builtin_evidence_kind(kind)) return true;
  if (!kind.starts_with(kCustomKindPrefix)) return false;
  std::string_view suffix = kind.substr(kCustomKindPrefix.size());
  if (suffix.empty()) return false;
  return std::all_of(suffix.begin(), suffix.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_';
  });
}

inline std::string require_evidence_kind(const json& value, const std::string& path) {
  std::string kind = get_nonempty_string(value, path);
  if (!is_valid_evidence_kind(kind))
    throw Error(ErrorCode::invalid_value, path,
                "unknown evidence kind '" + kind + "' (builtin kinds or custom:<suffix>)");
  return kind;
}

using KindSet = std::set<std::string>;

// ---------------------------------------------------------------------------
// Evidence index: the asset's catalogue of deliverables with content digests.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kEvidenceIndexFileName = "evidence_index.json";
inline constexpr std::string_view kEvidenceIndexRelPath = "evidence/evidence_index.json";

struct EvidenceEntry {
  std::string kind;
  std::string path;  // relative to asset root
  std::string sha256;
  std::string created;  // ISO 8601 instant
  std::optional<std::string> note;

  friend bool operator==(const EvidenceEntry&, const EvidenceEntry&) = default;
};

struct EvidenceIndex {
  std::vector<EvidenceEntry> entries;

  friend bool operator==(const EvidenceIndex&, const EvidenceIndex&) = default;
};

inline EvidenceEntry parse_evidence_entry(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  EvidenceEntry entry;
  entry.kind = require_evidence_kind(reader.require("kind"), reader.member("kind"));
  entry.path = get_nonempty_string(reader.require("path"), reader.member("path"));
  if (path_escapes_root(entry.path))
    throw Error(ErrorCode::invalid_value, reader.member("path"), "path escapes the asset root");
  entry.sha256 = get_nonempty_string(reader.require("sha256"), reader.member("sha256"));
  if (!is_hex_digest(entry.sha256))
    throw Error(ErrorCode::invalid_value, reader.member("sha256"),
                "expected 64 lowercase hex characters");
  entry.created = get_nonempty_string(reader.require("created"), reader.member("created"));
  if (!is_rfc3339_instant(entry.created))
    throw Error(ErrorCode::invalid_value, reader.member("created"),
                "expected an RFC 3339 instant");
  if (const json* note = reader.find("note"))
    entry.note = get_string(*note, reader.member("note"));
  reader.reject_unknown();
  return entry;
}

inline EvidenceIndex parse_evidence_index(const json& j) {
  ObjectReader reader(j, "");
  const json& entries = reader.require("entries");
  if (!entries.is_array())
    throw Error(ErrorCode::invalid_value, "entries", "expected an array");
  EvidenceIndex index;
  std::set<std::string> seen_paths;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    EvidenceEntry entry =
        parse_evidence_entry(entries[i], "entries[" + std::to_string(i) + "]");
    if (!seen_paths.insert(entry.path).second)
      throw Error(ErrorCode::invalid_value, "entries[" + std::to_string(i) + "].path",
                  "duplicate evidence path '" + entry.path + "'");
    index.entries.push_back(std::move(entry));
  }
  reader.reject_unknown();
  return index;
}

inline EvidenceIndex load_evidence_index(std::string_view bytes) {
  return parse_evidence_index(parse_json_text(bytes, "evidence index"));
}

inline json evidence_index_to_json(const EvidenceIndex& index) {
  json entries = json::array();
  for (const EvidenceEntry& entry : index.entries) {
    json e = json::object();
    e["kind"] = entry.kind;
    e["path"] = entry.path;
    e["sha256"] = entry.sha256;
    e["created"] = entry.created;
    if (entry.note) e["note"] = *entry.note;
    entries.push_back(std::move(e));
  }
  json j = json::object();
  j["entries"] = std::move(entries);
  return j;
}

inline KindSet kinds_present(const EvidenceIndex& index) {
  KindSet kinds;
  for (const EvidenceEntry& entry : index.entries) kinds.insert(entry.kind);
  return kinds;
}

// ---------------------------------------------------------------------------
// Requirement matrix: which deliverable kinds each level demands.
// ---------------------------------------------------------------------------

struct RequirementMatrix {
  std::array<KindSet, 9> kinds{};  // index 0 is level 1

  const KindSet& at_level(int n) const { return kinds[static_cast<std::size_t>(n - 1)]; }
  KindSet& at_level(int n) { return kinds[static_cast<std::size_t>(n - 1)]; }

  friend bool operator==(const RequirementMatrix&, const RequirementMatrix&) = default;
};

// Shipped default: levels 1-5 follow the published deliverables lists; 6-9
// carry explicit placeholders so a higher level can never be evidenced by
// accident, only by an organization filling the rows in.
inline RequirementMatrix default_requirement_matrix() {
  RequirementMatrix m;
  m.at_level(1) = {"semantic_scope_document", "feasibility_report"};
  m.at_level(2) = {"structural_blueprint", "initial_prompt_version"};
  m.at_level(3) = {"reasoning_path_analysis", "behavioral_validation_report",
                   "qualitative_success_logs"};
  m.at_level(4) = {"performance_baseline_report", "metric_measures"};
  m.at_level(5) = {"optimization_matrix", "variance_stability_report",
                   "token_efficiency_analysis"};
  for (int n = 6; n <= 9; ++n)
    m.at_level(n) = {"custom:level" + std::to_string(n) + "_evidence"};
  return m;
}

// Loaded matrices may extend but never relax the level 1-5 floor.
inline void validate_requirement_matrix(const RequirementMatrix& matrix) {
  const RequirementMatrix floor = default_requirement_matrix();
  for (int n = 1; n <= 5; ++n)
    for (const std::string& kind : floor.at_level(n))
      if (!matrix.at_level(n).count(kind))
        throw Error(ErrorCode::invalid_value, "levels[" + std::to_string(n) + "].kinds",
                    "level " + std::to_string(n) + " must require at least '" + kind + "'");
}

inline RequirementMatrix parse_requirement_matrix(const json& j) {
  if (!j.is_array() || j.size() != 9)
    throw Error(ErrorCode::invalid_value, "matrix", "expected an array of 9 level objects");
  RequirementMatrix matrix;
  for (std::size_t i = 0; i < 9; ++i) {
    std::string path = "matrix[" + std::to_string(i) + "]";
    ObjectReader reader(j[i], path);
    auto n = get_integer(reader.require("n"), reader.member("n"));
    if (n != static_cast<std::int64_t>(i + 1))
      throw Error(ErrorCode::missing_level, reader.member("n"),
                  "levels must be n = 1..9 in order");
    const json& kinds = reader.require("kinds");
    if (!kinds.is_array())
      throw Error(ErrorCode::invalid_value, reader.member("kinds"), "expected an array");
    for (std::size_t k = 0; k < kinds.size(); ++k)
      matrix.kinds[i].insert(require_evidence_kind(
          kinds[k], reader.member("kinds") + "[" + std::to_string(k) + "]"));
    reader.reject_unknown();
  }
  validate_requirement_matrix(matrix);
  return matrix;
}

inline RequirementMatrix load_requirement_matrix(std::string_view bytes) {
  return parse_requirement_matrix(parse_json_text(bytes, "requirement matrix"));
}

inline json requirement_matrix_to_json(const RequirementMatrix& matrix) {
  json levels = json::array();
  for (int n = 1; n <= 9; ++n) {
    json row = json::object();
    row["n"] = n;
    row["kinds"] = json::array();
    for (const std::string& kind : matrix.at_level(n)) row["kinds"].push_back(kind);
    levels.push_back(std::move(row));
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Stage-gating queries.
// ---------------------------------------------------------------------------

// Requirements are cumulative: a level demands its own kinds plus everything
// below it.
inline KindSet required_kinds(int level, const RequirementMatrix& matrix) {
  if (level < kMinLevel || level > kMaxLevel)
    throw Error(ErrorCode::invalid_value, "level", "must be in 1..9");
  KindSet required;
  for (int n = kMinLevel; n <= level; ++n) {
    const KindSet& row = matrix.at_level(n);
    required.insert(row.begin(), row.end());
  }
  return required;
}

// Largest level whose cumulative requirements are all present in the index;
// 0 when even level 1 is unmet.
inline int max_evidenced_level(const EvidenceIndex& index, const RequirementMatrix& matrix) {
  const KindSet present = kinds_present(index);
  int level = 0;
  for (int n = kMinLevel; n <= kMaxLevel; ++n) {
    const KindSet required = required_kinds(n, matrix);
    if (std::includes(present.begin(), present.end(), required.begin(), required.end()))
      level = n;
    else
      break;  // cumulative requirements only grow
  }
  return level;
}

// Per-level readout for reports: what each level demands and what is missing.
struct LevelEvidenceStatus {
  int n = 0;
  KindSet required;
  KindSet missing;
  bool satisfied = false;
};

inline std::vector<LevelEvidenceStatus> evidence_status(const EvidenceIndex& index,
                                                        const RequirementMatrix& matrix) {
  const KindSet present = kinds_present(index);
  std::vector<LevelEvidenceStatus> status;
  status.reserve(9);
  for (int n = kMinLevel; n <= kMaxLevel; ++n) {
    LevelEvidenceStatus row;
    row.n = n;
    row.required = required_kinds(n, matrix);
    for (const std::string& kind : row.required)
      if (!present.count(kind)) row.missing.insert(kind);
    row.satisfied = row.missing.empty();
    status.push_back(std::move(row));
  }
  return status;
}

// ---------------------------------------------------------------------------
// Integrity verification.
// ---------------------------------------------------------------------------

// metric_measures is the one kind with a structural contract: a JSON object
// with numeric precision, recall, and hallucination_rate in [0, 1].
inline std::optional<std::string> check_metric_measures(std::string_view bytes) {
  json j;
  try {
    j = parse_json_text(bytes, "metric_measures");
  } catch (const Error&) {
    return "not valid JSON";
  }
  if (!j.is_object()) return "expected a JSON object";
  for (const char* field : {"precision", "recall", "hallucination_rate"}) {
    if (!j.contains(field)) return std::string("missing field '") + field + "'";
    const json& v = j[field];
    if (!v.is_number()) return std::string("field '") + field + "' must be a number";
    double d = v.get<double>();
    if (!(d >= 0.0 && d <= 1.0))
      return std::string("field '") + field + "' must be in [0, 1]";
  }
  return std::nullopt;
}

// One finding per missing file, digest mismatch, or malformed metric_measures
// document; an empty list means the pack is intact.
inline std::vector<Finding> verify_evidence_integrity(const EvidenceIndex& index,
                                                      const std::filesystem::path& asset_root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(asset_root, ec) || ec)
    throw Error(ErrorCode::io_failure, asset_root.string(), "not a readable directory");
  std::vector<Finding> findings;
  for (const EvidenceEntry& entry : index.entries) {
    if (path_escapes_root(entry.path)) {
      findings.push_back({Severity::error, "PATH_ESCAPE", entry.path,
                          "evidence path escapes the asset root"});
      continue;
    }
    std::filesystem::path file = asset_root / std::filesystem::path(entry.path);
    if (!std::filesystem::is_regular_file(file, ec) || ec) {
      findings.push_back({Severity::error, "MISSING_FILE", entry.path,
                          "evidence file is missing"});
      continue;
    }
    std::string bytes = read_file_bytes(file);
    std::string digest = sha256_hex(bytes);
    if (digest != entry.sha256) {
      findings.push_back({Severity::error, "DIGEST_MISMATCH", entry.path,
                          "content digest " + digest + " does not match indexed " +
                              entry.sha256});
      continue;
    }
    if (entry.kind == kMetricMeasuresKind)
      if (auto problem = check_metric_measures(bytes))
        findings.push_back({Severity::error, "INVALID_METRICS", entry.path, *problem});
  }
  return findings;
}

}  // namespace prlqual
