#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prlqual/jsonio.hpp"
#include "prlqual/paths.hpp"
#include "prlqual/sha256.hpp"
#include "prlqual/timeutil.hpp"

namespace prlqual {

inline constexpr std::string_view kManifestFileName = "prompt_asset.json";
inline constexpr std::string_view kManifestSchemaVersion = "1.0";

// ---------------------------------------------------------------------------
// Manifest value types. A prompt asset is a versioned bundle of six parts:
// specification, interface, execution context, assurance, evidence, and
// governance. All parts are mandatory.
// ---------------------------------------------------------------------------

struct VersionId {
  std::string asset_id;  // lowercase alphanumeric plus hyphen, 1-64 chars
  std::string version;   // MAJOR.MINOR.PATCH

  friend bool operator==(const VersionId&, const VersionId&) = default;
};

struct PromptSpec {
  std::string template_path;
  std::string instructions;
  std::optional<std::string> examples_path;

  friend bool operator==(const PromptSpec&, const PromptSpec&) = default;
};

struct InterfaceSpec {
  std::string input_schema_path;
  std::string output_schema_path;

  friend bool operator==(const InterfaceSpec&, const InterfaceSpec&) = default;
};

struct ModelBinding {
  std::string provider;
  std::string model;
  std::optional<std::string> model_version;

  friend bool operator==(const ModelBinding&, const ModelBinding&) = default;
};

struct ExecutionContext {
  ModelBinding model_binding;
  std::map<std::string, json> inference_parameters;  // values: number or string
  std::vector<std::string> tool_policies;
  std::vector<std::string> retrieval_policies;

  friend bool operator==(const ExecutionContext&, const ExecutionContext&) = default;
};

struct AssurancePackage {
  std::string test_suite_path;
  std::vector<std::string> acceptance_criteria;  // at least one, each non-empty

  friend bool operator==(const AssurancePackage&, const AssurancePackage&) = default;
};

struct Approval {
  std::string approver;
  std::string role;
  std::string date;  // ISO 8601 calendar date

  friend bool operator==(const Approval&, const Approval&) = default;
};

struct GovernanceMetadata {
  std::string owner;
  std::vector<Approval> approvals;
  std::string license;
  std::optional<std::string> ip_notes;

  friend bool operator==(const GovernanceMetadata&, const GovernanceMetadata&) = default;
};

struct PromptAssetManifest {
  std::string schema_version;
  VersionId id;
  PromptSpec prompt_spec;
  InterfaceSpec interface;
  ExecutionContext execution_context;
  AssurancePackage assurance;
  std::string evidence_dir;
  GovernanceMetadata governance;
  std::optional<int> claimed_prl;  // 0..9

  friend bool operator==(const PromptAssetManifest&, const PromptAssetManifest&) = default;
};

struct AssetFingerprint {
  std::string digest;  // 64-char lowercase hex

  friend bool operator==(const AssetFingerprint&, const AssetFingerprint&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool valid() const { return count_errors(findings) == 0; }
};

// ---------------------------------------------------------------------------
// Field rules.
// ---------------------------------------------------------------------------

inline bool is_valid_asset_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '-';
  });
}

inline bool is_valid_semver(std::string_view version) {
  int parts = 0;
  std::size_t pos = 0;
  while (parts < 3) {
    std::size_t end = version.find('.', pos);
    std::string_view part = (parts == 2)
                                ? version.substr(pos)
                                : version.substr(pos, end == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : end - pos);
    if (parts < 2 && end == std::string_view::npos) return false;
    if (part.empty() || part.size() > 9) return false;
    if (!std::all_of(part.begin(), part.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      return false;
    ++parts;
    if (parts < 3) pos = end + 1;
  }
  return true;
}

inline std::string require_relative_path(const json& value, const std::string& path) {
  // Escape checks are deferred to validate_asset so that a loaded manifest can
  // be reported on; only the string shape is enforced here.
  return get_nonempty_string(value, path);
}

// ---------------------------------------------------------------------------
// Strict manifest parsing. Unknown fields are rejected everywhere: a
// conformance claim is only auditable when tools agree on what a manifest
// says.
// ---------------------------------------------------------------------------

inline VersionId parse_version_id(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  VersionId id;
  id.asset_id = get_nonempty_string(reader.require("asset_id"), reader.member("asset_id"));
  if (!is_valid_asset_id(id.asset_id))
    throw Error(ErrorCode::invalid_value, reader.member("asset_id"),
                "expected 1-64 lowercase alphanumeric or hyphen characters");
  id.version = get_nonempty_string(reader.require("version"), reader.member("version"));
  if (!is_valid_semver(id.version))
    throw Error(ErrorCode::invalid_value, reader.member("version"),
                "expected MAJOR.MINOR.PATCH");
  reader.reject_unknown();
  return id;
}

inline PromptSpec parse_prompt_spec(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  PromptSpec spec;
  spec.template_path =
      require_relative_path(reader.require("template_path"), reader.member("template_path"));
  spec.instructions = get_string(reader.require("instructions"), reader.member("instructions"));
  if (const json* examples = reader.find("examples_path"))
    spec.examples_path = require_relative_path(*examples, reader.member("examples_path"));
  reader.reject_unknown();
  return spec;
}

inline InterfaceSpec parse_interface_spec(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  InterfaceSpec spec;
  spec.input_schema_path = require_relative_path(reader.require("input_schema_path"),
                                                 reader.member("input_schema_path"));
  spec.output_schema_path = require_relative_path(reader.require("output_schema_path"),
                                                  reader.member("output_schema_path"));
  reader.reject_unknown();
  return spec;
}

inline ExecutionContext parse_execution_context(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  ExecutionContext ctx;
  {
    const json& binding = reader.require("model_binding");
    ObjectReader binding_reader(binding, reader.member("model_binding"));
    ctx.model_binding.provider = get_nonempty_string(binding_reader.require("provider"),
                                                     binding_reader.member("provider"));
    ctx.model_binding.model =
        get_nonempty_string(binding_reader.require("model"), binding_reader.member("model"));
    if (const json* mv = binding_reader.find("model_version"))
      ctx.model_binding.model_version =
          get_nonempty_string(*mv, binding_reader.member("model_version"));
    binding_reader.reject_unknown();
  }
  {
    const json& params = reader.require("inference_parameters");
    std::string params_path = reader.member("inference_parameters");
    if (!params.is_object())
      throw Error(ErrorCode::invalid_value, params_path, "expected an object");
    for (const auto& [key, value] : params.items()) {
      std::string value_path = params_path + "." + key;
      if (!value.is_number() && !value.is_string())
        throw Error(ErrorCode::invalid_value, value_path, "expected a number or string");
      if (key == "temperature") {
        if (!value.is_number())
          throw Error(ErrorCode::invalid_value, value_path, "expected a number");
        double t = value.get<double>();
        if (!(t >= 0.0 && t <= 2.0))
          throw Error(ErrorCode::invalid_value, value_path, "must be in [0, 2]");
      }
      if (key == "top_p") {
        if (!value.is_number())
          throw Error(ErrorCode::invalid_value, value_path, "expected a number");
        double p = value.get<double>();
        if (!(p > 0.0 && p <= 1.0))
          throw Error(ErrorCode::invalid_value, value_path, "must be in (0, 1]");
      }
      ctx.inference_parameters.emplace(key, value);
    }
  }
  for (const char* list_key : {"tool_policies", "retrieval_policies"}) {
    const json& list = reader.require(list_key);
    std::string list_path = reader.member(list_key);
    if (!list.is_array())
      throw Error(ErrorCode::invalid_value, list_path, "expected an array of strings");
    auto& target = std::string_view(list_key) == "tool_policies" ? ctx.tool_policies
                                                                 : ctx.retrieval_policies;
    for (std::size_t i = 0; i < list.size(); ++i)
      target.push_back(
          get_string(list[i], list_path + "[" + std::to_string(i) + "]"));
  }
  reader.reject_unknown();
  return ctx;
}

inline AssurancePackage parse_assurance_package(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  AssurancePackage assurance;
  assurance.test_suite_path = require_relative_path(reader.require("test_suite_path"),
                                                    reader.member("test_suite_path"));
  const json& criteria = reader.require("acceptance_criteria");
  std::string criteria_path = reader.member("acceptance_criteria");
  if (!criteria.is_array() || criteria.empty())
    throw Error(ErrorCode::invalid_value, criteria_path,
                "expected a non-empty array of strings");
  for (std::size_t i = 0; i < criteria.size(); ++i)
    assurance.acceptance_criteria.push_back(get_nonempty_string(
        criteria[i], criteria_path + "[" + std::to_string(i) + "]"));
  reader.reject_unknown();
  return assurance;
}

inline GovernanceMetadata parse_governance(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  GovernanceMetadata governance;
  governance.owner = get_nonempty_string(reader.require("owner"), reader.member("owner"));
  const json& approvals = reader.require("approvals");
  std::string approvals_path = reader.member("approvals");
  if (!approvals.is_array())
    throw Error(ErrorCode::invalid_value, approvals_path, "expected an array");
  for (std::size_t i = 0; i < approvals.size(); ++i) {
    std::string row_path = approvals_path + "[" + std::to_string(i) + "]";
    ObjectReader row_reader(approvals[i], row_path);
    Approval approval;
    approval.approver =
        get_nonempty_string(row_reader.require("approver"), row_reader.member("approver"));
    approval.role = get_string(row_reader.require("role"), row_reader.member("role"));
    approval.date = get_nonempty_string(row_reader.require("date"), row_reader.member("date"));
    if (!is_iso_date(approval.date))
      throw Error(ErrorCode::invalid_value, row_reader.member("date"),
                  "expected a YYYY-MM-DD calendar date");
    row_reader.reject_unknown();
    governance.approvals.push_back(std::move(approval));
  }
  governance.license = get_string(reader.require("license"), reader.member("license"));
  if (const json* notes = reader.find("ip_notes"))
    governance.ip_notes = get_string(*notes, reader.member("ip_notes"));
  reader.reject_unknown();
  return governance;
}

inline PromptAssetManifest parse_manifest(const json& j) {
  ObjectReader reader(j, "");
  PromptAssetManifest m;
  m.schema_version =
      get_nonempty_string(reader.require("schema_version"), reader.member("schema_version"));
  m.id = parse_version_id(reader.require("id"), "id");
  m.prompt_spec = parse_prompt_spec(reader.require("prompt_spec"), "prompt_spec");
  m.interface = parse_interface_spec(reader.require("interface"), "interface");
  m.execution_context =
      parse_execution_context(reader.require("execution_context"), "execution_context");
  m.assurance = parse_assurance_package(reader.require("assurance"), "assurance");
  m.evidence_dir =
      require_relative_path(reader.require("evidence_dir"), reader.member("evidence_dir"));
  m.governance = parse_governance(reader.require("governance"), "governance");
  if (const json* claimed = reader.find("claimed_prl")) {
    auto level = get_integer(*claimed, reader.member("claimed_prl"));
    if (level < 0 || level > 9)
      throw Error(ErrorCode::invalid_value, "claimed_prl", "0..9");
    m.claimed_prl = static_cast<int>(level);
  }
  reader.reject_unknown();
  return m;
}

inline PromptAssetManifest load_manifest(std::string_view bytes) {
  return parse_manifest(parse_json_text(bytes, "manifest"));
}

// ---------------------------------------------------------------------------
// Canonical serialization. nlohmann::json orders object keys lexicographically,
// so dumping the constructed tree is canonical by construction.
// ---------------------------------------------------------------------------

inline json manifest_to_json(const PromptAssetManifest& m) {
  json j = json::object();
  j["schema_version"] = m.schema_version;
  j["id"] = {{"asset_id", m.id.asset_id}, {"version", m.id.version}};
  json prompt_spec = json::object();
  prompt_spec["template_path"] = m.prompt_spec.template_path;
  prompt_spec["instructions"] = m.prompt_spec.instructions;
  if (m.prompt_spec.examples_path) prompt_spec["examples_path"] = *m.prompt_spec.examples_path;
  j["prompt_spec"] = std::move(prompt_spec);
  j["interface"] = {{"input_schema_path", m.interface.input_schema_path},
                    {"output_schema_path", m.interface.output_schema_path}};
  json binding = json::object();
  binding["provider"] = m.execution_context.model_binding.provider;
  binding["model"] = m.execution_context.model_binding.model;
  if (m.execution_context.model_binding.model_version)
    binding["model_version"] = *m.execution_context.model_binding.model_version;
  json params = json::object();
  for (const auto& [key, value] : m.execution_context.inference_parameters)
    params[key] = value;
  j["execution_context"] = {{"model_binding", std::move(binding)},
                            {"inference_parameters", std::move(params)},
                            {"tool_policies", m.execution_context.tool_policies},
                            {"retrieval_policies", m.execution_context.retrieval_policies}};
  j["assurance"] = {{"test_suite_path", m.assurance.test_suite_path},
                    {"acceptance_criteria", m.assurance.acceptance_criteria}};
  j["evidence_dir"] = m.evidence_dir;
  json governance = json::object();
  governance["owner"] = m.governance.owner;
  json approvals = json::array();
  for (const Approval& approval : m.governance.approvals)
    approvals.push_back({{"approver", approval.approver},
                         {"role", approval.role},
                         {"date", approval.date}});
  governance["approvals"] = std::move(approvals);
  governance["license"] = m.governance.license;
  if (m.governance.ip_notes) governance["ip_notes"] = *m.governance.ip_notes;
  j["governance"] = std::move(governance);
  if (m.claimed_prl) j["claimed_prl"] = *m.claimed_prl;
  return j;
}

// ---------------------------------------------------------------------------
// Validation. Findings, not exceptions: an auditor wants the full list, and
// the asset is valid iff no error-severity finding exists.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_referenced_file(const std::filesystem::path& root, const std::string& rel,
                                  const std::string& field, bool must_be_nonempty,
                                  bool must_parse_json, std::vector<Finding>& findings) {
  if (path_escapes_root(rel)) {
    findings.push_back({Severity::error, "PATH_ESCAPE", field,
                        "path '" + rel + "' escapes the asset root"});
    return;
  }
  std::filesystem::path file = root / std::filesystem::path(rel);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(file, ec) || ec) {
    findings.push_back({Severity::error, "MISSING_FILE", field,
                        "referenced file '" + rel + "' does not exist"});
    return;
  }
  std::string bytes = read_file_bytes(file);
  if (must_be_nonempty && bytes.empty()) {
    findings.push_back({Severity::error, "EMPTY_FILE", field,
                        "referenced file '" + rel + "' is empty"});
    return;
  }
  if (must_parse_json) {
    try {
      parse_json_text(bytes, rel);
    } catch (const Error&) {
      findings.push_back({Severity::error, "MALFORMED_SCHEMA", field,
                          "referenced file '" + rel + "' is not a well-formed document"});
    }
  }
}

}  // namespace detail

inline ValidationReport validate_asset(const PromptAssetManifest& manifest,
                                       const std::filesystem::path& asset_root,
                                       std::string_view now_instant) {
  std::error_code ec;
  if (!std::filesystem::is_directory(asset_root, ec) || ec)
    throw Error(ErrorCode::io_failure, asset_root.string(), "not a readable directory");

  ValidationReport report;
  detail::check_referenced_file(asset_root, manifest.prompt_spec.template_path,
                                "prompt_spec.template_path", /*must_be_nonempty=*/true,
                                /*must_parse_json=*/false, report.findings);
  if (manifest.prompt_spec.examples_path)
    detail::check_referenced_file(asset_root, *manifest.prompt_spec.examples_path,
                                  "prompt_spec.examples_path", false, false, report.findings);
  detail::check_referenced_file(asset_root, manifest.interface.input_schema_path,
                                "interface.input_schema_path", false, true, report.findings);
  detail::check_referenced_file(asset_root, manifest.interface.output_schema_path,
                                "interface.output_schema_path", false, true, report.findings);
  detail::check_referenced_file(asset_root, manifest.assurance.test_suite_path,
                                "assurance.test_suite_path", false, false, report.findings);

  if (path_escapes_root(manifest.evidence_dir)) {
    report.findings.push_back({Severity::error, "PATH_ESCAPE", "evidence_dir",
                               "path '" + manifest.evidence_dir +
                                   "' escapes the asset root"});
  } else {
    std::filesystem::path dir = asset_root / std::filesystem::path(manifest.evidence_dir);
    if (!std::filesystem::exists(dir, ec) || ec)
      report.findings.push_back({Severity::warning, "MISSING_DIR", "evidence_dir",
                                 "evidence directory '" + manifest.evidence_dir +
                                     "' does not exist yet"});
    else if (!std::filesystem::is_directory(dir, ec) || ec)
      report.findings.push_back({Severity::error, "NOT_A_DIRECTORY", "evidence_dir",
                                 "'" + manifest.evidence_dir + "' is not a directory"});
  }

  const std::string today = date_part(now_instant);
  for (std::size_t i = 0; i < manifest.governance.approvals.size(); ++i) {
    const Approval& approval = manifest.governance.approvals[i];
    // ISO calendar dates order lexicographically.
    if (approval.date > today)
      report.findings.push_back(
          {Severity::error, "FUTURE_DATE",
           "governance.approvals[" + std::to_string(i) + "].date",
           "approval date " + approval.date + " is after the validation clock's " + today});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fingerprinting. The digest covers the canonical manifest bytes and every
// referenced file, each framed as path, 0x00, 8-byte big-endian length,
// content, in lexicographic path order.
// ---------------------------------------------------------------------------

inline std::set<std::string> referenced_files(const PromptAssetManifest& manifest) {
  std::set<std::string> paths;
  paths.insert(manifest.prompt_spec.template_path);
  if (manifest.prompt_spec.examples_path) paths.insert(*manifest.prompt_spec.examples_path);
  paths.insert(manifest.interface.input_schema_path);
  paths.insert(manifest.interface.output_schema_path);
  paths.insert(manifest.assurance.test_suite_path);
  return paths;
}

inline AssetFingerprint asset_fingerprint(const PromptAssetManifest& manifest,
                                          const std::filesystem::path& asset_root,
                                          std::string_view now_instant) {
  ValidationReport report = validate_asset(manifest, asset_root, now_instant);
  if (!report.valid())
    throw Error(ErrorCode::validation_required, manifest.id.asset_id,
                "asset must validate with zero errors before fingerprinting");

  Sha256 hasher;
  hasher.update(canonical_dump(manifest_to_json(manifest)));
  for (const std::string& rel : referenced_files(manifest)) {
    hasher.update(rel);
    const unsigned char separator = 0x00;
    hasher.update(&separator, 1);
    std::string bytes = read_file_bytes(asset_root / std::filesystem::path(rel));
    std::uint64_t length = bytes.size();
    unsigned char frame[8];
    for (int b = 0; b < 8; ++b)
      frame[b] = static_cast<unsigned char>((length >> (8 * (7 - b))) & 0xff);
    hasher.update(frame, sizeof frame);
    hasher.update(bytes);
  }
  return AssetFingerprint{hasher.finish_hex()};
}

}  // namespace prlqual
