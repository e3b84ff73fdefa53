// prlqual: command-line front end for the prompt readiness qualification
// engine. Wires the library modules into validate / score / qualify / gate /
// whatif / report / registry / profile workflows with CI-friendly exit codes:
//   0 success or gate passed
//   1 gate failed (target level not achieved)
//   2 validation error (manifest, profile, evidence, or usage)
//   3 I/O or environment error

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prlqual/prlqual.hpp"

namespace fs = std::filesystem;
using namespace prlqual;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitGateFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitEnvironment = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::io_failure:
    case ErrorCode::lock_held:
      return kExitEnvironment;
    default:
      return kExitValidation;
  }
}

// ---------------------------------------------------------------------------
// Global options shared by all subcommands.
// ---------------------------------------------------------------------------

struct GlobalOptions {
  std::string profile_path;   // empty: embedded canonical profile
  std::string matrix_path;    // empty: embedded default matrix
  std::string now;            // empty: wall clock
  std::string format = "json";
  std::string registry_dir = "registry";
};

std::string resolve_now(const GlobalOptions& g) {
  if (g.now.empty()) return utc_now_instant();
  if (!is_rfc3339_instant(g.now))
    throw Error(ErrorCode::invalid_value, "--now", "expected an RFC 3339 instant");
  return g.now;
}

ThresholdProfile resolve_profile(const GlobalOptions& g) {
  if (g.profile_path.empty()) return canonical_profile();
  return load_profile(read_file_bytes(g.profile_path));
}

RequirementMatrix resolve_matrix(const GlobalOptions& g) {
  if (g.matrix_path.empty()) return default_requirement_matrix();
  return load_requirement_matrix(read_file_bytes(g.matrix_path));
}

bool matrix_is_default(const GlobalOptions& g, const RequirementMatrix& matrix) {
  return g.matrix_path.empty() || matrix == default_requirement_matrix();
}

void print_findings(std::ostream& os, const std::vector<Finding>& findings) {
  for (const Finding& f : findings)
    os << severity_name(f.severity) << ' ' << f.code << ' ' << f.subject << ": " << f.message
       << '\n';
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file_atomic(out_path, text);
}

// ---------------------------------------------------------------------------
// Asset pipeline: manifest, then validation, batches, evidence. Scoring output
// is never produced for an asset that fails validation.
// ---------------------------------------------------------------------------

struct PipelineResult {
  PromptAssetManifest manifest;
  std::vector<Finding> validation_findings;
  std::vector<Finding> evidence_findings;
  ScoreSummary summary;
  EvidenceIndex evidence;
  int evidence_level = 0;
};

PromptAssetManifest read_manifest(const fs::path& root) {
  return load_manifest(read_file_bytes(root / fs::path(std::string(kManifestFileName))));
}

PipelineResult run_pipeline(const fs::path& root, const ThresholdProfile& profile,
                            const RequirementMatrix& matrix, const std::string& now) {
  PipelineResult p;
  p.manifest = read_manifest(root);

  ValidationReport validation = validate_asset(p.manifest, root, now);
  p.validation_findings = validation.findings;
  if (!validation.valid()) {
    print_findings(std::cerr, p.validation_findings);
    throw Error(ErrorCode::validation_required, root.string(),
                "asset failed validation; scoring skipped");
  }

  std::vector<EvaluationBatch> batches =
      load_batches(root / fs::path(p.manifest.evidence_dir) / "batches");
  p.summary = summarize_batches(batches, profile.scoring);

  const fs::path index_path = root / fs::path(p.manifest.evidence_dir) /
                              fs::path(std::string(kEvidenceIndexFileName));
  if (fs::exists(index_path)) p.evidence = load_evidence_index(read_file_bytes(index_path));
  p.evidence_findings = verify_evidence_integrity(p.evidence, root);
  if (count_errors(p.evidence_findings) > 0) {
    print_findings(std::cerr, p.evidence_findings);
    throw Error(ErrorCode::validation_required, root.string(),
                "evidence pack failed integrity verification");
  }
  p.evidence_level = max_evidenced_level(p.evidence, matrix);
  return p;
}

// ---------------------------------------------------------------------------
// init: scaffold a minimal asset that validates cleanly.
// ---------------------------------------------------------------------------

int cmd_init(const fs::path& root, const std::string& asset_id) {
  if (!is_valid_asset_id(asset_id))
    throw Error(ErrorCode::invalid_value, "--id",
                "expected 1-64 lowercase alphanumeric or hyphen characters");
  const fs::path manifest_path = root / fs::path(std::string(kManifestFileName));
  if (fs::exists(manifest_path))
    throw Error(ErrorCode::io_failure, manifest_path.string(),
                "already initialized; refusing to overwrite");

  std::error_code ec;
  fs::create_directories(root / "schemas", ec);
  fs::create_directories(root / "tests", ec);
  fs::create_directories(root / "evidence" / "batches", ec);
  if (ec) throw Error(ErrorCode::io_failure, root.string(), "cannot create directories");

  write_file_atomic(root / "template.md",
                    "# Prompt template\n\nDescribe the task for the model here.\n");
  write_file_atomic(root / "schemas" / "input.schema.json", "{\n  \"type\": \"object\"\n}\n");
  write_file_atomic(root / "schemas" / "output.schema.json", "{\n  \"type\": \"object\"\n}\n");
  write_file_atomic(root / "tests" / "suite.json", "{\n  \"cases\": []\n}\n");
  write_file_atomic(root / "evidence" / std::string(kEvidenceIndexFileName),
                    canonical_pretty(evidence_index_to_json(EvidenceIndex{})));

  PromptAssetManifest m;
  m.schema_version = kManifestSchemaVersion;
  m.id = {asset_id, "0.1.0"};
  m.prompt_spec = {"template.md", "Fill in the operating instructions for this prompt.",
                   std::nullopt};
  m.interface = {"schemas/input.schema.json", "schemas/output.schema.json"};
  m.execution_context.model_binding = {"example-provider", "example-model", std::nullopt};
  m.execution_context.inference_parameters.emplace("temperature", json(0.0));
  m.assurance = {"tests/suite.json", {"Outputs validate against the output schema."}};
  m.evidence_dir = "evidence";
  m.governance.owner = "unassigned";
  m.governance.license = "UNLICENSED";
  write_file_atomic(manifest_path, serialize_manifest(m));

  std::cout << "Initialized prompt asset '" << asset_id << "' at " << root.string() << "\n";
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const fs::path& root, const GlobalOptions& g) {
  PromptAssetManifest manifest = read_manifest(root);
  ValidationReport report = validate_asset(manifest, root, resolve_now(g));
  if (g.format == "json") {
    json j = json::object();
    j["findings"] = findings_to_json(report.findings);
    j["valid"] = report.valid();
    std::cout << canonical_pretty(j);
  } else {
    print_findings(std::cout, report.findings);
    std::cout << (report.valid() ? "valid" : "invalid") << ": " << count_errors(report.findings)
              << " error(s), " << count_warnings(report.findings) << " warning(s)\n";
  }
  return report.valid() ? kExitSuccess : kExitValidation;
}

// ---------------------------------------------------------------------------
// score: batch summary only, no gating.
// ---------------------------------------------------------------------------

int cmd_score(const fs::path& root, const GlobalOptions& g) {
  ThresholdProfile profile = resolve_profile(g);
  RequirementMatrix matrix = resolve_matrix(g);
  PipelineResult p = run_pipeline(root, profile, matrix, resolve_now(g));
  if (g.format == "json") {
    json j = json::object();
    j["batch_count"] = static_cast<std::int64_t>(p.summary.batch_count);
    j["degraded"] = p.summary.degraded;
    j["means"] = score_object_to_json(p.summary.means);
    j["instabilities"] = score_object_to_json(p.summary.instabilities);
    std::cout << canonical_pretty(j);
  } else if (g.format == "markdown") {
    std::cout << "| Dimension | Mean | Sigma |\n|-----------|-----:|------:|\n";
    for (Dimension d : kDimensions)
      std::cout << "| " << dimension_key(d) << " | " << format_score(p.summary.means[d])
                << " | " << format_score(p.summary.instabilities[d]) << " |\n";
    std::cout << "\nBatches: " << p.summary.batch_count
              << (p.summary.degraded ? " (degraded: below min_batches)" : "") << "\n";
  } else {
    std::cout << "S=" << format_score_tuple(p.summary.means) << "\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// qualify: the full pipeline, optional report file and registry record.
// ---------------------------------------------------------------------------

ConformanceReport build_report(const PipelineResult& p, const QualificationResult& result,
                               const ConformanceLabel& label,
                               const std::vector<std::string>& deviations,
                               const std::string& now) {
  ConformanceReport report;
  report.result = result;
  report.label = label;
  report.deviations = deviations;
  report.validation_findings = FindingCounts::of(p.validation_findings);
  report.evidence_findings = FindingCounts::of(p.evidence_findings);
  report.generated_at = now;
  report.tool_version = kToolVersion;
  validate_report(report);
  return report;
}

std::string render_in_format(const ConformanceReport& report, const std::string& format) {
  if (format == "markdown") return render_report_markdown(report);
  if (format == "tuple") return render_tuple(report.result) + "\n";
  return render_report_json(report);
}

int cmd_qualify(const fs::path& root, const GlobalOptions& g, const std::string& out_path,
                bool record, const std::vector<std::string>& deviations) {
  ThresholdProfile profile = resolve_profile(g);
  RequirementMatrix matrix = resolve_matrix(g);
  const std::string now = resolve_now(g);

  PipelineResult p = run_pipeline(root, profile, matrix, now);
  QualificationResult result = qualify(p.summary, profile, p.evidence_level);
  ConformanceLabel label = determine_label(profile, matrix_is_default(g, matrix), deviations);
  ConformanceReport report = build_report(p, result, label, deviations, now);

  emit(render_in_format(report, g.format), out_path);

  if (record) {
    AssetFingerprint fingerprint = asset_fingerprint(p.manifest, root, now);
    RegistryRecord rec = append_record(fs::path(g.registry_dir), p.manifest.id.asset_id,
                                       p.manifest.id.version, fingerprint, result, now);
    std::cerr << "recorded seq " << rec.record_seq << " (" << rec.record_hash.substr(0, 12)
              << "...)\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// gate: CI check against a target level.
// ---------------------------------------------------------------------------

int cmd_gate(const fs::path& root, const GlobalOptions& g, int target) {
  ThresholdProfile profile = resolve_profile(g);
  RequirementMatrix matrix = resolve_matrix(g);
  PipelineResult p = run_pipeline(root, profile, matrix, resolve_now(g));
  QualificationResult result = qualify(p.summary, profile, p.evidence_level);

  std::cout << render_tuple(result) << "\n";
  if (result.effective_level >= target) return kExitSuccess;

  ImprovementFrontier frontier = improvement_frontier(p.summary, profile, target);
  const LevelRow& row = profile.row(target);
  std::cout << "Improvement frontier for level " << target << ":\n";
  if (frontier.prs_deficit > 0)
    std::cout << "- PRS: +" << format_score(frontier.prs_deficit) << " (threshold "
              << format_score(row.theta) << ")\n";
  for (Dimension d : kDimensions)
    if (frontier.dimension_deficits[d] > 0)
      std::cout << "- " << dimension_key(d) << " (" << dimension_title(d) << "): +"
                << format_score(frontier.dimension_deficits[d]) << " (minimum "
                << format_score(row.delta[d]) << ")\n";
  if (result.evidence_level < target) {
    std::cout << "- evidence: level " << result.evidence_level << " caps the claim; missing:";
    const KindSet required = required_kinds(target, matrix);
    const KindSet present = kinds_present(p.evidence);
    for (const std::string& kind : required)
      if (!present.count(kind)) std::cout << " " << kind;
    std::cout << "\n";
  }
  return kExitGateFail;
}

// ---------------------------------------------------------------------------
// whatif: one-parameter sensitivity sweeps.
// ---------------------------------------------------------------------------

struct SweepSpec {
  std::string param;  // "lambda", "weight.R".."weight.O", "offset"
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
};

SweepSpec parse_sweep(const std::string& text) {
  const auto bad = [&](const std::string& why) {
    return Error(ErrorCode::invalid_sweep, text, why);
  };
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos) throw bad("expected <param>=<start>:<stop>:<steps>");
  SweepSpec spec;
  spec.param = text.substr(0, eq);
  const bool is_weight =
      spec.param.size() == 8 && spec.param.rfind("weight.", 0) == 0 &&
      dimension_from_key(spec.param.substr(7)).has_value();
  if (spec.param != "lambda" && spec.param != "offset" && !is_weight)
    throw bad("parameter must be lambda, offset, or weight.<R|S|C|G|O>");

  const std::string range = text.substr(eq + 1);
  const std::size_t c1 = range.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : range.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw bad("expected <start>:<stop>:<steps>");
  try {
    std::size_t used = 0;
    spec.start = std::stod(range.substr(0, c1), &used);
    if (used != c1) throw bad("malformed start value");
    const std::string stop_text = range.substr(c1 + 1, c2 - c1 - 1);
    spec.stop = std::stod(stop_text, &used);
    if (used != stop_text.size()) throw bad("malformed stop value");
    const std::string steps_text = range.substr(c2 + 1);
    spec.steps = std::stoi(steps_text, &used);
    if (used != steps_text.size()) throw bad("malformed step count");
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw bad("malformed numeric field");
  }
  if (spec.steps < 1 || spec.steps > 1000) throw bad("step count must be in 1..1000");
  return spec;
}

ThresholdProfile profile_at(const ThresholdProfile& base, const SweepSpec& spec, double value) {
  ThresholdProfile p = base;
  p.canonical = false;  // swept profiles are derived, never the shipped one
  if (spec.param == "lambda") {
    if (value < 0) throw Error(ErrorCode::invalid_sweep, spec.param, "lambda must be >= 0");
    p.scoring.lambda = value;
  } else if (spec.param == "offset") {
    const auto clamp = [](double v) { return std::min(100.0, std::max(0.0, v)); };
    for (LevelRow& row : p.levels) {
      row.theta = clamp(row.theta + value);
      for (Dimension d : kDimensions) row.delta[d] = clamp(row.delta[d] + value);
    }
  } else {
    const Dimension target = *dimension_from_key(spec.param.substr(7));
    if (!(value >= 0.0 && value <= 1.0))
      throw Error(ErrorCode::invalid_sweep, spec.param, "weight must be in [0, 1]");
    const double rest = 1.0 - base.scoring.weights[target];
    if (rest <= 0.0 && value < 1.0)
      throw Error(ErrorCode::invalid_sweep, spec.param,
                  "cannot renormalize: remaining weights sum to 0");
    // Renormalize the other four proportionally so the sum stays exactly 1.
    for (Dimension d : kDimensions)
      p.scoring.weights[d] =
          d == target ? value : base.scoring.weights[d] * (1.0 - value) / rest;
  }
  return p;
}

std::string format_sweep_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

int cmd_whatif(const fs::path& root, const GlobalOptions& g, const std::string& sweep_text) {
  const SweepSpec spec = parse_sweep(sweep_text);
  ThresholdProfile base = resolve_profile(g);
  RequirementMatrix matrix = resolve_matrix(g);
  PipelineResult p = run_pipeline(root, base, matrix, resolve_now(g));

  json rows = json::array();
  std::string table = "value\tprs\tscore_level\n";
  for (int i = 0; i < spec.steps; ++i) {
    const double value =
        spec.steps == 1
            ? spec.start
            : spec.start + (spec.stop - spec.start) * static_cast<double>(i) /
                               static_cast<double>(spec.steps - 1);
    ThresholdProfile swept = profile_at(base, spec, value);
    const double prs = compute_prs(p.summary, swept);
    const int level = determine_prl(prs, p.summary.means, swept);
    if (g.format == "json") {
      json row = json::object();
      row["value"] = value;
      row["prs"] = prs;
      row["score_level"] = level;
      rows.push_back(std::move(row));
    } else {
      table += format_sweep_value(value) + "\t" + format_score(prs) + "\t" +
               std::to_string(level) + "\n";
    }
  }
  if (g.format == "json") {
    json j = json::object();
    j["parameter"] = spec.param;
    j["rows"] = std::move(rows);
    std::cout << canonical_pretty(j);
  } else {
    std::cout << table;
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// report: re-render a stored qualification from the registry. The label is
// recomputed from the stored profile_id and the current matrix/deviation
// flags, since records do not embed label claims.
// ---------------------------------------------------------------------------

int cmd_report(const GlobalOptions& g, const std::string& asset_id,
               std::optional<std::int64_t> seq, const std::vector<std::string>& deviations) {
  std::vector<Finding> findings = verify_registry(fs::path(g.registry_dir));
  if (!findings.empty()) {
    print_findings(std::cerr, findings);
    throw Error(ErrorCode::chain_corrupt, g.registry_dir,
                "registry fails verification; refusing to render from it");
  }
  LoadedRegistry loaded = read_registry(fs::path(g.registry_dir));
  std::vector<RegistryRecord> records = history(loaded.index, asset_id);
  if (records.empty())
    throw Error(ErrorCode::invalid_value, asset_id, "no registry records for this asset");

  const RegistryRecord* chosen = &records.back();
  if (seq) {
    chosen = nullptr;
    for (const RegistryRecord& r : records)
      if (r.record_seq == *seq) chosen = &r;
    if (!chosen)
      throw Error(ErrorCode::invalid_value, "--seq",
                  "no record with that sequence number for this asset");
  }

  const bool canonical_used = chosen->profile_id == canonical_profile().profile_id;
  ConformanceReport report;
  report.result = chosen->result;
  report.label = determine_label(canonical_used, g.matrix_path.empty(), deviations);
  report.deviations = deviations;
  report.generated_at = resolve_now(g);
  report.tool_version = kToolVersion;
  validate_report(report);
  std::cout << render_in_format(report, g.format);
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// registry list | history | verify
// ---------------------------------------------------------------------------

void print_record_rows(const std::vector<RegistryRecord>& records, const GlobalOptions& g) {
  if (g.format == "json") {
    json arr = json::array();
    for (const RegistryRecord& r : records)
      arr.push_back(registry_record_to_json(r, /*include_hash=*/true));
    std::cout << canonical_pretty(arr);
    return;
  }
  std::cout << "seq\tasset\tversion\tlevel\tprs\trecorded_at\n";
  for (const RegistryRecord& r : records)
    std::cout << r.record_seq << '\t' << r.asset_id << '\t' << r.version << '\t'
              << r.result.effective_level << '\t' << format_score(r.result.prs) << '\t'
              << r.recorded_at << '\n';
}

int cmd_registry_list(const GlobalOptions& g) {
  LoadedRegistry loaded = read_registry(fs::path(g.registry_dir));
  if (!loaded.findings.empty()) print_findings(std::cerr, loaded.findings);
  print_record_rows(loaded.index.records, g);
  return kExitSuccess;
}

int cmd_registry_history(const GlobalOptions& g, const std::string& asset_id) {
  LoadedRegistry loaded = read_registry(fs::path(g.registry_dir));
  if (!loaded.findings.empty()) print_findings(std::cerr, loaded.findings);
  print_record_rows(history(loaded.index, asset_id), g);
  return kExitSuccess;
}

int cmd_registry_verify(const GlobalOptions& g) {
  std::vector<Finding> findings = verify_registry(fs::path(g.registry_dir));
  LoadedRegistry loaded = read_registry(fs::path(g.registry_dir));
  if (findings.empty()) {
    std::cout << "registry intact: " << loaded.index.records.size() << " record(s)\n";
    return kExitSuccess;
  }
  print_findings(std::cout, findings);
  return kExitValidation;
}

// ---------------------------------------------------------------------------
// profile init | validate
// ---------------------------------------------------------------------------

int cmd_profile_init(const std::string& out_path) {
  emit(canonical_pretty(profile_to_json(canonical_profile())), out_path);
  return kExitSuccess;
}

int cmd_profile_validate(const std::string& path) {
  ThresholdProfile profile = load_profile(read_file_bytes(path));
  std::cout << "profile '" << profile.profile_id << "' is valid ("
            << (profile.canonical ? "canonical" : "custom") << ")\n";
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prompt readiness qualification engine"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--profile", g.profile_path, "Threshold profile file (default: embedded)")
      ->envname("PRL_PROFILE");
  app.add_option("--matrix", g.matrix_path, "Evidence requirement matrix file (default: embedded)");
  app.add_option("--now", g.now, "Clock override, RFC 3339 instant (for reproducible output)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "markdown", "tuple"}));
  app.add_option("--registry", g.registry_dir, "Registry directory (default: registry)");

  int rc = kExitSuccess;

  // init
  std::string init_root;
  std::string init_id = "sample-asset";
  auto* init = app.add_subcommand("init", "Scaffold a prompt asset skeleton");
  init->add_option("root", init_root, "Asset directory to create")->required();
  init->add_option("--id", init_id, "Asset identifier (lowercase alphanumeric/hyphen)");
  init->callback([&] { rc = cmd_init(fs::path(init_root), init_id); });

  // validate
  std::string validate_root;
  auto* validate = app.add_subcommand("validate", "Validate an asset directory");
  validate->add_option("root", validate_root, "Asset directory")->required();
  validate->callback([&] { rc = cmd_validate(fs::path(validate_root), g); });

  // score
  std::string score_root;
  auto* score = app.add_subcommand("score", "Summarize evaluation batches (no gating)");
  score->add_option("root", score_root, "Asset directory")->required();
  score->callback([&] { rc = cmd_score(fs::path(score_root), g); });

  // qualify
  std::string qualify_root;
  std::string qualify_out;
  bool qualify_record = false;
  std::vector<std::string> qualify_deviations;
  auto* qualify = app.add_subcommand("qualify", "Run the full qualification pipeline");
  qualify->add_option("root", qualify_root, "Asset directory")->required();
  qualify->add_option("--out", qualify_out, "Write the report to this file instead of stdout");
  qualify->add_flag("--record", qualify_record, "Append the result to the registry");
  qualify->add_option("--deviation", qualify_deviations,
                      "Documented deviation from the framework (repeatable)");
  qualify->callback([&] {
    rc = cmd_qualify(fs::path(qualify_root), g, qualify_out, qualify_record,
                     qualify_deviations);
  });

  // gate
  std::string gate_root;
  int gate_target = 0;
  auto* gate = app.add_subcommand("gate", "Check the asset against a target level");
  gate->add_option("root", gate_root, "Asset directory")->required();
  gate->add_option("target", gate_target, "Target level (1-9)")
      ->required()
      ->check(CLI::Range(1, 9));
  gate->callback([&] { rc = cmd_gate(fs::path(gate_root), g, gate_target); });

  // whatif
  std::string whatif_root;
  std::string whatif_sweep;
  auto* whatif = app.add_subcommand("whatif", "Sweep one scoring parameter");
  whatif->add_option("root", whatif_root, "Asset directory")->required();
  whatif
      ->add_option("--sweep", whatif_sweep,
                   "Sweep spec: lambda=<a>:<b>:<steps>, weight.<D>=<a>:<b>:<steps>, "
                   "or offset=<a>:<b>:<steps>")
      ->required();
  whatif->callback([&] { rc = cmd_whatif(fs::path(whatif_root), g, whatif_sweep); });

  // report
  std::string report_asset;
  std::int64_t report_seq = -1;
  bool report_seq_set = false;
  std::vector<std::string> report_deviations;
  auto* report = app.add_subcommand("report", "Re-render a stored qualification");
  report->add_option("asset_id", report_asset, "Asset identifier")->required();
  auto* seq_opt = report->add_option("--seq", report_seq, "Record sequence number (default: latest)");
  report->add_option("--deviation", report_deviations,
                     "Documented deviation from the framework (repeatable)");
  report->callback([&] {
    report_seq_set = seq_opt->count() > 0;
    rc = cmd_report(g, report_asset,
                    report_seq_set ? std::optional<std::int64_t>(report_seq) : std::nullopt,
                    report_deviations);
  });

  // registry
  auto* registry = app.add_subcommand("registry", "Inspect the qualification registry");
  registry->require_subcommand(1);
  auto* registry_list = registry->add_subcommand("list", "List all records");
  registry_list->callback([&] { rc = cmd_registry_list(g); });
  std::string history_asset;
  auto* registry_history = registry->add_subcommand("history", "List records for one asset");
  registry_history->add_option("asset_id", history_asset, "Asset identifier")->required();
  registry_history->callback([&] { rc = cmd_registry_history(g, history_asset); });
  auto* registry_verify = registry->add_subcommand("verify", "Verify the hash chain");
  registry_verify->callback([&] { rc = cmd_registry_verify(g); });

  // profile
  auto* profile = app.add_subcommand("profile", "Work with threshold profiles");
  profile->require_subcommand(1);
  std::string profile_out;
  auto* profile_init = profile->add_subcommand("init", "Write the canonical profile");
  profile_init->add_option("--out", profile_out, "Output file (default: stdout)");
  profile_init->callback([&] { rc = cmd_profile_init(profile_out); });
  std::string profile_path_arg;
  auto* profile_validate = profile->add_subcommand("validate", "Validate a profile file");
  profile_validate->add_option("path", profile_path_arg, "Profile file")->required();
  profile_validate->callback([&] { rc = cmd_profile_validate(profile_path_arg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return rc;
}
