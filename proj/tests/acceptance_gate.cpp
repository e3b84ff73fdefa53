// Acceptance gate: one self-contained check per release criterion, each
// printed as a PASS/FAIL line. Exits with the number of failed criteria, so
// CTest treats any failure as a failed test. Usage:
//   acceptance_gate <path-to-prlqual-binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/test_support.hpp"

using namespace prlqual;
using namespace testsupport;

namespace {

// ---------------------------------------------------------------------------
// Harness.
// ---------------------------------------------------------------------------

struct CriterionResult {
  bool passed = false;
  std::string detail;  // failure explanation, empty on pass
};

CriterionResult pass() { return {true, ""}; }
CriterionResult fail(const std::string& why) { return {false, why}; }

int g_failures = 0;

void run_criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<CriterionResult()>& body) {
  const auto started = std::chrono::steady_clock::now();
  CriterionResult result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result = fail(std::string("unexpected exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (result.passed && budget_seconds > 0 && elapsed > budget_seconds)
    result = fail("exceeded runtime budget of " + std::to_string(budget_seconds) + " s");

  if (result.passed) {
    std::printf("PASS criterion %d: %s (%.0f ms)\n", number, name.c_str(), elapsed * 1000.0);
  } else {
    std::printf("FAIL criterion %d: %s: %s\n", number, name.c_str(), result.detail.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// Random case generation (kept independent of the library's own helpers).
// ---------------------------------------------------------------------------

ThresholdProfile random_profile(std::mt19937_64& rng, bool positive_lambda) {
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  ThresholdProfile profile;
  profile.profile_id = "random";
  profile.scoring.lambda =
      std::uniform_real_distribution<double>(positive_lambda ? 0.001 : 0.0, 0.1)(rng);
  profile.scoring.min_batches = 3;

  std::array<double, 5> raw{};
  double total = 0.0;
  for (double& w : raw) {
    w = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    total += w;
  }
  for (std::size_t i = 0; i < raw.size(); ++i)
    profile.scoring.weights.values[i] = raw[i] / total;

  std::array<double, 9> thetas{};
  for (double& t : thetas) t = pct(rng);
  std::sort(thetas.begin(), thetas.end());
  PerDimension<std::array<double, 9>> minima;
  for (Dimension d : kDimensions) {
    for (double& m : minima[d]) m = pct(rng);
    std::sort(minima[d].begin(), minima[d].end());
  }
  for (int n = 1; n <= 9; ++n) {
    LevelRow& row = profile.levels[static_cast<std::size_t>(n - 1)];
    row.n = n;
    row.theta = thetas[static_cast<std::size_t>(n - 1)];
    for (Dimension d : kDimensions) row.delta[d] = minima[d][static_cast<std::size_t>(n - 1)];
  }
  return profile;
}

ScoreVector random_scores(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  ScoreVector s;
  for (Dimension d : kDimensions) s[d] = pct(rng);
  return s;
}

ScoreSummary summary_of(const ScoreVector& scores) {
  ScoreSummary summary;
  summary.means = scores;
  summary.batch_count = 3;
  return summary;
}

// Brute-force reference: walk levels from the top, return the first level
// whose threshold and minima all hold. Shares no code with determine_prl.
int reference_prl(double prs, const ScoreVector& scores, const ThresholdProfile& profile) {
  for (int n = 9; n >= 1; --n) {
    const LevelRow& row = profile.levels[static_cast<std::size_t>(n - 1)];
    if (prs < row.theta) continue;
    bool ok = true;
    for (std::size_t i = 0; i < scores.values.size(); ++i)
      if (scores.values[i] < row.delta.values[i]) ok = false;
    if (ok) return n;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------------

// 1. The committed fixture reproduces the reference tuple byte for byte,
//    through the real CLI.
CriterionResult criterion_tuple_reproduction() {
  ScratchDir dir;
  const fs::path asset = dir.path() / "asset";
  const fs::path profile = dir.path() / "profile.json";
  write_worked_asset(asset);
  write_worked_profile_file(profile);

  CliResult r = run_cli({"--profile", profile.string(), "--now", kWorkedInstant, "--format",
                         "tuple", "qualify", asset.string()},
                        dir.path());
  const std::string expected =
      "(PRL=4, PRS=68, S=(78, 83, 62, 70, 55), theta=65, delta=(60, 60, 60, 50, 40))\n";
  if (r.exit_code != 0)
    return fail("qualify exited " + std::to_string(r.exit_code) + ": " + r.err);
  if (r.out != expected)
    return fail("tuple mismatch: got \"" + r.out + "\", expected \"" + expected + "\"");
  return pass();
}

// 2. Veto property: any dimension under a level's minimum forbids that level.
CriterionResult criterion_gating_veto() {
  std::mt19937_64 rng(0xACC2);
  for (int trial = 0; trial < 10000; ++trial) {
    ThresholdProfile profile = random_profile(rng, false);
    ScoreVector scores = random_scores(rng);
    double prs = compute_prs(summary_of(scores), profile);
    int level = determine_prl(prs, scores, profile);
    for (int n = 1; n <= 9; ++n) {
      bool weak = false;
      for (Dimension d : kDimensions)
        if (scores[d] < profile.levels[static_cast<std::size_t>(n - 1)].delta[d]) weak = true;
      if (weak && level >= n)
        return fail("trial " + std::to_string(trial) + ": level " + std::to_string(level) +
                    " assigned despite a dimension below the level-" + std::to_string(n) +
                    " minimum");
    }
  }
  return pass();
}

// 3. determine_prl agrees with an independently written level scan.
CriterionResult criterion_oracle_equivalence() {
  std::mt19937_64 rng(0xACC3);
  for (int trial = 0; trial < 10000; ++trial) {
    ThresholdProfile profile = random_profile(rng, false);
    ScoreVector scores = random_scores(rng);
    double prs = compute_prs(summary_of(scores), profile);
    int expected = reference_prl(prs, scores, profile);
    int actual = determine_prl(prs, scores, profile);
    if (actual != expected)
      return fail("trial " + std::to_string(trial) + ": determine_prl=" +
                  std::to_string(actual) + ", reference=" + std::to_string(expected));
  }
  return pass();
}

// 4. PRS stays in [0,100], never drops when a mean rises, never rises when an
//    instability rises (lambda > 0).
CriterionResult criterion_prs_bounds_monotonicity() {
  std::mt19937_64 rng(0xACC4);
  std::uniform_real_distribution<double> bump(0.0, 25.0);
  for (int trial = 0; trial < 10000; ++trial) {
    ThresholdProfile profile = random_profile(rng, true);
    ScoreSummary summary = summary_of(random_scores(rng));
    for (Dimension d : kDimensions)
      summary.instabilities[d] = std::uniform_real_distribution<double>(0.0, 30.0)(rng);

    double prs = compute_prs(summary, profile);
    if (!(prs >= 0.0 && prs <= 100.0))
      return fail("trial " + std::to_string(trial) + ": PRS " + std::to_string(prs) +
                  " out of [0,100]");

    for (Dimension d : kDimensions) {
      ScoreSummary better = summary;
      better.means[d] = std::min(100.0, better.means[d] + bump(rng));
      if (compute_prs(better, profile) < prs)
        return fail("trial " + std::to_string(trial) + ": PRS dropped when mean " +
                    std::string(dimension_key(d)) + " rose");
      ScoreSummary shakier = summary;
      shakier.instabilities[d] += bump(rng);
      if (compute_prs(shakier, profile) > prs)
        return fail("trial " + std::to_string(trial) + ": PRS rose when sigma " +
                    std::string(dimension_key(d)) + " rose");
    }
  }
  return pass();
}

// 5. summarize_batches matches a two-pass reference within 1e-9.
CriterionResult criterion_summary_oracle() {
  std::mt19937_64 rng(0xACC5);
  std::uniform_real_distribution<double> score(0.0, 100.0);
  ScoringConfig config;
  config.weights = make_scores(0.2, 0.2, 0.2, 0.2, 0.2);
  config.lambda = 0.02;
  config.min_batches = 3;

  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    std::vector<EvaluationBatch> batches;
    for (int i = 0; i < n; ++i) {
      EvaluationBatch b = worked_batch(i);
      for (Dimension d : kDimensions) b.scores[d] = score(rng);
      batches.push_back(std::move(b));
    }
    ScoreSummary summary = summarize_batches(batches, config);
    for (Dimension d : kDimensions) {
      double sum = 0.0;
      for (const auto& b : batches) sum += b.scores[d];
      const double mean = sum / n;
      if (std::abs(summary.means[d] - mean) > 1e-9)
        return fail("trial " + std::to_string(trial) + ": mean off by " +
                    std::to_string(std::abs(summary.means[d] - mean)));
      double sigma = 0.0;
      if (n >= 2) {
        double acc = 0.0;
        for (const auto& b : batches) acc += (b.scores[d] - mean) * (b.scores[d] - mean);
        sigma = std::sqrt(acc / (n - 1));
      }
      if (std::abs(summary.instabilities[d] - sigma) > 1e-9)
        return fail("trial " + std::to_string(trial) + ": sigma off by " +
                    std::to_string(std::abs(summary.instabilities[d] - sigma)));
    }
  }
  return pass();
}

// 6. Evidence stage-gating: exhaustive removal check over the default matrix,
//    plus the evidence cap on the effective level.
CriterionResult criterion_evidence_stage_gate() {
  const RequirementMatrix matrix = default_requirement_matrix();
  for (int m = 1; m <= 5; ++m) {
    const KindSet required = required_kinds(m, matrix);
    for (const std::string& removed : required) {
      EvidenceIndex index;
      for (const std::string& kind : required) {
        if (kind == removed) continue;
        EvidenceEntry entry;
        entry.kind = kind;
        entry.path = "evidence/" + kind + ".md";
        entry.sha256 = sha256_hex(kind);
        entry.created = kWorkedInstant;
        index.entries.push_back(std::move(entry));
      }
      const int level = max_evidenced_level(index, matrix);
      if (level >= m)
        return fail("level " + std::to_string(m) + " still evidenced after removing " +
                    removed);
    }
  }

  ScoreSummary summary = summarize_batches(worked_batches(3), worked_profile().scoring);
  QualificationResult result = qualify(summary, worked_profile(), 2);
  if (result.score_level != 4)
    return fail("fixture score level is " + std::to_string(result.score_level) + ", not 4");
  if (result.effective_level != 2)
    return fail("evidence level 2 produced effective level " +
                std::to_string(result.effective_level) + ", not 2");
  return pass();
}

// 7. Registry tamper detection across sampled byte substitutions.
CriterionResult criterion_registry_tamper() {
  ScratchDir dir;
  const fs::path registry = dir.path() / "registry";
  ScoreSummary summary = summarize_batches(worked_batches(3), worked_profile().scoring);
  QualificationResult result = qualify(summary, worked_profile(), 4);
  for (int i = 0; i < 5; ++i)
    append_record(registry, "triage-bot", "1." + std::to_string(i) + ".0",
                  AssetFingerprint{sha256_hex("v" + std::to_string(i))}, result,
                  kWorkedInstant);
  if (!verify_registry(registry).empty()) return fail("fixture registry is not intact");

  const std::string original = read_file(registry_file_path(registry));
  std::mt19937_64 rng(0xACC7);
  std::uniform_int_distribution<std::size_t> position(0, original.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);

  for (int trial = 0; trial < 1200; ++trial) {
    const std::size_t pos = position(rng);
    char replacement = static_cast<char>(byte(rng));
    if (replacement == original[pos]) replacement = static_cast<char>(replacement ^ 0x1);
    std::string tampered = original;
    tampered[pos] = replacement;
    write_file(registry_file_path(registry), tampered);
    if (verify_registry(registry).empty())
      return fail("substitution at byte " + std::to_string(pos) + " went undetected");
  }
  return pass();
}

// 8. Fixed-clock runs are byte-identical, reports and registry records both.
CriterionResult criterion_determinism() {
  ScratchDir dir;
  const fs::path asset = dir.path() / "asset";
  const fs::path profile = dir.path() / "profile.json";
  write_worked_asset(asset);
  write_worked_profile_file(profile);

  std::string reports[2];
  std::string registries[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path registry = dir.path() / ("registry-" + std::to_string(i));
    CliResult r = run_cli({"--profile", profile.string(), "--now", kWorkedInstant, "qualify",
                           asset.string(), "--record", "--registry", registry.string()},
                          dir.path());
    if (r.exit_code != 0)
      return fail("run " + std::to_string(i) + " exited " + std::to_string(r.exit_code) + ": " +
                  r.err);
    reports[i] = r.out;
    registries[i] = read_file(registry / "records.jsonl");
  }
  if (reports[0] != reports[1]) return fail("JSON reports differ between runs");
  if (registries[0] != registries[1]) return fail("registry records differ between runs");
  return pass();
}

// 9. Penalty identities, with the reference value evaluated independently.
CriterionResult criterion_penalty_identities() {
  if (instability_penalty(14.142135623730951, 0.0) != 1.0)
    return fail("penalty(sigma, 0) != 1 exactly");
  if (instability_penalty(0.0, 0.75) != 1.0) return fail("penalty(0, lambda) != 1 exactly");
  const double reference = 0.753638;  // exp(-0.02 * 14.142135), evaluated offline
  const double actual = instability_penalty(14.142135, 0.02);
  if (std::abs(actual - reference) >= 1e-6)
    return fail("penalty(14.142135, 0.02) = " + std::to_string(actual) + ", expected " +
                std::to_string(reference) + " within 1e-6");
  return pass();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance_gate <path-to-prlqual-binary>\n");
    return 2;
  }
  // run_cli spawns from scratch directories, so the path must stay valid there.
  g_cli_bin_override = fs::absolute(argv[1]).string();

  run_criterion(1, "reference tuple reproduction", 1.0, criterion_tuple_reproduction);
  run_criterion(2, "gating veto property", 10.0, criterion_gating_veto);
  run_criterion(3, "oracle equivalence", 0.0, criterion_oracle_equivalence);
  run_criterion(4, "PRS bounds and monotonicity", 0.0, criterion_prs_bounds_monotonicity);
  run_criterion(5, "summary statistics oracle", 0.0, criterion_summary_oracle);
  run_criterion(6, "evidence stage-gate", 1.0, criterion_evidence_stage_gate);
  run_criterion(7, "registry tamper detection", 0.0, criterion_registry_tamper);
  run_criterion(8, "determinism", 0.0, criterion_determinism);
  run_criterion(9, "penalty identities", 0.0, criterion_penalty_identities);

  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return g_failures;
}
