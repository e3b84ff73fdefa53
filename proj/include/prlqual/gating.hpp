#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "prlqual/scoring.hpp"

namespace prlqual {

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 9;

// One row of the readiness ladder: the global threshold theta and the
// per-dimension "no weak link" minima delta for level n.
struct LevelRow {
  int n = 0;
  double theta = 0.0;
  ScoreVector delta;

  friend bool operator==(const LevelRow&, const LevelRow&) = default;
};

// The complete parameter set an asset is qualified against. `canonical` is
// reserved for the shipped default table; loading verifies the flag.
struct ThresholdProfile {
  std::string profile_id;
  bool canonical = false;
  ScoringConfig scoring;
  std::array<LevelRow, 9> levels{};  // n = 1..9 in order

  const LevelRow& row(int n) const { return levels[static_cast<std::size_t>(n - 1)]; }

  friend bool operator==(const ThresholdProfile&, const ThresholdProfile&) = default;
};

struct GateFailure {
  Dimension dimension;
  double score = 0.0;
  double minimum = 0.0;

  friend bool operator==(const GateFailure&, const GateFailure&) = default;
};

struct GateOutcome {
  int level = 0;
  bool passed = false;
  std::vector<GateFailure> failing_dimensions;  // R,S,C,G,O order
};

// The reportable qualification tuple plus the evidence cap.
struct QualificationResult {
  double prs = 0.0;
  int score_level = 0;     // from scores alone
  int evidence_level = 0;  // from the evidence pack
  int effective_level = 0; // min(score_level, evidence_level)
  ScoreVector score_vector;
  PerDimension<double> instabilities;
  std::optional<LevelRow> applied_row;  // row of effective_level when >= 1
  bool degraded = false;
  std::string profile_id;

  friend bool operator==(const QualificationResult&, const QualificationResult&) = default;
};

// Shipped default ladder. Level 4 is the framework's published anchor; the
// remaining rows are a monotone ramp through it and are overridable per
// profile.
inline ThresholdProfile canonical_profile() {
  ThresholdProfile p;
  p.profile_id = "canonical-v1";
  p.canonical = true;
  p.scoring.weights = {{0.2, 0.2, 0.2, 0.2, 0.2}};
  p.scoring.lambda = 0.02;
  p.scoring.min_batches = 3;
  p.levels = {{
      {1, 20.0, make_scores(10, 10, 10, 5, 5)},
      {2, 30.0, make_scores(20, 20, 20, 10, 10)},
      {3, 45.0, make_scores(40, 40, 40, 30, 20)},
      {4, 65.0, make_scores(60, 60, 60, 50, 40)},
      {5, 72.0, make_scores(70, 70, 65, 60, 50)},
      {6, 78.0, make_scores(75, 75, 75, 70, 60)},
      {7, 84.0, make_scores(80, 80, 80, 75, 70)},
      {8, 90.0, make_scores(85, 85, 88, 85, 80)},
      {9, 95.0, make_scores(90, 90, 92, 90, 85)},
  }};
  return p;
}

inline void validate_profile(const ThresholdProfile& profile) {
  if (profile.profile_id.empty())
    throw Error(ErrorCode::invalid_value, "profile_id", "must be non-empty");
  validate_scoring_config(profile.scoring);
  for (int n = kMinLevel; n <= kMaxLevel; ++n) {
    const LevelRow& row = profile.row(n);
    if (row.n != n)
      throw Error(ErrorCode::missing_level, "levels",
                  "levels must be n = 1..9 in order; found n=" + std::to_string(row.n) +
                      " at position " + std::to_string(n));
    if (!(row.theta >= 0.0 && row.theta <= 100.0))
      throw Error(ErrorCode::invalid_value, "levels[" + std::to_string(n) + "].theta",
                  "must be in [0, 100]");
    for (Dimension d : kDimensions)
      if (!(row.delta[d] >= 0.0 && row.delta[d] <= 100.0))
        throw Error(ErrorCode::invalid_value,
                    "levels[" + std::to_string(n) + "].delta." + std::string(dimension_key(d)),
                    "must be in [0, 100]");
    if (n > kMinLevel) {
      const LevelRow& prev = profile.row(n - 1);
      if (row.theta < prev.theta)
        throw Error(ErrorCode::non_monotone_thresholds, "theta",
                    "theta at level " + std::to_string(n) + " is below level " +
                        std::to_string(n - 1));
      for (Dimension d : kDimensions)
        if (row.delta[d] < prev.delta[d])
          throw Error(ErrorCode::non_monotone_thresholds,
                      "delta." + std::string(dimension_key(d)),
                      "minimum at level " + std::to_string(n) + " is below level " +
                          std::to_string(n - 1));
    }
  }
  // The canonical flag is a conformance claim; it may only mark the shipped
  // default table.
  if (profile.canonical && !(profile == canonical_profile()))
    throw Error(ErrorCode::invalid_value, "canonical",
                "canonical=true is reserved for the shipped default profile");
}

inline json level_row_to_json(const LevelRow& row) {
  json r = json::object();
  r["n"] = row.n;
  r["theta"] = row.theta;
  r["delta"] = score_object_to_json(row.delta);
  return r;
}

inline LevelRow parse_level_row(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  LevelRow row;
  row.n = static_cast<int>(get_integer(reader.require("n"), reader.member("n")));
  row.theta = get_number(reader.require("theta"), reader.member("theta"));
  row.delta = parse_score_object(reader.require("delta"), reader.member("delta"));
  reader.reject_unknown();
  return row;
}

inline json profile_to_json(const ThresholdProfile& profile) {
  json j = json::object();
  j["profile_id"] = profile.profile_id;
  j["canonical"] = profile.canonical;
  j["weights"] = score_object_to_json(profile.scoring.weights);
  j["lambda"] = profile.scoring.lambda;
  j["min_batches"] = profile.scoring.min_batches;
  json levels = json::array();
  for (const LevelRow& row : profile.levels) levels.push_back(level_row_to_json(row));
  j["levels"] = std::move(levels);
  return j;
}

inline ThresholdProfile parse_profile(const json& j) {
  ObjectReader reader(j, "");
  ThresholdProfile profile;
  profile.profile_id =
      get_nonempty_string(reader.require("profile_id"), reader.member("profile_id"));
  profile.canonical = get_bool(reader.require("canonical"), reader.member("canonical"));
  profile.scoring.weights =
      parse_score_object(reader.require("weights"), reader.member("weights"));
  profile.scoring.lambda = get_number(reader.require("lambda"), reader.member("lambda"));
  profile.scoring.min_batches = static_cast<int>(
      get_integer(reader.require("min_batches"), reader.member("min_batches")));
  const json& levels = reader.require("levels");
  if (!levels.is_array())
    throw Error(ErrorCode::invalid_value, "levels", "expected an array of 9 level rows");
  if (levels.size() != 9)
    throw Error(ErrorCode::missing_level, "levels",
                "expected exactly 9 level rows, found " + std::to_string(levels.size()));
  for (std::size_t i = 0; i < 9; ++i)
    profile.levels[i] = parse_level_row(levels[i], "levels[" + std::to_string(i + 1) + "]");
  reader.reject_unknown();
  validate_profile(profile);
  return profile;
}

inline ThresholdProfile load_profile(std::string_view bytes) {
  return parse_profile(parse_json_text(bytes, "profile"));
}

// All five scores must meet the row's minima (inclusive); any single weak
// dimension vetoes the level.
inline GateOutcome gate_passes(const ScoreVector& scores, const LevelRow& row) {
  GateOutcome outcome;
  outcome.level = row.n;
  for (Dimension d : kDimensions)
    if (!(scores[d] >= row.delta[d]))
      outcome.failing_dimensions.push_back({d, scores[d], row.delta[d]});
  outcome.passed = outcome.failing_dimensions.empty();
  return outcome;
}

// The gated readiness score: the weighted aggregate when the veto gate passes
// for at least one level, zero otherwise. With monotone minima the decisive
// row is level 1.
inline double compute_prs(const ScoreSummary& summary, const ThresholdProfile& profile) {
  bool any_gate = false;
  for (const LevelRow& row : profile.levels)
    if (gate_passes(summary.means, row).passed) {
      any_gate = true;
      break;
    }
  if (!any_gate) return 0.0;
  // The weight-sum tolerance admits aggregates a few ulp above 100; the
  // readiness score is a 0-100 scale, so pin it there.
  return std::clamp(base_score(summary, profile.scoring), 0.0, 100.0);
}

// Highest level whose global threshold and per-dimension minima both hold;
// 0 when no level qualifies.
inline int determine_prl(double prs, const ScoreVector& scores,
                         const ThresholdProfile& profile) {
  int level = 0;
  for (int n = kMinLevel; n <= kMaxLevel; ++n) {
    const LevelRow& row = profile.row(n);
    if (prs >= row.theta && gate_passes(scores, row).passed) level = n;
  }
  return level;
}

// Full qualification: score level from the profile, capped by the evidence
// level (a level cannot be claimed without its cumulative evidence pack).
inline QualificationResult qualify(const ScoreSummary& summary,
                                   const ThresholdProfile& profile, int evidence_level) {
  if (evidence_level < 0 || evidence_level > kMaxLevel)
    throw Error(ErrorCode::invalid_value, "evidence_level", "must be in 0..9");
  QualificationResult result;
  result.prs = compute_prs(summary, profile);
  result.score_level = determine_prl(result.prs, summary.means, profile);
  result.evidence_level = evidence_level;
  result.effective_level = std::min(result.score_level, evidence_level);
  result.score_vector = summary.means;
  result.instabilities = summary.instabilities;
  if (result.effective_level >= 1) result.applied_row = profile.row(result.effective_level);
  result.degraded = summary.degraded;
  result.profile_id = profile.profile_id;
  return result;
}

inline json qualification_result_to_json(const QualificationResult& result) {
  json j = json::object();
  j["prs"] = result.prs;
  j["score_level"] = result.score_level;
  j["evidence_level"] = result.evidence_level;
  j["effective_level"] = result.effective_level;
  j["score_vector"] = score_object_to_json(result.score_vector);
  j["instabilities"] = score_object_to_json(result.instabilities);
  if (result.applied_row) j["applied_row"] = level_row_to_json(*result.applied_row);
  j["degraded"] = result.degraded;
  j["profile_id"] = result.profile_id;
  return j;
}

inline QualificationResult parse_qualification_result(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  QualificationResult result;
  result.prs = get_number(reader.require("prs"), reader.member("prs"));
  result.score_level =
      static_cast<int>(get_integer(reader.require("score_level"), reader.member("score_level")));
  result.evidence_level = static_cast<int>(
      get_integer(reader.require("evidence_level"), reader.member("evidence_level")));
  result.effective_level = static_cast<int>(
      get_integer(reader.require("effective_level"), reader.member("effective_level")));
  result.score_vector =
      parse_score_object(reader.require("score_vector"), reader.member("score_vector"));
  result.instabilities =
      parse_score_object(reader.require("instabilities"), reader.member("instabilities"));
  if (const json* row = reader.find("applied_row"))
    result.applied_row = parse_level_row(*row, reader.member("applied_row"));
  result.degraded = get_bool(reader.require("degraded"), reader.member("degraded"));
  result.profile_id =
      get_nonempty_string(reader.require("profile_id"), reader.member("profile_id"));
  reader.reject_unknown();
  return result;
}

// What stands between the asset and `target`: per-dimension score deficits
// against the target row plus the PRS shortfall. All zeros means the score
// conditions for the target already hold.
struct ImprovementFrontier {
  PerDimension<double> dimension_deficits;
  double prs_deficit = 0.0;
};

inline ImprovementFrontier improvement_frontier(const ScoreSummary& summary,
                                                const ThresholdProfile& profile, int target) {
  if (target < kMinLevel || target > kMaxLevel)
    throw Error(ErrorCode::invalid_value, "target", "must be in 1..9");
  const LevelRow& row = profile.row(target);
  ImprovementFrontier frontier;
  for (Dimension d : kDimensions)
    frontier.dimension_deficits[d] = std::max(0.0, row.delta[d] - summary.means[d]);
  frontier.prs_deficit = std::max(0.0, row.theta - compute_prs(summary, profile));
  return frontier;
}

}  // namespace prlqual
