#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "prlqual/dimensions.hpp"
#include "prlqual/errors.hpp"
#include "prlqual/jsonio.hpp"
#include "prlqual/timeutil.hpp"

namespace prlqual {

// One evaluation run producing a score per dimension on the 0..100 scale.
struct EvaluationBatch {
  std::string batch_id;
  std::string timestamp;  // RFC 3339
  std::string evaluator;
  std::int64_t sample_count = 0;
  ScoreVector scores;

  friend bool operator==(const EvaluationBatch&, const EvaluationBatch&) = default;
};

// Per-dimension aggregate over batches: means and instabilities (sample
// standard deviation, n-1 divisor, in raw score points).
struct ScoreSummary {
  ScoreVector means;
  PerDimension<double> instabilities;
  std::size_t batch_count = 0;
  bool degraded = false;  // batch_count below the profile's min_batches

  friend bool operator==(const ScoreSummary&, const ScoreSummary&) = default;
};

struct ScoringConfig {
  PerDimension<double> weights;  // business priority coefficients, sum to 1
  double lambda = 0.0;           // instability sensitivity
  int min_batches = 1;

  friend bool operator==(const ScoringConfig&, const ScoringConfig&) = default;
};

inline constexpr double kWeightSumTolerance = 1e-9;

inline void validate_scoring_config(const ScoringConfig& config) {
  double sum = 0.0;
  for (Dimension d : kDimensions) {
    double w = config.weights[d];
    if (!(w >= 0.0 && w <= 1.0))
      throw Error(ErrorCode::invalid_value, std::string("weights.") + std::string(dimension_key(d)),
                  "must be in [0, 1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance)
    throw Error(ErrorCode::weight_sum_violation, "weights", "weights must sum to 1");
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
    throw Error(ErrorCode::invalid_value, "lambda", "must be finite and >= 0");
  if (config.min_batches < 1)
    throw Error(ErrorCode::invalid_value, "min_batches", "must be a positive integer");
}

inline void validate_batch(const EvaluationBatch& batch) {
  if (batch.batch_id.empty())
    throw Error(ErrorCode::invalid_batch, "batch_id", "must be non-empty");
  if (!is_rfc3339_instant(batch.timestamp))
    throw Error(ErrorCode::invalid_batch, batch.batch_id + ".timestamp",
                "must be an RFC 3339 instant");
  if (batch.sample_count < 1)
    throw Error(ErrorCode::invalid_batch, batch.batch_id + ".sample_count",
                "must be a positive integer");
  for (Dimension d : kDimensions) {
    double v = batch.scores[d];
    if (!(v >= 0.0 && v <= 100.0))
      throw Error(ErrorCode::invalid_batch,
                  batch.batch_id + ".scores." + std::string(dimension_key(d)),
                  "must be in [0, 100]");
  }
}

inline ScoreVector parse_score_object(const json& j, const std::string& path) {
  ObjectReader reader(j, path);
  ScoreVector out;
  for (Dimension d : kDimensions) {
    std::string key(dimension_key(d));
    out[d] = get_score(reader.require(key.c_str()), reader.member(key.c_str()));
  }
  reader.reject_unknown();
  return out;
}

inline json score_object_to_json(const ScoreVector& scores) {
  json j = json::object();
  for (Dimension d : kDimensions) j[std::string(dimension_key(d))] = scores[d];
  return j;
}

inline EvaluationBatch parse_evaluation_batch(const json& j, const std::string& path = "") {
  ObjectReader reader(j, path);
  EvaluationBatch batch;
  batch.batch_id = get_nonempty_string(reader.require("batch_id"), reader.member("batch_id"));
  batch.timestamp = get_string(reader.require("timestamp"), reader.member("timestamp"));
  batch.evaluator = get_string(reader.require("evaluator"), reader.member("evaluator"));
  batch.sample_count =
      get_integer(reader.require("sample_count"), reader.member("sample_count"));
  batch.scores = parse_score_object(reader.require("scores"), reader.member("scores"));
  reader.reject_unknown();
  validate_batch(batch);
  return batch;
}

// Batch files under <asset_root>/<evidence_dir>/batches/*.json, read in
// lexicographic filename order. A missing directory is an empty batch set.
inline std::vector<EvaluationBatch> load_batches(const std::filesystem::path& batches_dir) {
  namespace fs = std::filesystem;
  std::vector<EvaluationBatch> batches;
  if (!fs::exists(batches_dir)) return batches;
  if (!fs::is_directory(batches_dir))
    throw Error(ErrorCode::io_failure, batches_dir.string(), "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(batches_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_failure, file.string(), "cannot open batch file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    batches.push_back(
        parse_evaluation_batch(parse_json_text(text, file.filename().string()),
                               file.filename().string()));
  }
  return batches;
}

// Means and sample standard deviations per dimension. An empty batch list is
// legal and yields the all-zero summary (degraded). Batches with fewer than
// two runs carry zero instability by definition.
inline ScoreSummary summarize_batches(const std::vector<EvaluationBatch>& batches,
                                      const ScoringConfig& config) {
  std::set<std::string, std::less<>> ids;
  for (const auto& batch : batches) {
    validate_batch(batch);
    if (!ids.insert(batch.batch_id).second)
      throw Error(ErrorCode::duplicate_batch_id, batch.batch_id,
                  "batch_id appears more than once");
  }

  ScoreSummary summary;
  summary.batch_count = batches.size();
  summary.degraded = batches.size() < static_cast<std::size_t>(config.min_batches);
  if (batches.empty()) return summary;

  const double n = static_cast<double>(batches.size());
  for (Dimension d : kDimensions) {
    double sum = 0.0;
    for (const auto& batch : batches) sum += batch.scores[d];
    summary.means[d] = sum / n;
  }
  if (batches.size() >= 2) {
    for (Dimension d : kDimensions) {
      double acc = 0.0;
      for (const auto& batch : batches) {
        double delta = batch.scores[d] - summary.means[d];
        acc += delta * delta;
      }
      summary.instabilities[d] = std::sqrt(acc / (n - 1.0));
    }
  }
  return summary;
}

// exp(-lambda * sigma); equals 1 exactly when lambda * sigma == 0.
inline double instability_penalty(double sigma, double lambda) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::invalid_value, "sigma", "must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::invalid_value, "lambda", "must be finite and >= 0");
  return std::exp(-lambda * sigma);
}

// Weighted instability-penalized aggregate, before any gate is applied.
inline double base_score(const ScoreSummary& summary, const ScoringConfig& config) {
  validate_scoring_config(config);
  double total = 0.0;
  for (Dimension d : kDimensions)
    total += config.weights[d] * summary.means[d] *
             instability_penalty(summary.instabilities[d], config.lambda);
  return total;
}

}  // namespace prlqual
