#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace prlqual {

// The five scoring dimensions. Wherever dimension values are rendered
// positionally (tuples, tables, failure lists) the order is R, S, C, G, O.
// JSON objects keyed by dimension follow canonical key sorting instead.
enum class Dimension : std::size_t { R = 0, S = 1, C = 2, G = 3, O = 4 };

inline constexpr std::size_t kDimensionCount = 5;

inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::R, Dimension::S, Dimension::C, Dimension::G, Dimension::O};

inline constexpr std::string_view dimension_key(Dimension d) {
  constexpr std::array<std::string_view, kDimensionCount> keys = {"R", "S", "C", "G", "O"};
  return keys[static_cast<std::size_t>(d)];
}

inline constexpr std::string_view dimension_title(Dimension d) {
  constexpr std::array<std::string_view, kDimensionCount> titles = {
      "reliability & determinism",
      "semantic integrity & resilience",
      "compliance, safety & alignment",
      "governance & asset traceability",
      "operational efficiency & cost",
  };
  return titles[static_cast<std::size_t>(d)];
}

inline std::optional<Dimension> dimension_from_key(std::string_view key) {
  for (Dimension d : kDimensions)
    if (dimension_key(d) == key) return d;
  return std::nullopt;
}

// Fixed-size value-per-dimension container with map-like access.
template <typename T>
struct PerDimension {
  std::array<T, kDimensionCount> values{};

  constexpr T& operator[](Dimension d) { return values[static_cast<std::size_t>(d)]; }
  constexpr const T& operator[](Dimension d) const {
    return values[static_cast<std::size_t>(d)];
  }

  friend bool operator==(const PerDimension&, const PerDimension&) = default;
};

// Per-dimension scores (or minima) on the 0..100 scale, in R,S,C,G,O order.
using ScoreVector = PerDimension<double>;

inline constexpr ScoreVector make_scores(double r, double s, double c, double g, double o) {
  return ScoreVector{{r, s, c, g, o}};
}

}  // namespace prlqual
