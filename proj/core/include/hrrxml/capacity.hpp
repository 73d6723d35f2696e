#pragma once

// Monte-Carlo estimates of superposition capacity and query-response spread.
//
// A statement S = sum_i bind(x_i, y_i) is queried with every key y_i; the
// retrieval is wrong when any of n random distractors z_j is strictly more
// cosine-similar to unbind(S, y_i) than the true x_i.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hrrxml/hrr.hpp"
#include "hrrxml/vsa.hpp"

namespace hrrxml {

inline constexpr double kDefaultCapacityThreshold = 0.03;
inline constexpr std::size_t kDefaultTrials = 10;

struct CapacityTrialConfig {
  VsaKind kind = VsaKind::HrrProjected;
  Dimension d{256};
  std::size_t n = 1;
  std::size_t trials = kDefaultTrials;
  RngSeed seed{};
};

// One (kind, d, n, trial) outcome.
struct TrialRow {
  VsaKind kind;
  std::size_t d;
  std::size_t n;
  std::size_t trial;
  std::size_t errors;
  double p_error;
};

struct RetrievalErrorEstimate {
  VsaKind kind;
  std::size_t d;
  std::size_t n;
  double p_error;  // errors / (n * trials)
  double std;      // population std of per-trial error fractions
  std::vector<TrialRow> trials;
};

struct CapacitySweepOptions {
  std::size_t trials = kDefaultTrials;
  std::size_t n_max = 8192;
  // Stop after this many consecutive grid points above the threshold.
  std::size_t patience = 2;
  std::size_t jobs = 1;
};

struct CapacityResult {
  VsaKind kind;
  std::size_t d;
  double threshold;
  // Smallest tested n whose error rate exceeds the threshold (the grid point at
  // which retrieval stops being reliable). Equals the last tested n when the
  // sweep never crossed the threshold; see `saturated`.
  std::size_t capacity;
  // Largest tested n with p_error <= threshold; 0 if none passed.
  std::size_t largest_passing;
  bool saturated;
  std::vector<RetrievalErrorEstimate> sweep;
};

struct CapacityCurve {
  VsaKind kind;
  double threshold;
  std::vector<CapacityResult> points;
  // Soft checks (e.g. capacity decreasing in d); informational only.
  std::vector<std::string> warnings;
};

struct ResponseStats {
  std::size_t n;
  double mean_present;
  double std_present;
  double mean_absent;
  double std_absent;
};

using BoundPair = std::pair<HrrVector, HrrVector>;

// sum_i vsa_bind(kind, x_i, y_i), clipped to [-1, 1] for MAP-C.
[[nodiscard]] HrrVector build_statement(VsaKind kind, std::span<const BoundPair> pairs);

// Number of true items beaten by a distractor, for explicit inputs.
[[nodiscard]] std::size_t count_retrieval_errors(VsaKind kind, std::span<const BoundPair> pairs,
                                                 std::span<const HrrVector> distractors);

[[nodiscard]] RetrievalErrorEstimate retrieval_error_probability(const CapacityTrialConfig& cfg,
                                                                 std::size_t jobs = 1);

// round(sqrt(2)^j) for j >= 6, deduplicated, up to n_max inclusive.
[[nodiscard]] std::vector<std::size_t> capacity_grid(std::size_t n_max);

[[nodiscard]] CapacityResult capacity_at_threshold(VsaKind kind, Dimension d,
                                                   double threshold = kDefaultCapacityThreshold,
                                                   RngSeed seed = {},
                                                   const CapacitySweepOptions& opts = {});

[[nodiscard]] CapacityCurve capacity_curve(VsaKind kind, std::span<const std::size_t> dims,
                                           double threshold, RngSeed seed,
                                           const CapacitySweepOptions& opts = {});

struct ResponseOptions {
  std::size_t trials = kDefaultTrials;
  // Cap on present/absent queries per trial; 0 queries every bound pair.
  std::size_t max_queries = 0;
  std::size_t jobs = 1;
};

// For each n: S = sum of n bound pairs; present response x^T unbind(S, y) over
// bound pairs (x, y), absent response over fresh pairs. Pooled over trials.
[[nodiscard]] std::vector<ResponseStats> query_response_distribution(
    VsaKind kind, Dimension d, std::span<const std::size_t> n_values, RngSeed seed,
    const ResponseOptions& opts = {});

[[nodiscard]] inline std::vector<ResponseStats> query_response_distribution(
    Dimension d, std::span<const std::size_t> n_values, std::size_t trials, RngSeed seed) {
  return query_response_distribution(VsaKind::HrrProjected, d, n_values, seed,
                                     ResponseOptions{.trials = trials});
}

}  // namespace hrrxml
