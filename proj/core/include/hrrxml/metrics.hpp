#pragma once

// Ranking metrics for multi-label prediction: precision, propensity-scored
// precision, and the (propensity-scored) normalized DCG family. Logarithms are
// base 2 and rank positions start at 1.

#include <cstddef>
#include <span>
#include <vector>

#include "hrrxml/label_codec.hpp"

namespace hrrxml {

struct RankedPrediction {
  std::vector<std::size_t> ranked;  // label indices, best first; unique
  LabelSet truth;
};

// All take the top-k entries of `ranked`; ConfigError if k == 0 or exceeds its length.
[[nodiscard]] double precision_at_k(std::span<const std::size_t> ranked, const LabelSet& truth, std::size_t k);
[[nodiscard]] double psp_at_k(std::span<const std::size_t> ranked, const LabelSet& truth,
                              std::span<const double> propensities, std::size_t k);
// Empty truth yields 0.
[[nodiscard]] double ndcg_at_k(std::span<const std::size_t> ranked, const LabelSet& truth, std::size_t k);
[[nodiscard]] double psndcg_at_k(std::span<const std::size_t> ranked, const LabelSet& truth,
                                 std::span<const double> propensities, std::size_t k);

struct MetricRow {
  std::size_t k = 0;
  double p = 0.0;
  double psp = 0.0;
  double ndcg = 0.0;
  double psndcg = 0.0;
};

struct MetricReport {
  std::vector<MetricRow> rows;  // one per requested k, in request order
  std::size_t evaluated = 0;    // examples with non-empty truth
  std::size_t skipped = 0;      // examples with empty truth

  [[nodiscard]] const MetricRow& at(std::size_t k) const;
};

inline const std::vector<std::size_t> kDefaultKs{1, 3, 5};

// Unweighted mean over examples with non-empty truth, summed in input order.
[[nodiscard]] MetricReport evaluate(std::span<const RankedPrediction> predictions,
                                    std::span<const double> propensities,
                                    std::span<const std::size_t> ks = kDefaultKs);

}  // namespace hrrxml
