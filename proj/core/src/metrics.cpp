#include "hrrxml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

std::span<const std::size_t> top(std::span<const std::size_t> ranked, std::size_t k) {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k > ranked.size()) {
    throw ConfigError("k=" + std::to_string(k) + " exceeds ranking length " + std::to_string(ranked.size()));
  }
  return ranked.first(k);
}

double inverse_propensity(std::span<const double> propensities, std::size_t label) {
  if (label >= propensities.size()) {
    throw DimensionError("no propensity for label " + std::to_string(label));
  }
  const double p = propensities[label];
  if (!(p > 0.0)) throw ConfigError("propensity of label " + std::to_string(label) + " is not positive");
  return 1.0 / p;
}

double discount(std::size_t position) { return 1.0 / std::log2(static_cast<double>(position) + 1.0); }

double ideal_dcg(std::size_t n) {
  double z = 0.0;
  for (std::size_t l = 1; l <= n; ++l) z += discount(l);
  return z;
}

}  // namespace

double precision_at_k(std::span<const std::size_t> ranked, const LabelSet& truth, std::size_t k) {
  double hits = 0.0;
  for (std::size_t label : top(ranked, k)) hits += truth.contains(label) ? 1.0 : 0.0;
  return hits / static_cast<double>(k);
}

double psp_at_k(std::span<const std::size_t> ranked, const LabelSet& truth,
                std::span<const double> propensities, std::size_t k) {
  double total = 0.0;
  for (std::size_t label : top(ranked, k)) {
    const double w = inverse_propensity(propensities, label);
    if (truth.contains(label)) total += w;
  }
  return total / static_cast<double>(k);
}

double ndcg_at_k(std::span<const std::size_t> ranked, const LabelSet& truth, std::size_t k) {
  const auto head = top(ranked, k);
  if (truth.empty()) return 0.0;
  double dcg = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (truth.contains(head[i])) dcg += discount(i + 1);
  }
  return dcg / ideal_dcg(std::min(k, truth.size()));
}

double psndcg_at_k(std::span<const std::size_t> ranked, const LabelSet& truth,
                   std::span<const double> propensities, std::size_t k) {
  const auto head = top(ranked, k);
  double dcg = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    const double w = inverse_propensity(propensities, head[i]);
    if (truth.contains(head[i])) dcg += w * discount(i + 1);
  }
  return dcg / ideal_dcg(k);
}

const MetricRow& MetricReport::at(std::size_t k) const {
  for (const auto& row : rows) {
    if (row.k == k) return row;
  }
  throw ConfigError("metric report has no row for k=" + std::to_string(k));
}

MetricReport evaluate(std::span<const RankedPrediction> predictions, std::span<const double> propensities,
                      std::span<const std::size_t> ks) {
  MetricReport report;
  for (std::size_t k : ks) report.rows.push_back(MetricRow{.k = k});
  for (const auto& pred : predictions) {
    if (pred.truth.empty()) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    for (auto& row : report.rows) {
      row.p += precision_at_k(pred.ranked, pred.truth, row.k);
      row.psp += psp_at_k(pred.ranked, pred.truth, propensities, row.k);
      row.ndcg += ndcg_at_k(pred.ranked, pred.truth, row.k);
      row.psndcg += psndcg_at_k(pred.ranked, pred.truth, propensities, row.k);
    }
  }
  if (report.evaluated > 0) {
    const double n = static_cast<double>(report.evaluated);
    for (auto& row : report.rows) {
      row.p /= n;
      row.psp /= n;
      row.ndcg /= n;
      row.psndcg /= n;
    }
  }
  return report;
}

}  // namespace hrrxml
