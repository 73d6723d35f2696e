#pragma once

// Dense HRR label encoding for multi-label outputs.
//
// Each of L classes owns a fixed unitary vector c_i regenerated from
// (seed, i). A label set Y is encoded as
//     s = p (*) sum_{i in Y} c_i + m (*) (A - sum_{i in Y} c_i),    A = sum_i c_i
// with p a unitary "present" role and m an "absent" role orthogonal to p.
// The loss asks that every present c_i be recoverable from unbind(s_hat, p) and
// that unbind(s_hat, m) carry nothing of the present classes.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hrrxml/hrr.hpp"

namespace hrrxml {

// Sorted, duplicate-free class indices.
class LabelSet {
 public:
  LabelSet() = default;
  // Sorts; throws ConfigError on duplicate indices.
  explicit LabelSet(std::vector<std::size_t> indices);
  LabelSet(std::initializer_list<std::size_t> indices)
      : LabelSet(std::vector<std::size_t>(indices)) {}

  [[nodiscard]] std::span<const std::size_t> indices() const noexcept { return indices_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] bool contains(std::size_t label) const;
  // Throws DimensionError if any index >= num_labels.
  void validate(std::size_t num_labels) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

using StatementVector = HrrVector;

enum class LossVariant {
  AbsCosine,    // J_p = sum (1 - |cos|), J_n = |cos|
  PlainCosine,  // J_p = sum (1 - cos),   J_n = cos
};

struct LossBreakdown {
  double j_p = 0.0;
  double j_n = 0.0;
  double total = 0.0;
  // No present labels: both terms are zero and the example carries no signal.
  bool degenerate = false;
};

class LabelSpace {
 public:
  // The class family is fixed by (num_labels, d_prime, seed). With
  // cache_classes the class vectors are also kept in memory (L x d_prime) to
  // speed up training; values are identical either way.
  LabelSpace(std::size_t num_labels, Dimension d_prime, RngSeed seed, bool cache_classes = false);

  [[nodiscard]] std::size_t num_labels() const noexcept { return num_labels_; }
  [[nodiscard]] Dimension dim() const noexcept { return dim_; }
  [[nodiscard]] RngSeed seed() const noexcept { return seed_; }

  [[nodiscard]] const HrrVector& present() const noexcept { return present_; }
  [[nodiscard]] const HrrVector& absent() const noexcept { return absent_; }
  [[nodiscard]] const HrrVector& all_labels() const noexcept { return all_labels_; }

  // c_i; throws DimensionError when i >= num_labels.
  [[nodiscard]] HrrVector class_vector(std::size_t i) const;
  [[nodiscard]] HrrVector present_sum(const LabelSet& labels) const;

  [[nodiscard]] bool cached() const noexcept { return !cache_.empty(); }
  // All class vectors in index order when cached, otherwise empty.
  [[nodiscard]] std::span<const HrrVector> cached_classes() const noexcept { return cache_; }

 private:
  [[nodiscard]] HrrVector regenerate(std::size_t i) const;

  std::size_t num_labels_;
  Dimension dim_;
  RngSeed seed_;
  HrrVector present_;
  HrrVector absent_;
  HrrVector all_labels_;
  std::vector<HrrVector> cache_;
};

[[nodiscard]] LabelSpace make_label_space(std::size_t num_labels, Dimension d_prime, RngSeed seed);

[[nodiscard]] StatementVector encode_labels(const LabelSpace& space, const LabelSet& labels);

[[nodiscard]] LossBreakdown loss(const LabelSpace& space, const StatementVector& s_hat,
                                 const LabelSet& labels,
                                 LossVariant variant = LossVariant::AbsCosine);

// d(J_p + J_n)/d s_hat. Exact for the epsilon-guarded normalizations; zero for
// degenerate (empty) label sets.
[[nodiscard]] HrrVector loss_gradient(const LabelSpace& space, const StatementVector& s_hat,
                                      const LabelSet& labels,
                                      LossVariant variant = LossVariant::AbsCosine);

struct LossAndGradient {
  LossBreakdown loss;
  HrrVector gradient;
};

[[nodiscard]] LossAndGradient loss_and_gradient(const LabelSpace& space,
                                                const StatementVector& s_hat,
                                                const LabelSet& labels,
                                                LossVariant variant = LossVariant::AbsCosine);

// c_i^T unbind(s_hat, p) for every class, streaming over regenerated c_i.
[[nodiscard]] std::vector<double> decode_scores(const LabelSpace& space,
                                                const StatementVector& s_hat);

// Indices of the k largest scores, descending; ties go to the lower index.
// Throws ConfigError unless 1 <= k <= L.
[[nodiscard]] std::vector<std::size_t> decode_topk(const LabelSpace& space,
                                                   const StatementVector& s_hat, std::size_t k);

// Scores many outputs while regenerating each class vector once.
[[nodiscard]] std::vector<std::vector<std::size_t>> decode_topk_batch(
    const LabelSpace& space, std::span<const StatementVector> s_hats, std::size_t k);

inline constexpr double kDefaultDecodeThreshold = 0.5;

[[nodiscard]] LabelSet decode_threshold(const LabelSpace& space, const StatementVector& s_hat,
                                        double tau = kDefaultDecodeThreshold);

// Top-k of an arbitrary score vector under the same ordering rule.
[[nodiscard]] std::vector<std::size_t> topk_indices(std::span<const double> scores, std::size_t k);

}  // namespace hrrxml
