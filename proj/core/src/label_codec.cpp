#include "hrrxml/label_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

enum Stream : std::uint64_t { kPresent = 0x70, kAbsent = 0x6d, kClasses = 0x63 };

HrrVector orthogonal_to(const HrrVector& p, HrrVector q) {
  q -= p * (q.dot(p) / p.dot(p));
  q *= p.norm() / q.norm();
  return q;
}

// Gradient of cos(a, v) = a.v / (|a||v| + eps) with respect to a.
std::vector<double> cosine_grad(std::span<const double> a, std::span<const double> v,
                                double a_norm, double v_norm, double dot) {
  const double denom = a_norm * v_norm + kCosineEpsilon;
  std::vector<double> g(a.size());
  const double radial = a_norm > 0.0 ? dot * v_norm / (denom * denom * a_norm) : 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) g[k] = v[k] / denom - radial * a[k];
  return g;
}

double shape(LossVariant variant, double c) { return variant == LossVariant::AbsCosine ? std::abs(c) : c; }

double shape_slope(LossVariant variant, double c) {
  if (variant == LossVariant::PlainCosine) return 1.0;
  return c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
}

// Normalized query e = u / (|u| + eps) and the pieces needed to backpropagate.
struct Query {
  HrrVector u;
  double u_norm;
  std::vector<double> e;
  double e_norm;
};

Query make_query(const StatementVector& s_hat, const HrrVector& role) {
  Query q{unbind(s_hat, role), 0.0, {}, 0.0};
  q.u_norm = q.u.norm();
  const double scale = 1.0 / (q.u_norm + kCosineEpsilon);
  q.e = q.u.data();
  for (double& x : q.e) x *= scale;
  q.e_norm = q.u_norm * scale;
  return q;
}

// Maps a gradient with respect to e back through normalization and unbinding.
void accumulate_query_grad(const Query& q, const HrrVector& role, std::vector<double>& grad_e,
                           std::vector<double>& grad_s) {
  const double r = q.u_norm;
  const double inv = 1.0 / (r + kCosineEpsilon);
  double u_dot_g = 0.0;
  for (std::size_t k = 0; k < grad_e.size(); ++k) u_dot_g += q.u[k] * grad_e[k];
  const double radial = r > 0.0 ? u_dot_g / (r * (r + kCosineEpsilon) * (r + kCosineEpsilon)) : 0.0;
  std::vector<double> grad_u(grad_e.size());
  for (std::size_t k = 0; k < grad_e.size(); ++k) grad_u[k] = grad_e[k] * inv - radial * q.u[k];
  // u = bind(s_hat, role*), so the adjoint binds with (role*)* = role.
  const HrrVector back = bind_adjoint(HrrVector(std::move(grad_u)), pseudo_inverse(role));
  for (std::size_t k = 0; k < grad_s.size(); ++k) grad_s[k] += back[k];
}

LossAndGradient evaluate(const LabelSpace& space, const StatementVector& s_hat,
                         const LabelSet& labels, LossVariant variant, bool want_grad) {
  if (s_hat.dim() != space.dim().value()) {
    throw DimensionError("loss: statement has dim " + std::to_string(s_hat.dim()) +
                         ", label space has " + std::to_string(space.dim().value()));
  }
  labels.validate(space.num_labels());
  const std::size_t d = s_hat.dim();
  LossAndGradient out{{}, HrrVector::zeros(space.dim())};
  if (labels.empty()) {
    out.loss.degenerate = true;
    return out;
  }

  std::vector<double> grad_s(want_grad ? d : 0, 0.0);

  const Query qp = make_query(s_hat, space.present());
  std::vector<double> grad_ep(want_grad ? d : 0, 0.0);
  std::vector<double> present_sum(d, 0.0);
  for (std::size_t label : labels.indices()) {
    const HrrVector c = space.class_vector(label);
    for (std::size_t k = 0; k < d; ++k) present_sum[k] += c[k];
    const double dot = std::inner_product(qp.e.begin(), qp.e.end(), c.data().begin(), 0.0);
    const double c_norm = c.norm();
    const double cos = dot / (qp.e_norm * c_norm + kCosineEpsilon);
    out.loss.j_p += 1.0 - shape(variant, cos);
    if (want_grad) {
      const double slope = -shape_slope(variant, cos);
      if (slope != 0.0) {
        const auto g = cosine_grad(qp.e, c.values(), qp.e_norm, c_norm, dot);
        for (std::size_t k = 0; k < d; ++k) grad_ep[k] += slope * g[k];
      }
    }
  }
  if (want_grad) accumulate_query_grad(qp, space.present(), grad_ep, grad_s);

  const Query qm = make_query(s_hat, space.absent());
  const double p_norm = std::sqrt(std::inner_product(present_sum.begin(), present_sum.end(),
                                                     present_sum.begin(), 0.0));
  const double dot = std::inner_product(qm.e.begin(), qm.e.end(), present_sum.begin(), 0.0);
  const double cos = dot / (qm.e_norm * p_norm + kCosineEpsilon);
  out.loss.j_n = shape(variant, cos);
  if (want_grad) {
    const double slope = shape_slope(variant, cos);
    if (slope != 0.0) {
      auto grad_em = cosine_grad(qm.e, present_sum, qm.e_norm, p_norm, dot);
      for (double& g : grad_em) g *= slope;
      accumulate_query_grad(qm, space.absent(), grad_em, grad_s);
    }
    out.gradient = HrrVector(std::move(grad_s));
  }
  out.loss.total = out.loss.j_p + out.loss.j_n;
  return out;
}

}  // namespace

LabelSet::LabelSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw ConfigError("label set contains duplicate indices");
  }
}

bool LabelSet::contains(std::size_t label) const {
  return std::binary_search(indices_.begin(), indices_.end(), label);
}

void LabelSet::validate(std::size_t num_labels) const {
  if (!indices_.empty() && indices_.back() >= num_labels) {
    throw DimensionError("label index " + std::to_string(indices_.back()) + " out of range for " +
                         std::to_string(num_labels) + " labels");
  }
}

LabelSpace::LabelSpace(std::size_t num_labels, Dimension d_prime, RngSeed seed, bool cache_classes)
    : num_labels_(num_labels),
      dim_(d_prime),
      seed_(seed),
      present_(sample_unitary(d_prime, derive_seed(seed, kPresent))),
      absent_(orthogonal_to(present_, sample_unitary(d_prime, derive_seed(seed, kAbsent)))),
      all_labels_(HrrVector::zeros(d_prime)) {
  if (num_labels < 1) throw ConfigError("label space needs at least one label");
  if (cache_classes) cache_.reserve(num_labels);
  for (std::size_t i = 0; i < num_labels; ++i) {
    HrrVector c = regenerate(i);
    all_labels_ += c;
    if (cache_classes) cache_.push_back(std::move(c));
  }
}

HrrVector LabelSpace::regenerate(std::size_t i) const {
  return sample_unitary(dim_, derive_seed(seed_, kClasses, i));
}

HrrVector LabelSpace::class_vector(std::size_t i) const {
  if (i >= num_labels_) {
    throw DimensionError("class " + std::to_string(i) + " out of range for " +
                         std::to_string(num_labels_) + " labels");
  }
  return cache_.empty() ? regenerate(i) : cache_[i];
}

HrrVector LabelSpace::present_sum(const LabelSet& labels) const {
  labels.validate(num_labels_);
  HrrVector sum = HrrVector::zeros(dim_);
  for (std::size_t i : labels.indices()) sum += class_vector(i);
  return sum;
}

LabelSpace make_label_space(std::size_t num_labels, Dimension d_prime, RngSeed seed) {
  return LabelSpace(num_labels, d_prime, seed);
}

StatementVector encode_labels(const LabelSpace& space, const LabelSet& labels) {
  const HrrVector present = space.present_sum(labels);
  return bind(space.present(), present) + bind(space.absent(), space.all_labels() - present);
}

LossBreakdown loss(const LabelSpace& space, const StatementVector& s_hat, const LabelSet& labels,
                   LossVariant variant) {
  return evaluate(space, s_hat, labels, variant, false).loss;
}

HrrVector loss_gradient(const LabelSpace& space, const StatementVector& s_hat,
                        const LabelSet& labels, LossVariant variant) {
  return evaluate(space, s_hat, labels, variant, true).gradient;
}

LossAndGradient loss_and_gradient(const LabelSpace& space, const StatementVector& s_hat,
                                  const LabelSet& labels, LossVariant variant) {
  return evaluate(space, s_hat, labels, variant, true);
}

std::vector<double> decode_scores(const LabelSpace& space, const StatementVector& s_hat) {
  require_same_dim(s_hat, space.present(), "decode");
  const HrrVector query = unbind(s_hat, space.present());
  std::vector<double> scores(space.num_labels());
  const auto cached = space.cached_classes();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = cached.empty() ? space.class_vector(i).dot(query) : cached[i].dot(query);
  }
  return scores;
}

std::vector<std::size_t> topk_indices(std::span<const double> scores, std::size_t k) {
  if (k < 1 || k > scores.size()) {
    throw ConfigError("top-k needs 1 <= k <= " + std::to_string(scores.size()) + ", got " +
                      std::to_string(k));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                    });
  order.resize(k);
  return order;
}

std::vector<std::size_t> decode_topk(const LabelSpace& space, const StatementVector& s_hat,
                                     std::size_t k) {
  return topk_indices(decode_scores(space, s_hat), k);
}

std::vector<std::vector<std::size_t>> decode_topk_batch(const LabelSpace& space,
                                                        std::span<const StatementVector> s_hats,
                                                        std::size_t k) {
  std::vector<HrrVector> queries;
  queries.reserve(s_hats.size());
  for (const auto& s : s_hats) {
    require_same_dim(s, space.present(), "decode");
    queries.push_back(unbind(s, space.present()));
  }
  std::vector<std::vector<double>> scores(s_hats.size(), std::vector<double>(space.num_labels()));
  for (std::size_t i = 0; i < space.num_labels(); ++i) {
    const HrrVector c = space.class_vector(i);
    for (std::size_t j = 0; j < queries.size(); ++j) scores[j][i] = c.dot(queries[j]);
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(scores.size());
  for (const auto& row : scores) out.push_back(topk_indices(row, k));
  return out;
}

LabelSet decode_threshold(const LabelSpace& space, const StatementVector& s_hat, double tau) {
  const auto scores = decode_scores(space, s_hat);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > tau) hits.push_back(i);
  }
  return LabelSet(std::move(hits));
}

}  // namespace hrrxml
