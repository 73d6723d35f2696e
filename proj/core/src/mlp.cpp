#include "hrrxml/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

std::span<double> view(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> view(RowVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> view(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<const double> view(const RowVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void kaiming_uniform(Matrix& w, std::mt19937_64& gen) {
  const double bound = std::sqrt(6.0 / static_cast<double>(w.rows()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& x : view(w)) x = dist(gen);
}

void apply_dropout(Matrix& h, Matrix& keep, double rate, std::mt19937_64& gen) {
  keep.resize(h.rows(), h.cols());
  std::bernoulli_distribution drop(rate);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < keep.size(); ++i) keep.data()[i] = drop(gen) ? 0.0 : scale;
  h.array() *= keep.array();
}

}  // namespace

std::string_view to_string(HeadKind kind) noexcept { return kind == HeadKind::Fc ? "fc" : "hrr"; }

HeadKind parse_head_kind(std::string_view name) {
  if (name == "fc") return HeadKind::Fc;
  if (name == "hrr") return HeadKind::Hrr;
  throw ConfigError("unknown head '" + std::string(name) + "' (expected fc or hrr)");
}

void ModelSpec::validate() const {
  if (input == 0 || hidden1 == 0 || hidden2 == 0 || num_labels == 0) {
    throw ConfigError("model sizes must be positive");
  }
  if (head == HeadKind::Hrr && d_prime < 2) throw ConfigError("HRR head needs d_prime >= 2");
}

MlpParams MlpParams::zeros(const ModelSpec& spec) {
  const auto in = static_cast<Eigen::Index>(spec.input);
  const auto h1 = static_cast<Eigen::Index>(spec.hidden1);
  const auto h2 = static_cast<Eigen::Index>(spec.hidden2);
  const auto out = static_cast<Eigen::Index>(spec.output());
  return MlpParams{Matrix::Zero(in, h1), Matrix::Zero(h1, h2), Matrix::Zero(h2, out),
                   RowVector::Zero(h1),  RowVector::Zero(h2),  RowVector::Zero(out)};
}

std::array<std::span<double>, 6> MlpParams::blocks() {
  return {view(w1), view(b1), view(w2), view(b2), view(w3), view(b3)};
}

std::array<std::span<const double>, 6> MlpParams::blocks() const {
  return {view(w1), view(b1), view(w2), view(b2), view(w3), view(b3)};
}

std::size_t MlpParams::size() const {
  std::size_t n = 0;
  for (auto b : blocks()) n += b.size();
  return n;
}

MlpParams& MlpParams::operator+=(const MlpParams& other) {
  w1 += other.w1;
  w2 += other.w2;
  w3 += other.w3;
  b1 += other.b1;
  b2 += other.b2;
  b3 += other.b3;
  return *this;
}

MlpParams& MlpParams::operator*=(double s) {
  w1 *= s;
  w2 *= s;
  w3 *= s;
  b1 *= s;
  b2 *= s;
  b3 *= s;
  return *this;
}

bool operator==(const MlpParams& a, const MlpParams& b) {
  const auto x = a.blocks();
  const auto y = b.blocks();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != y[i].size() || !std::equal(x[i].begin(), x[i].end(), y[i].begin())) return false;
  }
  return true;
}

ParamCount param_count(const ModelSpec& spec) {
  const std::size_t l1 = spec.input * spec.hidden1 + spec.hidden1;
  const std::size_t l2 = spec.hidden1 * spec.hidden2 + spec.hidden2;
  const std::size_t l3 = spec.hidden2 * spec.output() + spec.output();
  return ParamCount{l3, l1 + l2 + l3};
}

double compression_percent(std::size_t compressed, std::size_t baseline) {
  if (baseline == 0) throw ConfigError("baseline parameter count is zero");
  return 100.0 * (1.0 - static_cast<double>(compressed) / static_cast<double>(baseline));
}

namespace {

// Fc models carry no label space, so their d_prime is normalized away.
ModelSpec canonical(ModelSpec spec) {
  spec.validate();
  if (spec.head == HeadKind::Fc) spec.d_prime = 0;
  return spec;
}

}  // namespace

Model::Model(const ModelSpec& spec, RngSeed init_seed) : spec_(canonical(spec)) {
  params_ = MlpParams::zeros(spec_);
  std::mt19937_64 gen(init_seed.value);
  kaiming_uniform(params_.w1, gen);
  kaiming_uniform(params_.w2, gen);
  kaiming_uniform(params_.w3, gen);
  if (spec_.head == HeadKind::Hrr) {
    space_ = std::make_shared<const LabelSpace>(spec_.num_labels, Dimension(spec_.d_prime),
                                                RngSeed{spec_.label_seed}, true);
  }
}

Model::Model(const ModelSpec& spec, MlpParams params) : spec_(canonical(spec)), params_(std::move(params)) {
  const auto ref = MlpParams::zeros(spec_);
  const auto want = ref.blocks();
  const auto got = params_.blocks();
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].size() != got[i].size()) {
      throw DimensionError("parameter block " + std::to_string(i) + " has " + std::to_string(got[i].size()) +
                           " values, model shape needs " + std::to_string(want[i].size()));
    }
  }
  if (params_.w1.rows() != ref.w1.rows() || params_.w2.rows() != ref.w2.rows() ||
      params_.w3.rows() != ref.w3.rows()) {
    throw DimensionError("parameter matrices do not match the model shape");
  }
  for (auto b : params_.blocks()) {
    for (double x : b) {
      if (!std::isfinite(x)) throw NumericError("non-finite model parameter");
    }
  }
  if (spec_.head == HeadKind::Hrr) {
    space_ = std::make_shared<const LabelSpace>(spec_.num_labels, Dimension(spec_.d_prime),
                                                RngSeed{spec_.label_seed}, true);
  }
}

const LabelSpace& Model::label_space() const {
  if (!space_) throw ConfigError("the fc head has no label space");
  return *space_;
}

void forward(const Model& model, std::span<const SparseRow> batch, Activations& act,
             const DropoutOptions& dropout) {
  const auto& p = model.params();
  const auto rows = static_cast<Eigen::Index>(batch.size());
  act.h1.resize(rows, p.w1.cols());
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto h = act.h1.row(r);
    h = p.b1;
    for (const auto& f : batch[static_cast<std::size_t>(r)]) {
      if (f.index >= model.spec().input) {
        throw DimensionError("feature index " + std::to_string(f.index) + " >= input size " +
                             std::to_string(model.spec().input));
      }
      h.noalias() += f.value * p.w1.row(f.index);
    }
  }
  act.h1 = act.h1.cwiseMax(0.0);
  std::mt19937_64 gen(dropout.seed.value);
  if (dropout.rate > 0.0) apply_dropout(act.h1, act.keep1, dropout.rate, gen);
  else act.keep1.resize(0, 0);

  act.h2.noalias() = act.h1 * p.w2;
  act.h2.rowwise() += p.b2;
  act.h2 = act.h2.cwiseMax(0.0);
  if (dropout.rate > 0.0) apply_dropout(act.h2, act.keep2, dropout.rate, gen);
  else act.keep2.resize(0, 0);

  act.out.noalias() = act.h2 * p.w3;
  act.out.rowwise() += p.b3;
}

Matrix forward(const Model& model, std::span<const SparseRow> batch) {
  Activations act;
  forward(model, batch, act);
  return std::move(act.out);
}

MlpParams backward(const Model& model, std::span<const SparseRow> batch, const Activations& act,
                   const Matrix& grad_out) {
  const auto& p = model.params();
  if (grad_out.rows() != act.out.rows() || grad_out.cols() != act.out.cols()) {
    throw DimensionError("output gradient shape does not match the forward pass");
  }
  MlpParams g;
  g.w3.noalias() = act.h2.transpose() * grad_out;
  g.b3 = grad_out.colwise().sum();

  // h = keep * relu(z): dz = dh * keep * [h > 0] (h > 0 iff relu(z) > 0 and kept).
  Matrix d2 = grad_out * p.w3.transpose();
  d2.array() *= (act.h2.array() > 0.0).cast<double>();
  if (act.keep2.size() > 0) d2.array() *= act.keep2.array();
  g.w2.noalias() = act.h1.transpose() * d2;
  g.b2 = d2.colwise().sum();

  Matrix d1 = d2 * p.w2.transpose();
  d1.array() *= (act.h1.array() > 0.0).cast<double>();
  if (act.keep1.size() > 0) d1.array() *= act.keep1.array();
  g.b1 = d1.colwise().sum();
  g.w1 = Matrix::Zero(p.w1.rows(), p.w1.cols());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    for (const auto& f : batch[r]) g.w1.row(f.index).noalias() += f.value * d1.row(static_cast<Eigen::Index>(r));
  }
  return g;
}

double bce_loss(std::span<const double> logits, const LabelSet& labels) {
  labels.validate(logits.size());
  double total = 0.0;
  const auto present = labels.indices();
  std::size_t next = 0;
  for (std::size_t l = 0; l < logits.size(); ++l) {
    const bool y = next < present.size() && present[next] == l;
    if (y) ++next;
    const double z = logits[l];
    total += std::max(z, 0.0) - (y ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
  }
  return total / static_cast<double>(logits.size());
}

std::vector<double> bce_gradient(std::span<const double> logits, const LabelSet& labels) {
  labels.validate(logits.size());
  std::vector<double> g(logits.size());
  const double inv = 1.0 / static_cast<double>(logits.size());
  for (std::size_t l = 0; l < logits.size(); ++l) {
    const double z = logits[l];
    const double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    g[l] = s * inv;
  }
  for (std::size_t l : labels.indices()) g[l] -= inv;
  return g;
}

BatchObjective head_objective(const Model& model, const Matrix& out, std::span<const LabelSet* const> labels,
                              LossVariant variant) {
  if (static_cast<std::size_t>(out.rows()) != labels.size()) {
    throw DimensionError("label batch size does not match output rows");
  }
  BatchObjective obj;
  obj.grad_out = Matrix::Zero(out.rows(), out.cols());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const LabelSet& y = *labels[r];
    if (y.empty()) continue;
    const auto row = static_cast<Eigen::Index>(r);
    std::span<const double> z{out.row(row).data(), static_cast<std::size_t>(out.cols())};
    if (model.spec().head == HeadKind::Fc) {
      obj.loss_sum += bce_loss(z, y);
      const auto g = bce_gradient(z, y);
      obj.grad_out.row(row) = Eigen::Map<const RowVector>(g.data(), out.cols());
    } else {
      const auto lg = loss_and_gradient(model.label_space(), HrrVector(std::vector<double>(z.begin(), z.end())), y,
                                        variant);
      obj.loss_sum += lg.loss.total;
      obj.grad_out.row(row) = Eigen::Map<const RowVector>(lg.gradient.values().data(), out.cols());
    }
    ++obj.counted;
  }
  if (obj.counted > 0) obj.grad_out /= static_cast<double>(obj.counted);
  return obj;
}

std::vector<double> label_scores(const Model& model, std::span<const double> out_row) {
  if (out_row.size() != model.spec().output()) throw DimensionError("output row has the wrong width");
  if (model.spec().head == HeadKind::Fc) return {out_row.begin(), out_row.end()};
  return decode_scores(model.label_space(), HrrVector(std::vector<double>(out_row.begin(), out_row.end())));
}

}  // namespace hrrxml
