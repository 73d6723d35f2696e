#pragma once

// Feedforward network input -> h1 -> h2 -> output with ReLU hidden layers and
// either a dense sigmoid/BCE head (one logit per label) or an HRR head (d'
// outputs scored by the label-codec loss).

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hrrxml/dataset.hpp"
#include "hrrxml/label_codec.hpp"
#include "hrrxml/rng.hpp"

namespace hrrxml {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using SparseRow = std::span<const SparseFeature>;

enum class HeadKind : std::uint32_t { Fc = 0, Hrr = 1 };

[[nodiscard]] std::string_view to_string(HeadKind kind) noexcept;
// Accepts "fc" and "hrr"; throws ConfigError otherwise.
[[nodiscard]] HeadKind parse_head_kind(std::string_view name);

struct ModelSpec {
  HeadKind head = HeadKind::Hrr;
  std::size_t input = 0;
  std::size_t hidden1 = 512;
  std::size_t hidden2 = 512;
  std::size_t num_labels = 0;
  std::size_t d_prime = 400;       // HRR head width; ignored for Fc (Model stores 0)
  std::uint64_t label_seed = 0;    // class-vector family; ignored for Fc

  [[nodiscard]] std::size_t output() const noexcept { return head == HeadKind::Fc ? num_labels : d_prime; }
  // Throws ConfigError on zero sizes or d_prime < 2.
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Weights are stored (fan_in x fan_out) so a sparse input row selects rows of w1.
struct MlpParams {
  Matrix w1, w2, w3;
  RowVector b1, b2, b3;

  [[nodiscard]] static MlpParams zeros(const ModelSpec& spec);
  // Parameter blocks in checkpoint order: w1, b1, w2, b2, w3, b3.
  [[nodiscard]] std::array<std::span<double>, 6> blocks();
  [[nodiscard]] std::array<std::span<const double>, 6> blocks() const;
  [[nodiscard]] std::size_t size() const;

  MlpParams& operator+=(const MlpParams& other);
  MlpParams& operator*=(double s);
  friend bool operator==(const MlpParams& a, const MlpParams& b);
};

struct ParamCount {
  std::size_t output_layer = 0;
  std::size_t total = 0;
};

[[nodiscard]] ParamCount param_count(const ModelSpec& spec);
// Percentage reduction, 100 * (1 - compressed / baseline).
[[nodiscard]] double compression_percent(std::size_t compressed, std::size_t baseline);

class Model {
 public:
  // Kaiming-uniform weights, U(-sqrt(6/fan_in), sqrt(6/fan_in)), zero biases.
  Model(const ModelSpec& spec, RngSeed init_seed);
  Model(const ModelSpec& spec, MlpParams params);

  [[nodiscard]] const ModelSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const MlpParams& params() const noexcept { return params_; }
  [[nodiscard]] MlpParams& params() noexcept { return params_; }
  // Throws ConfigError for the Fc head.
  [[nodiscard]] const LabelSpace& label_space() const;

 private:
  ModelSpec spec_;
  MlpParams params_;
  std::shared_ptr<const LabelSpace> space_;
};

struct Activations {
  Matrix h1, h2, out;          // post-ReLU (and post-dropout) hidden activations
  Matrix keep1, keep2;         // dropout scale masks; empty when dropout is off
};

struct DropoutOptions {
  double rate = 0.0;
  RngSeed seed{};
};

// Batch forward pass; the first layer touches only the listed features.
// Throws DimensionError on feature indices >= input.
void forward(const Model& model, std::span<const SparseRow> batch, Activations& act,
             const DropoutOptions& dropout = {});
[[nodiscard]] Matrix forward(const Model& model, std::span<const SparseRow> batch);

// Parameter gradient given d(objective)/d(out) for the cached batch.
[[nodiscard]] MlpParams backward(const Model& model, std::span<const SparseRow> batch,
                                 const Activations& act, const Matrix& grad_out);

// mean_l -[y log s(z) + (1-y) log(1-s(z))] in the overflow-free form
// max(z,0) - z*y + log1p(exp(-|z|)).
[[nodiscard]] double bce_loss(std::span<const double> logits, const LabelSet& labels);
// (s(z) - y) / L
[[nodiscard]] std::vector<double> bce_gradient(std::span<const double> logits, const LabelSet& labels);

struct BatchObjective {
  double loss_sum = 0.0;
  std::size_t counted = 0;  // examples with at least one label
  Matrix grad_out;          // d(loss_sum / counted)/d(out); zero rows for skipped examples
};

// Mean per-example head loss over examples with non-empty label sets.
// `variant` selects the HRR loss shape and is ignored by the Fc head.
[[nodiscard]] BatchObjective head_objective(const Model& model, const Matrix& out,
                                            std::span<const LabelSet* const> labels,
                                            LossVariant variant = LossVariant::AbsCosine);

// Label scores for one output row: logits (Fc) or decode scores (Hrr).
[[nodiscard]] std::vector<double> label_scores(const Model& model, std::span<const double> out_row);

}  // namespace hrrxml
