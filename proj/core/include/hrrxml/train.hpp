#pragma once

// Mini-batch training and prediction for Model.

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "hrrxml/dataset.hpp"
#include "hrrxml/metrics.hpp"
#include "hrrxml/mlp.hpp"
#include "hrrxml/rng.hpp"

namespace hrrxml {

enum class OptimizerKind { Adam, Sgd };

[[nodiscard]] std::string_view to_string(OptimizerKind kind) noexcept;
[[nodiscard]] OptimizerKind parse_optimizer_kind(std::string_view name);

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double weight_decay = 0.0;  // L2 coefficient added to the gradient
  double dropout = 0.0;
  // HRR head only. AbsCosine leaves the sign of each class response free, so
  // a class can be learned as strongly anti-aligned and then ranked last by
  // the signed decoder; PlainCosine pins the sign.
  LossVariant hrr_loss = LossVariant::AbsCosine;
  RngSeed seed{0};
  // Each batch is split into `jobs` contiguous chunks whose gradients are
  // summed in chunk order; results are bit-stable only for a fixed `jobs`.
  std::size_t jobs = 1;

  // Throws ConfigError on non-positive sizes or rates outside their ranges.
  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double seconds = 0.0;
  std::optional<double> validation_p1;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Trains in place. Examples with no labels contribute nothing to the loss.
// Throws DivergenceError as soon as a batch loss or parameter turns non-finite.
std::vector<EpochStats> train(Model& model, const SparseDataset& data, const TrainConfig& config,
                              const SparseDataset* validation = nullptr,
                              const EpochCallback& on_epoch = {});

// Mean objective over the dataset (examples without labels skipped).
[[nodiscard]] double dataset_loss(const Model& model, const SparseDataset& data,
                                  LossVariant variant = LossVariant::AbsCosine);

// Top-k label rankings for every example, with ground truth attached.
[[nodiscard]] std::vector<RankedPrediction> predict_topk(const Model& model, const SparseDataset& data,
                                                         std::size_t k, std::size_t batch_size = 256);

[[nodiscard]] MetricReport evaluate_model(const Model& model, const SparseDataset& data,
                                          std::span<const std::size_t> ks = kDefaultKs);

}  // namespace hrrxml
