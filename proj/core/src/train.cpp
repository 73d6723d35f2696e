#include "hrrxml/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

enum Stream : std::uint64_t { kShuffle = 1, kDropout = 2 };

struct Batch {
  std::vector<SparseRow> rows;
  std::vector<const LabelSet*> labels;
};

Batch gather(const SparseDataset& data, std::span<const std::size_t> order) {
  Batch b;
  b.rows.reserve(order.size());
  b.labels.reserve(order.size());
  for (std::size_t i : order) {
    b.rows.emplace_back(data.examples[i].features);
    b.labels.push_back(&data.examples[i].labels);
  }
  return b;
}

struct ChunkResult {
  MlpParams grad;
  double loss_sum = 0.0;
  std::size_t counted = 0;
};

// Gradient of the summed (not averaged) loss over one chunk.
ChunkResult chunk_gradient(const Model& model, const Batch& batch, std::size_t begin, std::size_t end,
                           const DropoutOptions& dropout, LossVariant variant) {
  std::span<const SparseRow> rows(batch.rows.data() + begin, end - begin);
  std::span<const LabelSet* const> labels(batch.labels.data() + begin, end - begin);
  Activations act;
  forward(model, rows, act, dropout);
  for (Eigen::Index i = 0; i < act.out.size(); ++i) {
    if (!std::isfinite(act.out.data()[i])) throw DivergenceError("network output became non-finite");
  }
  auto obj = head_objective(model, act.out, labels, variant);
  ChunkResult r;
  r.loss_sum = obj.loss_sum;
  r.counted = obj.counted;
  obj.grad_out *= static_cast<double>(obj.counted);
  r.grad = backward(model, rows, act, obj.grad_out);
  return r;
}

class Optimizer {
 public:
  Optimizer(const ModelSpec& spec, const TrainConfig& cfg) : cfg_(cfg) {
    if (cfg.optimizer == OptimizerKind::Adam) {
      m_ = MlpParams::zeros(spec);
      v_ = MlpParams::zeros(spec);
    }
  }

  void step(MlpParams& params, const MlpParams& grad) {
    ++t_;
    auto p = params.blocks();
    const auto g = grad.blocks();
    if (cfg_.optimizer == OptimizerKind::Sgd) {
      for (std::size_t b = 0; b < p.size(); ++b) {
        for (std::size_t i = 0; i < p[b].size(); ++i) {
          p[b][i] -= cfg_.learning_rate * (g[b][i] + cfg_.weight_decay * p[b][i]);
        }
      }
      return;
    }
    auto m = m_.blocks();
    auto v = v_.blocks();
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t b = 0; b < p.size(); ++b) {
      for (std::size_t i = 0; i < p[b].size(); ++i) {
        const double gi = g[b][i] + cfg_.weight_decay * p[b][i];
        m[b][i] = cfg_.beta1 * m[b][i] + (1.0 - cfg_.beta1) * gi;
        v[b][i] = cfg_.beta2 * v[b][i] + (1.0 - cfg_.beta2) * gi * gi;
        const double mhat = m[b][i] / c1;
        const double vhat = v[b][i] / c2;
        p[b][i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.adam_epsilon);
      }
    }
  }

 private:
  TrainConfig cfg_;
  MlpParams m_, v_;
  std::uint64_t t_ = 0;
};

}  // namespace

std::string_view to_string(OptimizerKind kind) noexcept { return kind == OptimizerKind::Adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "sgd") return OptimizerKind::Sgd;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected adam or sgd)");
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  if (jobs == 0) throw ConfigError("jobs must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight decay must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
}

std::vector<EpochStats> train(Model& model, const SparseDataset& data, const TrainConfig& config,
                              const SparseDataset* validation, const EpochCallback& on_epoch) {
  config.validate();
  if (data.num_features != model.spec().input || data.num_labels != model.spec().num_labels) {
    throw DimensionError("dataset shape (D=" + std::to_string(data.num_features) + ", L=" +
                         std::to_string(data.num_labels) + ") does not match the model");
  }
  Optimizer opt(model.spec(), config);
  std::vector<std::size_t> order(data.size());
  std::vector<EpochStats> history;
  std::uint64_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 gen(derive_seed(config.seed, kShuffle, epoch).value);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(order[i - 1], order[pick(gen)]);
    }
    double epoch_loss = 0.0;
    std::size_t epoch_counted = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const Batch batch = gather(data, std::span(order).subspan(begin, end - begin));
      const std::size_t n = end - begin;
      const std::size_t jobs = std::min(config.jobs, n);
      std::vector<ChunkResult> parts(jobs);
      {
        auto run = [&](std::size_t j) {
          const DropoutOptions dropout{config.dropout, derive_seed(config.seed, kDropout, step * jobs + j)};
          parts[j] = chunk_gradient(model, batch, n * j / jobs, n * (j + 1) / jobs, dropout,
                                    config.hrr_loss);
        };
        if (jobs == 1) {
          run(0);
        } else {
          std::vector<std::exception_ptr> errors(jobs);
          std::vector<std::jthread> workers;
          for (std::size_t j = 0; j < jobs; ++j) {
            workers.emplace_back([&, j] {
              try {
                run(j);
              } catch (...) {
                errors[j] = std::current_exception();
              }
            });
          }
          workers.clear();
          for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
          }
        }
      }
      ++step;
      MlpParams grad = std::move(parts[0].grad);
      double loss_sum = parts[0].loss_sum;
      std::size_t counted = parts[0].counted;
      for (std::size_t j = 1; j < jobs; ++j) {
        grad += parts[j].grad;
        loss_sum += parts[j].loss_sum;
        counted += parts[j].counted;
      }
      if (!std::isfinite(loss_sum)) {
        throw DivergenceError("loss became non-finite in epoch " + std::to_string(epoch));
      }
      if (counted == 0) continue;
      grad *= 1.0 / static_cast<double>(counted);
      opt.step(model.params(), grad);
      epoch_loss += loss_sum;
      epoch_counted += counted;
    }
    for (auto b : model.params().blocks()) {
      for (double x : b) {
        if (!std::isfinite(x)) throw DivergenceError("parameters became non-finite in epoch " + std::to_string(epoch));
      }
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = epoch_counted > 0 ? epoch_loss / static_cast<double>(epoch_counted) : 0.0;
    if (validation != nullptr) {
      const std::size_t ks[] = {1};
      stats.validation_p1 = evaluate_model(model, *validation, ks).at(1).p;
    }
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return history;
}

double dataset_loss(const Model& model, const SparseDataset& data, LossVariant variant) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  std::size_t counted = 0;
  constexpr std::size_t kChunk = 256;
  for (std::size_t begin = 0; begin < order.size(); begin += kChunk) {
    const std::size_t end = std::min(order.size(), begin + kChunk);
    const Batch batch = gather(data, std::span(order).subspan(begin, end - begin));
    const Matrix out = forward(model, batch.rows);
    const auto obj = head_objective(model, out, batch.labels, variant);
    total += obj.loss_sum;
    counted += obj.counted;
  }
  return counted > 0 ? total / static_cast<double>(counted) : 0.0;
}

std::vector<RankedPrediction> predict_topk(const Model& model, const SparseDataset& data, std::size_t k,
                                           std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  std::vector<RankedPrediction> preds;
  preds.reserve(data.size());
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
    const std::size_t end = std::min(order.size(), begin + batch_size);
    const Batch batch = gather(data, std::span(order).subspan(begin, end - begin));
    const Matrix out = forward(model, batch.rows);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const auto scores = label_scores(model, {out.row(r).data(), static_cast<std::size_t>(out.cols())});
      preds.push_back(RankedPrediction{topk_indices(scores, k), *batch.labels[static_cast<std::size_t>(r)]});
    }
  }
  return preds;
}

MetricReport evaluate_model(const Model& model, const SparseDataset& data, std::span<const std::size_t> ks) {
  if (ks.empty()) throw ConfigError("no k values requested");
  const std::size_t kmax = *std::max_element(ks.begin(), ks.end());
  const auto preds = predict_topk(model, data, std::min(kmax, model.spec().num_labels));
  return evaluate(preds, data.propensities, ks);
}

}  // namespace hrrxml
