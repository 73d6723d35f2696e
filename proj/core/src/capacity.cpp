#include "hrrxml/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

enum Stream : std::uint64_t { kKeys = 1, kValues = 2, kDistractors = 3, kFreshX = 4, kFreshY = 5 };

RngSeed trial_seed(RngSeed base, VsaKind kind, std::size_t d, std::size_t n, std::size_t trial) {
  const std::uint64_t cell = splitmix64((static_cast<std::uint64_t>(kind) << 56) ^
                                        (static_cast<std::uint64_t>(d) << 28) ^ n);
  return derive_seed(base, cell, trial);
}

HrrVector draw(VsaKind kind, Dimension d, RngSeed trial, Stream stream, std::size_t index) {
  return vsa_sample(kind, d, derive_seed(trial, stream, index));
}

std::vector<double> unit(const HrrVector& v) {
  const double scale = 1.0 / (v.norm() + kCosineEpsilon);
  std::vector<double> out(v.data());
  for (double& x : out) x *= scale;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Runs fn(i) for i in [0, count) across `jobs` threads; fn writes to slot i only.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += jobs) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t run_trial(const CapacityTrialConfig& cfg, std::size_t trial) {
  const RngSeed seed = trial_seed(cfg.seed, cfg.kind, cfg.d.value(), cfg.n, trial);
  std::vector<BoundPair> pairs;
  std::vector<HrrVector> distractors;
  pairs.reserve(cfg.n);
  distractors.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    pairs.emplace_back(draw(cfg.kind, cfg.d, seed, kValues, i), draw(cfg.kind, cfg.d, seed, kKeys, i));
  }
  for (std::size_t j = 0; j < cfg.n; ++j) distractors.push_back(draw(cfg.kind, cfg.d, seed, kDistractors, j));
  return count_retrieval_errors(cfg.kind, pairs, distractors);
}

std::pair<double, double> mean_std(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

HrrVector build_statement(VsaKind kind, std::span<const BoundPair> pairs) {
  if (pairs.empty()) throw DimensionError("build_statement: no pairs");
  const std::size_t d = pairs.front().first.dim();
  std::vector<double> sum(d, 0.0);
  for (const auto& [x, y] : pairs) {
    if (x.dim() != d || y.dim() != d) throw DimensionError("build_statement: dimension mismatch");
    const HrrVector b = vsa_bind(kind, x, y);
    for (std::size_t k = 0; k < d; ++k) sum[k] += b[k];
  }
  vsa_finish_superposition(kind, sum);
  return HrrVector(std::move(sum));
}

std::size_t count_retrieval_errors(VsaKind kind, std::span<const BoundPair> pairs,
                                   std::span<const HrrVector> distractors) {
  const HrrVector statement = build_statement(kind, pairs);
  std::vector<std::vector<double>> z;
  z.reserve(distractors.size());
  for (const auto& v : distractors) {
    require_same_dim(v, statement, "count_retrieval_errors");
    z.push_back(unit(v));
  }
  std::size_t errors = 0;
  for (const auto& [x, y] : pairs) {
    const std::vector<double> recovered = unit(vsa_unbind(kind, statement, y));
    const double truth = dot(recovered, unit(x));
    // Ties count as correct.
    const bool beaten = std::any_of(z.begin(), z.end(),
                                    [&](const auto& zj) { return dot(recovered, zj) > truth; });
    errors += beaten ? 1 : 0;
  }
  return errors;
}

RetrievalErrorEstimate retrieval_error_probability(const CapacityTrialConfig& cfg, std::size_t jobs) {
  if (cfg.n < 1 || cfg.trials < 1) throw ConfigError("capacity trial needs n >= 1 and trials >= 1");
  validate_dimension(cfg.kind, cfg.d);
  std::vector<std::size_t> errors(cfg.trials, 0);
  parallel_for(cfg.trials, jobs, [&](std::size_t t) { errors[t] = run_trial(cfg, t); });

  RetrievalErrorEstimate est{cfg.kind, cfg.d.value(), cfg.n, 0.0, 0.0, {}};
  std::vector<double> fractions;
  std::size_t total = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const double frac = static_cast<double>(errors[t]) / static_cast<double>(cfg.n);
    est.trials.push_back(TrialRow{cfg.kind, cfg.d.value(), cfg.n, t, errors[t], frac});
    fractions.push_back(frac);
    total += errors[t];
  }
  est.p_error = static_cast<double>(total) / static_cast<double>(cfg.n * cfg.trials);
  est.std = mean_std(fractions).second;
  return est;
}

std::vector<std::size_t> capacity_grid(std::size_t n_max) {
  std::vector<std::size_t> grid;
  for (int j = 6;; ++j) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(std::sqrt(2.0), j)));
    if (n > n_max) break;
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  return grid;
}

CapacityResult capacity_at_threshold(VsaKind kind, Dimension d, double threshold, RngSeed seed,
                                     const CapacitySweepOptions& opts) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
  validate_dimension(kind, d);
  const auto grid = capacity_grid(opts.n_max);
  if (grid.empty()) throw ConfigError("n_max is below the smallest grid point");

  CapacityResult result{kind, d.value(), threshold, 0, 0, false, {}};
  std::size_t consecutive_fail = 0;
  for (std::size_t n : grid) {
    auto est = retrieval_error_probability(
        CapacityTrialConfig{kind, d, n, opts.trials, seed}, opts.jobs);
    const bool pass = est.p_error <= threshold;
    result.sweep.push_back(std::move(est));
    if (pass) {
      result.largest_passing = n;
      consecutive_fail = 0;
      continue;
    }
    if (result.capacity == 0) result.capacity = n;
    if (++consecutive_fail >= opts.patience) break;
  }
  if (result.capacity == 0) {
    result.capacity = result.sweep.back().n;
    result.saturated = true;
  }
  return result;
}

CapacityCurve capacity_curve(VsaKind kind, std::span<const std::size_t> dims, double threshold,
                             RngSeed seed, const CapacitySweepOptions& opts) {
  CapacityCurve curve{kind, threshold, {}, {}};
  for (std::size_t d : dims) {
    curve.points.push_back(capacity_at_threshold(kind, Dimension(d), threshold, seed, opts));
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const auto& a, const auto& b) { return a.d < b.d; });
  if (kind != VsaKind::HrrNaive) {
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      if (curve.points[i].capacity < curve.points[i - 1].capacity) {
        curve.warnings.push_back(std::string(to_string(kind)) + ": capacity decreased from d=" +
                                 std::to_string(curve.points[i - 1].d) + " to d=" +
                                 std::to_string(curve.points[i].d));
      }
    }
  }
  return curve;
}

std::vector<ResponseStats> query_response_distribution(VsaKind kind, Dimension d,
                                                       std::span<const std::size_t> n_values,
                                                       RngSeed seed, const ResponseOptions& opts) {
  validate_dimension(kind, d);
  if (opts.trials < 1) throw ConfigError("response needs trials >= 1");
  std::vector<ResponseStats> out;
  for (std::size_t n : n_values) {
    if (n < 1) throw ConfigError("response needs n >= 1");
    const std::size_t queries = opts.max_queries == 0 ? n : std::min(n, opts.max_queries);
    std::vector<std::vector<double>> present(opts.trials), absent(opts.trials);
    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
      const RngSeed ts = trial_seed(seed, kind, d.value(), n, t);
      // Pairs are regenerated from their seeds instead of stored: n reaches 2^16.
      std::vector<double> sum(d.value(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const HrrVector b = vsa_bind(kind, draw(kind, d, ts, kValues, i), draw(kind, d, ts, kKeys, i));
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += b[k];
      }
      vsa_finish_superposition(kind, sum);
      const HrrVector statement(std::move(sum));
      for (std::size_t q = 0; q < queries; ++q) {
        // Spread capped queries evenly over the bound pairs.
        const std::size_t i = queries == n ? q : (q * n) / queries;
        const HrrVector x = draw(kind, d, ts, kValues, i);
        present[t].push_back(x.dot(vsa_unbind(kind, statement, draw(kind, d, ts, kKeys, i))));
        const HrrVector fx = draw(kind, d, ts, kFreshX, q);
        absent[t].push_back(fx.dot(vsa_unbind(kind, statement, draw(kind, d, ts, kFreshY, q))));
      }
    });
    std::vector<double> all_present, all_absent;
    for (std::size_t t = 0; t < opts.trials; ++t) {
      all_present.insert(all_present.end(), present[t].begin(), present[t].end());
      all_absent.insert(all_absent.end(), absent[t].begin(), absent[t].end());
    }
    const auto [mp, sp] = mean_std(all_present);
    const auto [ma, sa] = mean_std(all_absent);
    out.push_back(ResponseStats{n, mp, sp, ma, sa});
  }
  return out;
}

}  // namespace hrrxml
