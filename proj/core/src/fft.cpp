#include "hrrxml/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "hrrxml/error.hpp"

namespace hrrxml::fft {
namespace {

constexpr int kRealForward = 2;
constexpr int kRealBackward = 3;

// FFTW planning is not thread-safe; execution through the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // kind: FFTW_FORWARD / FFTW_BACKWARD for c2c, kRealForward / kRealBackward for r2c / c2r.
  fftw_plan get(std::size_t n, int kind) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW_ESTIMATE never reads the arrays and picks the same algorithm on every
    // run (FFTW_MEASURE would not, breaking bit reproducibility). FFTW_UNALIGNED
    // lets the plan run on any std::vector buffer.
    constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    fftw_plan plan = nullptr;
    if (kind == kRealForward) {
      plan = fftw_plan_dft_r2c_1d(len, reinterpret_cast<double*>(in), out, kFlags);
    } else if (kind == kRealBackward) {
      plan = fftw_plan_dft_c2r_1d(len, in, reinterpret_cast<double*>(out), kFlags);
    } else {
      plan = fftw_plan_dft_1d(len, in, out, kind, kFlags);
    }
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw NumericError("fftw: failed to plan length " + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<const std::complex<double>> in, Spectrum& out, int sign) {
  out.resize(in.size());
  if (in.empty()) return;
  fftw_plan plan = cache().get(in.size(), sign);
  // fftw_execute_dft does not modify the input of an out-of-place plan.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Spectrum forward(std::span<const double> signal) {
  const std::size_t n = signal.size();
  Spectrum out(n);
  if (n == 0) return out;
  // r2c writes bins 0..n/2; the rest follow from conjugate symmetry.
  fftw_execute_dft_r2c(cache().get(n, kRealForward), const_cast<double*>(signal.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t j = n / 2 + 1; j < n; ++j) out[j] = std::conj(out[n - j]);
  return out;
}

Spectrum forward(std::span<const std::complex<double>> signal) {
  Spectrum out;
  execute(signal, out, FFTW_FORWARD);
  return out;
}

Spectrum inverse(std::span<const std::complex<double>> spectrum) {
  Spectrum out;
  execute(spectrum, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum) {
  const std::size_t n = spectrum.size();
  std::vector<double> real(n);
  if (n == 0) return real;
  // The discarded imaginary part is the inverse of (X_j - conj(X_{-j})) / 2i;
  // by Parseval its largest entry is at most sqrt(sum |X_j - conj(X_{-j})|^2 / 4n).
  double asymmetry = 0.0;
  for (std::size_t j = 0; j < n; ++j) asymmetry += std::norm(spectrum[j] - std::conj(spectrum[(n - j) % n]));
  const double max_imag = std::sqrt(asymmetry / (4.0 * static_cast<double>(n)));

  // c2r reads bins 0..n/2 only and may overwrite its input.
  Spectrum half(spectrum.begin(), spectrum.begin() + static_cast<std::ptrdiff_t>(n / 2 + 1));
  fftw_execute_dft_c2r(cache().get(n, kRealBackward), reinterpret_cast<fftw_complex*>(half.data()), real.data());
  const double scale = 1.0 / static_cast<double>(n);
  double max_real = 0.0;
  for (double& v : real) {
    v *= scale;
    max_real = std::max(max_real, std::abs(v));
  }
  if (!(max_imag < 1e-8 * (1.0 + max_real))) {
    throw NumericError("inverse transform left imaginary residue " + std::to_string(max_imag) +
                       " (spectrum not conjugate-symmetric)");
  }
  return real;
}

}  // namespace hrrxml::fft
