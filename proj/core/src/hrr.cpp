#include "hrrxml/hrr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

// Plain complex product. std::complex's operator* routes through the C99
// Annex G NaN/Inf recovery path, which dominates bind() at small d.
std::complex<double> multiply(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace

Dimension::Dimension(std::size_t d) : d_(d) {
  if (d < 2) throw DimensionError("dimension must be >= 2, got " + std::to_string(d));
}

HrrVector::HrrVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw DimensionError("HrrVector length must be >= 2, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericError("HrrVector entry " + std::to_string(i) + " is not finite");
    }
  }
}

HrrVector::HrrVector(std::initializer_list<double> values)
    : HrrVector(std::vector<double>(values)) {}

HrrVector HrrVector::zeros(Dimension d) { return HrrVector(std::vector<double>(d.value(), 0.0)); }

HrrVector HrrVector::delta(Dimension d) {
  std::vector<double> v(d.value(), 0.0);
  v[0] = 1.0;
  return HrrVector(std::move(v));
}

double HrrVector::dot(const HrrVector& other) const {
  require_same_dim(*this, other, "dot");
  return std::inner_product(values_.begin(), values_.end(), other.values_.begin(), 0.0);
}

double HrrVector::norm() const { return std::sqrt(dot(*this)); }

HrrVector& HrrVector::operator+=(const HrrVector& other) {
  require_same_dim(*this, other, "add");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

HrrVector& HrrVector::operator-=(const HrrVector& other) {
  require_same_dim(*this, other, "subtract");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

HrrVector& HrrVector::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

void require_same_dim(const HrrVector& a, const HrrVector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

fft::Spectrum spectrum(const HrrVector& x) { return fft::forward(x.values()); }

HrrVector from_spectrum(std::span<const std::complex<double>> spec) {
  return HrrVector(fft::inverse_real(spec));
}

HrrVector bind(const HrrVector& a, const HrrVector& b) {
  require_same_dim(a, b, "bind");
  fft::Spectrum fa = spectrum(a);
  const fft::Spectrum fb = spectrum(b);
  for (std::size_t j = 0; j < fa.size(); ++j) fa[j] = multiply(fa[j], fb[j]);
  return from_spectrum(fa);
}

HrrVector exact_inverse(const HrrVector& a) {
  fft::Spectrum fa = spectrum(a);
  for (std::size_t j = 0; j < fa.size(); ++j) {
    const double mag = std::abs(fa[j]);
    if (!(mag > kInverseEpsilon)) {
      throw NumericError("exact_inverse: spectral bin " + std::to_string(j) + " has magnitude " +
                         std::to_string(mag) + " <= " + std::to_string(kInverseEpsilon));
    }
    fa[j] = 1.0 / fa[j];
  }
  return from_spectrum(fa);
}

HrrVector pseudo_inverse(const HrrVector& a) {
  const std::size_t d = a.dim();
  std::vector<double> out(d);
  out[0] = a[0];
  for (std::size_t i = 1; i < d; ++i) out[i] = a[d - i];
  return HrrVector(std::move(out));
}

HrrVector unbind(const HrrVector& s, const HrrVector& y) {
  require_same_dim(s, y, "unbind");
  return bind(s, pseudo_inverse(y));
}

HrrVector unbind_exact(const HrrVector& s, const HrrVector& y) {
  require_same_dim(s, y, "unbind_exact");
  fft::Spectrum fs = spectrum(s);
  const fft::Spectrum fy = spectrum(y);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const double m2 = std::norm(fy[j]);
    fs[j] = multiply(fs[j], std::conj(fy[j])) / m2;
  }
  return from_spectrum(fs);
}

HrrVector project(const HrrVector& x) {
  fft::Spectrum fx = spectrum(x);
  // The guard only engages for bins at or below epsilon, so every other bin
  // lands exactly on the unit circle and pseudo_inverse stays exact.
  for (auto& c : fx) c /= std::max(std::sqrt(std::norm(c)), kProjectionEpsilon);
  return from_spectrum(fx);
}

HrrVector sample_standard(Dimension d, RngSeed seed) {
  std::mt19937_64 gen(seed.value);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d.value())));
  std::vector<double> v(d.value());
  for (double& x : v) x = normal(gen);
  return HrrVector(std::move(v));
}

HrrVector sample_unitary(Dimension d, RngSeed seed) { return project(sample_standard(d, seed)); }

double cosine_similarity(const HrrVector& a, const HrrVector& b) {
  require_same_dim(a, b, "cosine_similarity");
  return a.dot(b) / (a.norm() * b.norm() + kCosineEpsilon);
}

HrrVector bind_adjoint(const HrrVector& g, const HrrVector& b) {
  require_same_dim(g, b, "bind_adjoint");
  return bind(g, pseudo_inverse(b));
}

}  // namespace hrrxml
