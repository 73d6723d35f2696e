#pragma once

// Holographic Reduced Representation algebra over dense real vectors.
//
// Binding is circular convolution, computed as a pointwise product of DFT
// spectra. All operations are pure; vectors are values.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hrrxml/fft.hpp"
#include "hrrxml/rng.hpp"

namespace hrrxml {

// Floor applied to spectral magnitudes by project().
inline constexpr double kProjectionEpsilon = 1e-5;
// exact_inverse() refuses spectra with a bin at or below this magnitude.
inline constexpr double kInverseEpsilon = 1e-5;
// Guard added to norm products by cosine_similarity().
inline constexpr double kCosineEpsilon = 1e-8;

class Dimension {
 public:
  // Throws DimensionError when d < 2.
  explicit Dimension(std::size_t d);

  [[nodiscard]] std::size_t value() const noexcept { return d_; }
  friend bool operator==(Dimension, Dimension) = default;

 private:
  std::size_t d_;
};

// A dense real vector of length >= 2 with finite entries.
class HrrVector {
 public:
  // Throws DimensionError for length < 2 and NumericError for NaN/Inf entries.
  explicit HrrVector(std::vector<double> values);
  HrrVector(std::initializer_list<double> values);

  static HrrVector zeros(Dimension d);
  // Identity of binding: [1, 0, ..., 0].
  static HrrVector delta(Dimension d);

  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] double dot(const HrrVector& other) const;
  [[nodiscard]] double norm() const;

  HrrVector& operator+=(const HrrVector& other);
  HrrVector& operator-=(const HrrVector& other);
  HrrVector& operator*=(double scale);

  friend HrrVector operator+(HrrVector a, const HrrVector& b) { return a += b; }
  friend HrrVector operator-(HrrVector a, const HrrVector& b) { return a -= b; }
  friend HrrVector operator*(HrrVector a, double s) { return a *= s; }
  friend HrrVector operator*(double s, HrrVector a) { return a *= s; }
  friend HrrVector operator-(HrrVector a) { return a *= -1.0; }
  friend bool operator==(const HrrVector&, const HrrVector&) = default;

 private:
  std::vector<double> values_;
};

void require_same_dim(const HrrVector& a, const HrrVector& b, const char* op);

[[nodiscard]] fft::Spectrum spectrum(const HrrVector& x);
// Builds a vector from a conjugate-symmetric spectrum; see fft::inverse_real.
[[nodiscard]] HrrVector from_spectrum(std::span<const std::complex<double>> spec);

// c_k = sum_i a_i * b_{(k - i) mod d}.
[[nodiscard]] HrrVector bind(const HrrVector& a, const HrrVector& b);

// Spectral inverse F^-1(1 / F(a)). Throws NumericError naming the first bin whose
// magnitude is <= kInverseEpsilon.
[[nodiscard]] HrrVector exact_inverse(const HrrVector& a);

// [a_0, a_{d-1}, a_{d-2}, ..., a_1]. Equals exact_inverse for unitary vectors.
[[nodiscard]] HrrVector pseudo_inverse(const HrrVector& a);

// bind(s, pseudo_inverse(y)).
[[nodiscard]] HrrVector unbind(const HrrVector& s, const HrrVector& y);

// F^-1(F(s) / F(y)) with no conditioning guard: the textbook HRR query with the
// exact inverse, numerically unstable when y has small spectral bins.
[[nodiscard]] HrrVector unbind_exact(const HrrVector& s, const HrrVector& y);

// Complex unit-magnitude projection: F^-1(F(x)_j / max(|F(x)_j|, eps)).
[[nodiscard]] HrrVector project(const HrrVector& x);

// i.i.d. N(0, 1/d) entries; deterministic in seed.
[[nodiscard]] HrrVector sample_standard(Dimension d, RngSeed seed);
// project(sample_standard(d, seed)).
[[nodiscard]] HrrVector sample_unitary(Dimension d, RngSeed seed);

// dot / (|a| |b| + kCosineEpsilon); zero when either operand is zero.
[[nodiscard]] double cosine_similarity(const HrrVector& a, const HrrVector& b);

// Adjoint of a -> bind(a, b), evaluated at g: bind(g, pseudo_inverse(b)).
[[nodiscard]] HrrVector bind_adjoint(const HrrVector& g, const HrrVector& b);

}  // namespace hrrxml
