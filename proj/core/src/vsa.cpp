#include "hrrxml/vsa.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hrrxml/error.hpp"

namespace hrrxml {

std::string_view to_string(VsaKind kind) {
  switch (kind) {
    case VsaKind::HrrNaive: return "hrr";
    case VsaKind::HrrProjected: return "hrr-proj";
    case VsaKind::MapC: return "map-c";
    case VsaKind::Vtb: return "vtb";
  }
  return "?";
}

std::optional<VsaKind> parse_vsa_kind(std::string_view name) {
  for (VsaKind k : {VsaKind::HrrNaive, VsaKind::HrrProjected, VsaKind::MapC, VsaKind::Vtb}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> exact_sqrt(std::size_t d) {
  auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
  for (std::size_t c = (m > 0 ? m - 1 : 0); c <= m + 1; ++c) {
    if (c * c == d) return c;
  }
  return std::nullopt;
}

void validate_dimension(VsaKind kind, Dimension d) {
  if (kind == VsaKind::Vtb && !exact_sqrt(d.value())) {
    throw DimensionError("vtb requires a perfect-square dimension, got " +
                         std::to_string(d.value()));
  }
}

namespace {

// out = scale * blockdiag(Y, ..., Y) * x, or its transpose, where Y is the
// row-major m x m reshape of y.
HrrVector vtb_apply(const HrrVector& x, const HrrVector& y, bool transpose) {
  require_same_dim(x, y, "vtb");
  const std::size_t d = x.dim();
  const auto root = exact_sqrt(d);
  if (!root) throw DimensionError("vtb requires a perfect-square dimension, got " + std::to_string(d));
  const std::size_t m = *root;
  const double scale = std::pow(static_cast<double>(d), 0.25);
  const auto xv = x.values();
  const auto yv = y.values();
  std::vector<double> out(d, 0.0);
  for (std::size_t block = 0; block < m; ++block) {
    const std::size_t base = block * m;
    for (std::size_t r = 0; r < m; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        const double yrc = transpose ? yv[c * m + r] : yv[r * m + c];
        acc += yrc * xv[base + c];
      }
      out[base + r] = scale * acc;
    }
  }
  return HrrVector(std::move(out));
}

}  // namespace

HrrVector vsa_sample(VsaKind kind, Dimension d, RngSeed seed) {
  validate_dimension(kind, d);
  switch (kind) {
    case VsaKind::HrrNaive:
    case VsaKind::Vtb:
      return sample_standard(d, seed);
    case VsaKind::HrrProjected:
      return sample_unitary(d, seed);
    case VsaKind::MapC: {
      std::mt19937_64 gen(seed.value);
      std::uniform_real_distribution<double> uniform(-1.0, 1.0);
      std::vector<double> v(d.value());
      for (double& x : v) x = uniform(gen);
      return HrrVector(std::move(v));
    }
  }
  throw DimensionError("unknown vsa kind");
}

HrrVector vsa_bind(VsaKind kind, const HrrVector& x, const HrrVector& y) {
  require_same_dim(x, y, "vsa_bind");
  switch (kind) {
    case VsaKind::HrrNaive:
    case VsaKind::HrrProjected:
      return bind(x, y);
    case VsaKind::MapC: {
      std::vector<double> out(x.dim());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
      return HrrVector(std::move(out));
    }
    case VsaKind::Vtb:
      return vtb_apply(x, y, false);
  }
  throw DimensionError("unknown vsa kind");
}

HrrVector vsa_unbind(VsaKind kind, const HrrVector& s, const HrrVector& y) {
  require_same_dim(s, y, "vsa_unbind");
  switch (kind) {
    case VsaKind::HrrNaive:
      return unbind_exact(s, y);
    case VsaKind::HrrProjected:
      return unbind(s, y);
    case VsaKind::MapC:
      return vsa_bind(VsaKind::MapC, s, y);
    case VsaKind::Vtb:
      return vtb_apply(s, y, true);
  }
  throw DimensionError("unknown vsa kind");
}

void vsa_finish_superposition(VsaKind kind, std::vector<double>& sum) {
  if (kind != VsaKind::MapC) return;
  for (double& v : sum) v = std::clamp(v, -1.0, 1.0);
}

}  // namespace hrrxml
