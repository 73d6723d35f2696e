#pragma once

// Fixed-width binding operators compared against projected HRR.

#include <optional>
#include <string>
#include <string_view>

#include "hrrxml/hrr.hpp"

namespace hrrxml {

enum class VsaKind {
  HrrNaive,      // Gaussian vectors, exact-inverse unbinding
  HrrProjected,  // unitary vectors, pseudo-inverse unbinding
  MapC,          // uniform [-1, 1] vectors, elementwise product
  Vtb,           // block-diagonal matrix binding; d must be a perfect square
};

// CLI spelling: hrr, hrr-proj, map-c, vtb.
[[nodiscard]] std::string_view to_string(VsaKind kind);
[[nodiscard]] std::optional<VsaKind> parse_vsa_kind(std::string_view name);

// Throws DimensionError when d is not valid for kind.
void validate_dimension(VsaKind kind, Dimension d);

[[nodiscard]] HrrVector vsa_sample(VsaKind kind, Dimension d, RngSeed seed);
[[nodiscard]] HrrVector vsa_bind(VsaKind kind, const HrrVector& x, const HrrVector& y);
[[nodiscard]] HrrVector vsa_unbind(VsaKind kind, const HrrVector& s, const HrrVector& y);

// Superposition as used by statements: plain sum, except MAP-C which clips the
// finished sum to [-1, 1].
void vsa_finish_superposition(VsaKind kind, std::vector<double>& sum);

// Integer square root when d is a perfect square.
[[nodiscard]] std::optional<std::size_t> exact_sqrt(std::size_t d);

}  // namespace hrrxml
