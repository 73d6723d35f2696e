#pragma once

// Binary model checkpoints.
//
//   bytes 0-7   magic "HRRXMLCK"
//   u32         format version (1)
//   u32         head (0 = fc, 1 = hrr)
//   u64 x 6     input, hidden1, hidden2, output width, num_labels, label_seed
//   f64 blocks  w1, b1, w2, b2, w3, b3 (row-major, fan_in x fan_out)
//
// All integers and floats are little-endian.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "hrrxml/mlp.hpp"

namespace hrrxml {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Model& model);
void save_checkpoint(const std::filesystem::path& path, const Model& model);

// Throws ConfigError for a bad magic or version, DimensionError for
// inconsistent shape metadata, and Error for a truncated file.
[[nodiscard]] Model read_checkpoint(std::istream& in);
[[nodiscard]] Model load_checkpoint(const std::filesystem::path& path);

}  // namespace hrrxml
