#pragma once

// Sparse multi-label datasets in the extreme-classification repository format:
//
//   N D L
//   l1,l2,... f1:v1 f2:v2 ...
//
// One example per line; the label list may be empty.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hrrxml/label_codec.hpp"
#include "hrrxml/rng.hpp"

namespace hrrxml {

struct SparseFeature {
  std::uint32_t index;
  double value;

  friend bool operator==(const SparseFeature&, const SparseFeature&) = default;
};

struct SparseExample {
  std::vector<SparseFeature> features;  // ascending, unique indices
  LabelSet labels;

  friend bool operator==(const SparseExample&, const SparseExample&) = default;
};

struct SparseDataset {
  std::size_t num_features = 0;  // D
  std::size_t num_labels = 0;    // L
  std::vector<SparseExample> examples;
  std::vector<double> propensities;  // per label, in (0, 1]

  [[nodiscard]] std::size_t size() const noexcept { return examples.size(); }
  [[nodiscard]] std::size_t empty_label_examples() const;

  friend bool operator==(const SparseDataset&, const SparseDataset&) = default;
};

struct ParseOptions {
  // Shift 1-based label and feature indices down to 0-based.
  bool one_based = false;
};

// Throws ParseError (with 1-based line number) on malformed input.
[[nodiscard]] SparseDataset parse_xml_repo(std::istream& in, const ParseOptions& opts = {});
[[nodiscard]] SparseDataset load_xml_repo(const std::filesystem::path& path,
                                          const ParseOptions& opts = {});

// Same dialect as the parser: single spaces, no trailing whitespace, '\n'.
// Values use the shortest round-trip decimal form.
void serialize_xml_repo(std::ostream& out, const SparseDataset& ds);
void save_xml_repo(const std::filesystem::path& path, const SparseDataset& ds);

// count_l / N, with unseen labels floored at 1 / N.
[[nodiscard]] std::vector<double> compute_propensities(const SparseDataset& ds);

struct SynthOptions {
  double noise = 0.1;  // std of additive Gaussian noise on planted features
};

// Label l owns the feature block [l*B, (l+1)*B) with B = D / L. Each example
// activates the blocks of `labels_per_point` distinct labels with value 1 plus
// noise, so labels are linearly recoverable from features.
[[nodiscard]] SparseDataset synth_generate(std::size_t n, std::size_t num_features,
                                           std::size_t num_labels, std::size_t labels_per_point,
                                           RngSeed seed, const SynthOptions& opts = {});

// Examples at the given positions, propensities recomputed.
[[nodiscard]] SparseDataset subset(const SparseDataset& ds, std::span<const std::size_t> rows);

// Seeded shuffle then split; the first part receives round(fraction * N).
[[nodiscard]] std::pair<SparseDataset, SparseDataset> split_dataset(const SparseDataset& ds,
                                                                    double fraction, RngSeed seed);

// Published split files: whitespace-separated 1-based row numbers, one column
// per split. Returns 0-based rows of `column`.
[[nodiscard]] std::vector<std::size_t> load_split_rows(const std::filesystem::path& path,
                                                       std::size_t column);

}  // namespace hrrxml
