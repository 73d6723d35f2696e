#include "hrrxml/checkpoint.hpp"

#include <array>
#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

constexpr std::array<char, 8> kMagic{'H', 'R', 'R', 'X', 'M', 'L', 'C', 'K'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) throw Error("checkpoint is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Model& model) {
  const auto& s = model.spec();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.head));
  for (std::uint64_t v : {std::uint64_t{s.input}, std::uint64_t{s.hidden1}, std::uint64_t{s.hidden2},
                          std::uint64_t{s.output()}, std::uint64_t{s.num_labels}, s.label_seed}) {
    put_le<std::uint64_t>(out, v);
  }
  for (auto block : model.params().blocks()) {
    for (double x : block) put_le<double>(out, x);
  }
  if (!out) throw Error("failed to write checkpoint");
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_checkpoint(out, model);
}

Model read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size())) throw Error("checkpoint is truncated");
  if (magic != kMagic) throw ConfigError("not a model checkpoint (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto head = get_le<std::uint32_t>(in);
  if (head > 1) throw ConfigError("unknown head kind " + std::to_string(head) + " in checkpoint");
  ModelSpec spec;
  spec.head = static_cast<HeadKind>(head);
  spec.input = get_le<std::uint64_t>(in);
  spec.hidden1 = get_le<std::uint64_t>(in);
  spec.hidden2 = get_le<std::uint64_t>(in);
  const auto output = get_le<std::uint64_t>(in);
  spec.num_labels = get_le<std::uint64_t>(in);
  spec.label_seed = get_le<std::uint64_t>(in);
  if (spec.head == HeadKind::Hrr) {
    spec.d_prime = output;
  } else if (output != spec.num_labels) {
    throw DimensionError("fc checkpoint output width " + std::to_string(output) + " != num_labels " +
                         std::to_string(spec.num_labels));
  }
  spec.validate();
  MlpParams params = MlpParams::zeros(spec);
  for (auto block : params.blocks()) {
    for (double& x : block) x = get_le<double>(in);
  }
  return Model(spec, std::move(params));
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace hrrxml
