#include "hrrxml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "hrrxml/error.hpp"

namespace hrrxml {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(sep, start);
    const std::size_t stop = end == std::string_view::npos ? s.size() : end;
    if (stop > start) out.push_back(s.substr(start, stop - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

std::size_t parse_index(std::string_view token, std::size_t line, const char* what, bool one_based) {
  auto v = parse_number<std::size_t>(token, line, what);
  if (one_based) {
    if (v == 0) throw ParseError(line, std::string(what) + " 0 in one-based input");
    --v;
  }
  return v;
}

}  // namespace

std::size_t SparseDataset::empty_label_examples() const {
  return static_cast<std::size_t>(
      std::count_if(examples.begin(), examples.end(), [](const auto& e) { return e.labels.empty(); }));
}

SparseDataset parse_xml_repo(std::istream& in, const ParseOptions& opts) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ' ');
  if (header.size() != 3) throw ParseError(1, "header must be 'N D L'");
  const auto n = parse_number<std::size_t>(header[0], 1, "example count");
  SparseDataset ds;
  ds.num_features = parse_number<std::size_t>(header[1], 1, "feature count");
  ds.num_labels = parse_number<std::size_t>(header[2], 1, "label count");
  ds.examples.reserve(n);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (ds.examples.size() == n) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      throw ParseError(line_no, "more examples than the declared " + std::to_string(n));
    }
    auto tokens = split(line, ' ');
    SparseExample ex;
    std::size_t first_feature = 0;
    if (!tokens.empty() && tokens[0].find(':') == std::string_view::npos) {
      std::vector<std::size_t> labels;
      for (auto tok : split(tokens[0], ',')) {
        const auto label = parse_index(tok, line_no, "label index", opts.one_based);
        if (label >= ds.num_labels) {
          throw ParseError(line_no, "label index " + std::to_string(label) + " >= L=" +
                                        std::to_string(ds.num_labels));
        }
        labels.push_back(label);
      }
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      ex.labels = LabelSet(std::move(labels));
      first_feature = 1;
    }
    for (std::size_t t = first_feature; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected index:value, got '" + std::string(tokens[t]) + "'");
      }
      const auto index = parse_index(tokens[t].substr(0, colon), line_no, "feature index", opts.one_based);
      if (index >= ds.num_features) {
        throw ParseError(line_no, "feature index " + std::to_string(index) + " >= D=" +
                                      std::to_string(ds.num_features));
      }
      const auto value = parse_number<double>(tokens[t].substr(colon + 1), line_no, "feature value");
      if (!std::isfinite(value)) throw ParseError(line_no, "non-finite feature value");
      ex.features.push_back(SparseFeature{static_cast<std::uint32_t>(index), value});
    }
    std::sort(ex.features.begin(), ex.features.end(),
              [](const auto& a, const auto& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < ex.features.size(); ++i) {
      if (ex.features[i].index == ex.features[i - 1].index) {
        throw ParseError(line_no, "duplicate feature index " + std::to_string(ex.features[i].index));
      }
    }
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.size() != n) {
    throw ParseError(line_no, "declared " + std::to_string(n) + " examples, found " +
                                  std::to_string(ds.examples.size()));
  }
  ds.propensities = compute_propensities(ds);
  return ds;
}

SparseDataset load_xml_repo(const std::filesystem::path& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_xml_repo(in, opts);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void serialize_xml_repo(std::ostream& out, const SparseDataset& ds) {
  out << ds.size() << ' ' << ds.num_features << ' ' << ds.num_labels << '\n';
  char buf[64];
  for (const auto& ex : ds.examples) {
    std::string row;
    bool first = true;
    for (std::size_t label : ex.labels.indices()) {
      if (!first) row += ',';
      row += std::to_string(label);
      first = false;
    }
    for (const auto& f : ex.features) {
      if (!row.empty()) row += ' ';
      row += std::to_string(f.index);
      row += ':';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), f.value);
      row.append(buf, ptr);
    }
    out << row << '\n';
  }
}

void save_xml_repo(const std::filesystem::path& path, const SparseDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  serialize_xml_repo(out, ds);
}

std::vector<double> compute_propensities(const SparseDataset& ds) {
  std::vector<double> counts(ds.num_labels, 0.0);
  for (const auto& ex : ds.examples) {
    for (std::size_t l : ex.labels.indices()) counts[l] += 1.0;
  }
  const double n = static_cast<double>(std::max<std::size_t>(ds.size(), 1));
  for (double& c : counts) c = std::max(c, 1.0) / n;
  return counts;
}

SparseDataset synth_generate(std::size_t n, std::size_t num_features, std::size_t num_labels,
                             std::size_t labels_per_point, RngSeed seed, const SynthOptions& opts) {
  if (n == 0 || num_labels == 0 || labels_per_point == 0) throw ConfigError("synth: sizes must be positive");
  if (labels_per_point > num_labels) throw ConfigError("synth: labels_per_point exceeds L");
  if (num_features < num_labels) throw ConfigError("synth: need D >= L for disjoint feature blocks");
  const std::size_t block = num_features / num_labels;
  std::mt19937_64 gen(seed.value);
  std::normal_distribution<double> noise(0.0, opts.noise);
  SparseDataset ds;
  ds.num_features = num_features;
  ds.num_labels = num_labels;
  ds.examples.reserve(n);
  std::vector<std::size_t> pool(num_labels);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates keeps the draw independent of the standard library's shuffle.
    for (std::size_t j = 0; j < labels_per_point; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, num_labels - 1);
      std::swap(pool[j], pool[pick(gen)]);
    }
    std::vector<std::size_t> labels(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(labels_per_point));
    std::sort(labels.begin(), labels.end());
    SparseExample ex;
    for (std::size_t l : labels) {
      for (std::size_t f = l * block; f < (l + 1) * block; ++f) {
        const double v = 1.0 + (opts.noise > 0.0 ? noise(gen) : 0.0);
        ex.features.push_back(SparseFeature{static_cast<std::uint32_t>(f), v});
      }
    }
    ex.labels = LabelSet(std::move(labels));
    ds.examples.push_back(std::move(ex));
  }
  ds.propensities = compute_propensities(ds);
  return ds;
}

SparseDataset subset(const SparseDataset& ds, std::span<const std::size_t> rows) {
  SparseDataset out;
  out.num_features = ds.num_features;
  out.num_labels = ds.num_labels;
  out.examples.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= ds.size()) throw DimensionError("subset row " + std::to_string(r) + " out of range");
    out.examples.push_back(ds.examples[r]);
  }
  out.propensities = compute_propensities(out);
  return out;
}

std::pair<SparseDataset, SparseDataset> split_dataset(const SparseDataset& ds, double fraction,
                                                      RngSeed seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("split fraction must be in (0, 1)");
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::mt19937_64 gen(seed.value);
  for (std::size_t i = rows.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(rows[i - 1], rows[pick(gen)]);
  }
  const auto cut = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
  std::vector<std::size_t> first(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<std::size_t> second(rows.begin() + static_cast<std::ptrdiff_t>(cut), rows.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {subset(ds, first), subset(ds, second)};
}

std::vector<std::size_t> load_split_rows(const std::filesystem::path& path, std::size_t column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::size_t> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tok;
    std::size_t col = 0;
    bool found = false;
    while (fields >> tok) {
      if (col++ == column) {
        const auto v = parse_number<std::size_t>(tok, line_no, "split row");
        if (v == 0) throw ParseError(line_no, "split rows are 1-based");
        rows.push_back(v - 1);
        found = true;
        break;
      }
    }
    if (!found && line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError(line_no, "split file has no column " + std::to_string(column));
    }
  }
  return rows;
}

}  // namespace hrrxml
