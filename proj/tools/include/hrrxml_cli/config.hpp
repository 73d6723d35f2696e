#pragma once

// `key=value` run configuration files and the run manifest written at the top
// of every tabular output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hrrxml::cli {

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;  // 1-based
};

// One `key=value` per line; blank lines and lines starting with '#' are
// ignored; whitespace around key and value is trimmed. Throws ParseError on a
// line without '=', an empty key, or a repeated key.
[[nodiscard]] std::vector<ConfigEntry> parse_config(std::istream& in);
[[nodiscard]] std::vector<ConfigEntry> load_config(const std::filesystem::path& path);

using ResolvedConfig = std::vector<std::pair<std::string, std::string>>;

struct RunManifest {
  std::string subcommand;
  ResolvedConfig config;  // every option after defaults, config file and flags
  std::uint64_t seed = 0;
  std::string version;
  std::string started;  // ISO-8601 UTC
};

// Library version plus the source revision the build was configured from.
[[nodiscard]] std::string version_string();

// Current UTC time, or SOURCE_DATE_EPOCH when that variable holds an integer,
// formatted as YYYY-MM-DDTHH:MM:SSZ.
[[nodiscard]] std::string start_timestamp();

// `# key: value` lines, config entries as `# config: key=value`.
void write_manifest(std::ostream& out, const RunManifest& manifest);

}  // namespace hrrxml::cli
