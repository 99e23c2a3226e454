#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace medest {

// Line-oriented key=value configuration with [section] headers and '#'
// comments. Order is preserved; duplicate keys within a section and unknown
// keys at extraction time are errors.
struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
};

struct ConfigFile {
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& name) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config(const std::string& path);
std::string serialize_config(const ConfigFile& file);

// Scalar parsers shared by the config consumers. parse_fraction accepts
// plain decimals and "a/b" forms (so tau = 1/6 stays exact in configs).
double parse_double(const std::string& raw, const std::string& context);
double parse_fraction(const std::string& raw, const std::string& context);
std::uint64_t parse_u64(const std::string& raw, const std::string& context);
std::vector<std::string> split_list(const std::string& raw);

// FNV-1a over the serialized text; reports carry it as provenance.
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t value);

}  // namespace medest
