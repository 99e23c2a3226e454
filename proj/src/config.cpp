#include "medest/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace medest {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

const std::string* ConfigSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile file;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty section name");
      }
      file.sections.push_back(ConfigSection{name, {}});
      current = &file.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    if (current == nullptr) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    }
    if (current->find(key) != nullptr) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "' in [" +
                                  current->name + "]");
    }
    current->entries.emplace_back(key, value);
  }
  return file;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ConfigFile& file) {
  std::ostringstream out;
  bool first = true;
  for (const auto& section : file.sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << section.name << "]\n";
    for (const auto& [k, v] : section.entries) out << k << " = " << v << "\n";
  }
  return out.str();
}

double parse_double(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument(context + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) {
    throw std::invalid_argument(context + ": cannot parse number '" + s + "'");
  }
  return v;
}

double parse_fraction(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos) return parse_double(s, context);
  const double num = parse_double(s.substr(0, slash), context);
  const double den = parse_double(s.substr(slash + 1), context);
  if (den == 0.0) throw std::invalid_argument(context + ": division by zero");
  return num / den;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  if (s.empty() || s[0] == '-') {
    throw std::invalid_argument(context + ": expected a non-negative integer, got '" +
                                s + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) {
    throw std::invalid_argument(context + ": cannot parse integer '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

}  // namespace medest
