#include "qmeas/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qmeas/linalg.hpp"

namespace qmeas {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a real number, got '" + v + "'");
}

long parse_integer(const std::string& key, const std::string& v) {
  long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::real: return "real";
    case ParamType::integer: return "integer";
    case ParamType::seed: return "seed";
    case ParamType::text: return "text";
    case ParamType::path: return "path";
    case ParamType::choice: return "choice";
  }
  return "?";
}

const ParamSpec* Schema::find(const std::string& key) const {
  for (const auto& p : params)
    if (p.key == key) return &p;
  return nullptr;
}

std::string Schema::describe() const {
  std::ostringstream os;
  os << "qmeas " << command << ": " << summary << "\n\n";
  os << "usage: qmeas " << command << " [--config FILE] [--key=value ...]\n\n";
  std::size_t w = 6;
  for (const auto& p : params) w = std::max(w, p.key.size());
  for (const auto& p : params) {
    os << "  " << p.key << std::string(w + 2 - p.key.size(), ' ') << type_name(p.type);
    os << std::string(9 - std::string(type_name(p.type)).size(), ' ');
    os << (p.fallback.empty() ? std::string(p.optional ? "(optional)" : "(required)") : "[" + p.fallback + "]") << "  " << p.help;
    if (!p.choices.empty()) {
      os << " {";
      for (std::size_t i = 0; i < p.choices.size(); ++i) os << (i ? "," : "") << p.choices[i];
      os << "}";
    }
    os << "\n";
  }
  return os.str();
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(n) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig::RunConfig(const Schema& schema, const std::map<std::string, std::string>& file,
                     const std::map<std::string, std::string>& flags)
    : command_(schema.command) {
  for (const auto& p : schema.params)
    if (!p.fallback.empty()) values_[p.key] = p.fallback;
  for (const auto* src : {&file, &flags})
    for (const auto& [k, v] : *src) {
      if (!schema.find(k)) throw ConfigError("unknown key '" + k + "' for " + schema.command);
      values_[k] = v;
    }
  for (const auto& p : schema.params) {
    const auto it = values_.find(p.key);
    if (it == values_.end() && p.optional) continue;
    if (it == values_.end()) throw ConfigError("missing required key '" + p.key + "'");
    const std::string& v = it->second;
    switch (p.type) {
      case ParamType::real:
        for (const auto& s : split(v)) parse_real(p.key, s);
        break;
      case ParamType::integer:
        for (const auto& s : split(v)) parse_integer(p.key, s);
        break;
      case ParamType::seed:
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
          throw ConfigError("key '" + p.key + "': expected a non-negative integer seed");
        break;
      case ParamType::choice:
        if (std::find(p.choices.begin(), p.choices.end(), v) == p.choices.end())
          throw ConfigError("key '" + p.key + "': '" + v + "' is not an allowed value");
        break;
      case ParamType::text:
      case ParamType::path:
        break;
    }
  }
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double RunConfig::real(const std::string& key) const { return parse_real(key, text(key)); }

long RunConfig::integer(const std::string& key) const { return parse_integer(key, text(key)); }

std::uint64_t RunConfig::seed(const std::string& key) const {
  const std::string& v = text(key);
  std::uint64_t x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': bad seed");
  return x;
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split(text(key))) out.push_back(parse_real(key, s));
  return out;
}

std::vector<long> RunConfig::integers(const std::string& key) const {
  std::vector<long> out;
  for (const auto& s : split(text(key))) out.push_back(parse_integer(key, s));
  return out;
}

}  // namespace qmeas
