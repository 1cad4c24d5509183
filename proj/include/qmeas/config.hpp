#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qmeas {

enum class ParamType { real, integer, seed, text, path, choice };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::real;
  std::string fallback;  // empty: required
  std::string help;
  std::vector<std::string> choices;
  bool optional = false;  // may stay unset even without a fallback
};

struct Schema {
  std::string command;
  std::string summary;
  std::vector<ParamSpec> params;

  const ParamSpec* find(const std::string& key) const;
  std::string describe() const;
};

const char* type_name(ParamType t);

// Flat key=value file; '#' starts a comment, blank lines ignored. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Typed view over the merged parameters of one run.
class RunConfig {
 public:
  // File values first, then flags on top. Unknown keys and bad values throw ConfigError naming the key.
  RunConfig(const Schema& schema, const std::map<std::string, std::string>& file,
            const std::map<std::string, std::string>& flags);

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool has(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma separated
  std::vector<long> integers(const std::string& key) const;

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

}  // namespace qmeas
