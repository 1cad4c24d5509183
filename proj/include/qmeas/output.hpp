#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qmeas {

using Cell = std::variant<double, long, std::string>;

// Shortest round-trip-safe text with '.' decimal; identical across runs.
std::string format_real(double v);
std::string csv_field(const std::string& s);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add(const std::vector<Cell>& row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Flat JSON object; nested values are rejected.
class Sidecar {
 public:
  void set(const std::string& key, const nlohmann::json& v);
  void set_config(const std::map<std::string, std::string>& values);
  const nlohmann::json& json() const { return j_; }
  void write(const std::string& path) const;

 private:
  nlohmann::json j_ = nlohmann::json::object();
};

// Library versions compiled in.
std::map<std::string, std::string> version_info();

}  // namespace qmeas
