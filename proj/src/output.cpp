#include "qmeas/output.hpp"

#include <boost/version.hpp>
#include <Eigen/Core>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmeas/linalg.hpp"

namespace qmeas {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ConfigError("CSV needs a header");
}

void CsvTable::add(const std::vector<Cell>& row) {
  if (row.size() != header_.size())
    throw NumericError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                       std::to_string(header_.size()));
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (const auto& c : row) {
    if (const auto* d = std::get_if<double>(&c)) cells.push_back(format_real(*d));
    else if (const auto* l = std::get_if<long>(&c)) cells.push_back(std::to_string(*l));
    else cells.push_back(std::get<std::string>(c));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << str();
}

void Sidecar::set(const std::string& key, const nlohmann::json& v) {
  if (v.is_object() || v.is_array()) throw NumericError("sidecar value for '" + key + "' is not flat");
  j_[key] = v;
}

void Sidecar::set_config(const std::map<std::string, std::string>& values) {
  for (const auto& [k, v] : values) set("config_" + k, v);
}

void Sidecar::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j_.dump(2) << "\n";
}

std::map<std::string, std::string> version_info() {
  std::ostringstream boost;
  boost << BOOST_VERSION / 100000 << "." << BOOST_VERSION / 100 % 1000 << "." << BOOST_VERSION % 100;
  return {
      {"qmeas_version", QMEAS_VERSION},
      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
      {"boost_version", boost.str()},
      {"json_version", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                           "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
      {"compiler", __VERSION__},
  };
}

}  // namespace qmeas
