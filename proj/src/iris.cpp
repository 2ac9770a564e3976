#include "tracemc/iris.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

namespace tracemc {
namespace {

constexpr std::size_t kExpectedRows = 150;
constexpr std::size_t kExpectedPerClass = 50;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string_view to_string(IrisClass c) {
  switch (c) {
    case IrisClass::Setosa:
      return "setosa";
    case IrisClass::Versicolor:
      return "versicolor";
    case IrisClass::Virginica:
      return "virginica";
  }
  return "unknown";
}

IrisClass parse_iris_class(std::string_view text) {
  text = trim(text);
  if (text.starts_with("Iris-")) text.remove_prefix(5);
  if (text == "setosa") return IrisClass::Setosa;
  if (text == "versicolor") return IrisClass::Versicolor;
  if (text == "virginica") return IrisClass::Virginica;
  throw std::invalid_argument("unknown iris class '" + std::string(text) + "'");
}

std::size_t IrisDataset::count(IrisClass c) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [c](const IrisRow& r) { return r.label == c; }));
}

std::vector<double> IrisDataset::one_vs_rest_labels(IrisClass positive) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.label == positive ? 1.0 : 0.0);
  return out;
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

IrisDataset parse_iris(std::istream& in, const std::string& source_name) {
  IrisDataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;

    IrisRow row;
    for (std::size_t i = 0; i < 4; ++i) {
      auto comma = rest.find(',');
      if (comma == std::string_view::npos) {
        throw ParseError(source_name, lineno, "expected 4 features and a label");
      }
      auto field = trim(rest.substr(0, comma));
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), row.features[i]);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(source_name, lineno, "bad feature value '" + std::string(field) + "'");
      }
      rest.remove_prefix(comma + 1);
    }
    if (rest.find(',') != std::string_view::npos) {
      throw ParseError(source_name, lineno, "too many fields");
    }
    try {
      row.label = parse_iris_class(rest);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source_name, lineno, e.what());
    }
    ds.rows.push_back(row);
  }

  if (ds.rows.size() != kExpectedRows) {
    throw DatasetError(source_name + ": expected " + std::to_string(kExpectedRows) +
                       " rows, found " + std::to_string(ds.rows.size()));
  }
  for (auto c : {IrisClass::Setosa, IrisClass::Versicolor, IrisClass::Virginica}) {
    if (ds.count(c) != kExpectedPerClass) {
      throw DatasetError(source_name + ": expected " + std::to_string(kExpectedPerClass) + " " +
                         std::string(to_string(c)) + " rows, found " +
                         std::to_string(ds.count(c)));
    }
  }
  return ds;
}

IrisDataset load_iris(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open iris file " + path.string());
  return parse_iris(in, path.string());
}

std::filesystem::path default_iris_path() {
  if (const char* env = std::getenv("IRIS_PATH"); env != nullptr && *env != '\0') return env;
  return std::filesystem::path(TRACEMC_DATA_DIR) / "iris.data";
}

}  // namespace tracemc
