#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracemc {

enum class IrisClass { Setosa, Versicolor, Virginica };

std::string_view to_string(IrisClass c);
/// Accepts "setosa" or the UCI label "Iris-setosa" (likewise for the others).
IrisClass parse_iris_class(std::string_view text);

struct IrisRow {
  std::array<double, 4> features{};
  IrisClass label = IrisClass::Setosa;
};

struct IrisDataset {
  std::vector<IrisRow> rows;

  std::size_t count(IrisClass c) const;
  /// 1.0 for rows of class `positive`, 0.0 otherwise.
  std::vector<double> one_vs_rest_labels(IrisClass positive) const;
};

/// A malformed line; the message carries the source name and line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed rows, but not the 150-row / 50-per-class dataset.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the UCI comma-separated format: four floats and a label per line.
/// Blank lines are ignored. Features are returned as written.
IrisDataset parse_iris(std::istream& in, const std::string& source_name = "<stream>");
IrisDataset load_iris(const std::filesystem::path& path);

/// $IRIS_PATH when set, otherwise the copy bundled with the sources.
std::filesystem::path default_iris_path();

}  // namespace tracemc
