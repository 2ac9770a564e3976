#include "tracemc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace tracemc {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return std::to_string(x);
  return {buf, ptr};
}

void write_quartiles_csv(std::ostream& out, const ExperimentResult& result) {
  out << "ll_count,kernel,p25,median,p75\n";
  for (const auto& k : result.kernels) {
    std::string name = k.spec.name();
    for (std::size_t c = 0; c < k.summary.size(); ++c) {
      const auto& q = k.summary[c];
      out << result.checkpoints[c] << ',' << name << ',' << format_number(q.p25) << ','
          << format_number(q.median) << ',' << format_number(q.p75) << '\n';
    }
  }
}

void write_samples_csv(std::ostream& out, const std::vector<SampleRecord>& samples) {
  out << "ll_count,name,value\n";
  for (const auto& s : samples) {
    for (const auto& [name, value] : s.predicts) {
      if (const auto* d = std::get_if<double>(&value)) {
        out << s.ll_count << ',' << name << ',' << format_number(*d) << '\n';
      } else {
        const auto& v = std::get<std::vector<double>>(value);
        for (std::size_t i = 0; i < v.size(); ++i) {
          out << s.ll_count << ',' << name << '[' << i << "]," << format_number(v[i]) << '\n';
        }
      }
    }
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_lo,bin_hi,mass\n";
  for (const auto& b : bins) {
    out << format_number(b.lo) << ',' << format_number(b.hi) << ',' << format_number(b.mass)
        << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace tracemc
