#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracemc/experiment.hpp"
#include "tracemc/scheduler.hpp"

namespace tracemc {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form; infinities print as "inf" / "-inf".
std::string format_number(double x);

/// ll_count,kernel,p25,median,p75 (one row per kernel and checkpoint).
void write_quartiles_csv(std::ostream& out, const ExperimentResult& result);

/// ll_count,name,value (vector predicts expand to name[i]).
void write_samples_csv(std::ostream& out, const std::vector<SampleRecord>& samples);

/// bin_lo,bin_hi,mass
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

/// Opens `path` for writing, creating parent directories; throws IoError
/// naming the path on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace tracemc
