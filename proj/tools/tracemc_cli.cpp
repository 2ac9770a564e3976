// tracemc: run the benchmark models under MH, slice or mixture kernels.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "tracemc/csv.hpp"
#include "tracemc/experiment.hpp"
#include "tracemc/kernel.hpp"
#include "tracemc/metrics.hpp"
#include "tracemc/models.hpp"
#include "tracemc/scheduler.hpp"
#include "tracemc/slice.hpp"

namespace {

using namespace tracemc;

double g_width = 1.0;

KernelSpec parse_kernel(const std::string& text) {
  KernelSpec spec = KernelSpec::parse(text);
  spec.slice.initial_width = g_width;
  return spec;
}

std::vector<KernelSpec> parse_kernels(const std::string& list) {
  std::vector<KernelSpec> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_kernel(item));
  }
  if (out.empty()) throw std::invalid_argument("no kernels given");
  return out;
}

ModelOptions model_options(const std::string& iris) {
  ModelOptions opts;
  if (!iris.empty()) opts.iris_path = iris;
  return opts;
}

int cmd_list() {
  for (const auto& name : model_names()) std::cout << name << "\n";
  return 0;
}

int cmd_run(const std::string& model_name, const std::string& kernel, std::uint64_t budget,
            std::uint64_t max_samples, std::uint64_t seed, const std::string& csv,
            const std::string& iris) {
  BenchmarkModel model = make_model(model_name, model_options(iris));
  KernelSpec spec = parse_kernel(kernel);
  std::vector<SampleRecord> samples;
  std::unique_ptr<MetricTracker> tracker;
  try {
    tracker = make_tracker(model);
  } catch (const std::invalid_argument&) {
  }
  RunStats stats = run_inference(model.program, spec, budget, seed,
                                 [&](std::uint64_t ll, const Trace& t) {
                                   if (tracker) tracker->add(t.predicts);
                                   if (!csv.empty()) samples.push_back({ll, t.predicts});
                                 },
                                 max_samples);
  std::cout << "model        " << model.name << "\n"
            << "kernel       " << spec.name() << "\n"
            << "steps        " << stats.steps << " (mh " << stats.mh_steps << ", slice "
            << stats.slice_steps << ")\n"
            << "ll_evals     " << stats.ll_evaluations << "\n";
  if (stats.mh_steps > 0) {
    std::cout << "mh_accept    "
              << static_cast<double>(stats.mh_accepted) / static_cast<double>(stats.mh_steps)
              << "\n";
  }
  if (tracker) {
    std::cout << std::left << std::setw(13) << to_string(model.metric) << tracker->value()
              << "\n";
  }
  if (!csv.empty()) {
    auto out = open_output(csv);
    write_samples_csv(out, samples);
  }
  return 0;
}

int cmd_experiment(const std::string& model_name, const std::string& kernels, ExperimentConfig cfg,
                   const std::string& out_path, const std::string& iris) {
  BenchmarkModel model = make_model(model_name, model_options(iris));
  ExperimentResult result = run_experiment(model, parse_kernels(kernels), cfg);
  for (const auto& k : result.kernels) {
    std::cout << std::left << std::setw(14) << k.spec.name() << "final median "
              << to_string(model.metric) << " " << format_number(k.final_median());
    if (k.failed_runs > 0) std::cout << "  (" << k.failed_runs << " failed runs)";
    std::cout << "\n";
  }
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    write_quartiles_csv(out, result);
  } else {
    write_quartiles_csv(std::cout, result);
  }
  return 0;
}

int cmd_posterior(const std::string& model_name, const std::string& kernel, std::uint64_t budget,
                  std::uint64_t seed, std::size_t bins, std::optional<double> lo,
                  std::optional<double> hi, const std::string& out_path, const std::string& iris) {
  BenchmarkModel model = make_model(model_name, model_options(iris));
  std::vector<double> values;
  run_inference(model.program, parse_kernel(kernel), budget, seed,
                [&](std::uint64_t, const Trace& t) {
                  auto it = t.predicts.find(model.predict_name);
                  if (it == t.predicts.end()) return;
                  if (const auto* d = std::get_if<double>(&it->second)) values.push_back(*d);
                });
  if (values.empty()) {
    throw std::runtime_error("predict '" + model.predict_name + "' is not a scalar");
  }
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double a = lo.value_or(*mn);
  double b = hi.value_or(*mx);
  if (!(b > a)) b = a + 1.0;
  auto h = histogram(values, bins, a, b);
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    write_histogram_csv(out, h);
  } else {
    write_histogram_csv(std::cout, h);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-based MCMC benchmarks: MH, slice and mixture kernels"};
  app.require_subcommand(1);

  std::string iris;
  app.add_option("--iris", iris, "Iris data file (default: $IRIS_PATH or the bundled copy)");
  app.add_option("--width", g_width, "Slice initial width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-models", "Print the available model names");

  std::string model = "normal_mean_1";
  std::string kernel = "slice";
  std::uint64_t budget = 100000;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "Run one chain and report its metric");
  std::string csv;
  run->add_option("--model", model)->required();
  run->add_option("--kernel", kernel, "mh | slice | naive-slice | mix:<w>")->capture_default_str();
  run->add_option("--budget", budget, "LL-evaluation budget")->capture_default_str();
  std::uint64_t max_samples = 0;
  run->add_option("--samples", max_samples, "Also stop after this many samples (0 = no limit)");
  run->add_option("--seed", seed)->capture_default_str();
  run->add_option("--csv", csv, "Write every sample's predicts here");

  auto* exp = app.add_subcommand("experiment", "Metric quartiles over repeated runs");
  std::string kernels = "mh,slice";
  std::string out;
  ExperimentConfig cfg;
  exp->add_option("--model", model)->required();
  exp->add_option("--kernels", kernels, "Comma-separated kernel list")->capture_default_str();
  exp->add_option("--budget", cfg.budget)->capture_default_str();
  exp->add_option("--runs", cfg.runs)->capture_default_str();
  exp->add_option("--seed", cfg.base_seed, "Seed of the first run")->capture_default_str();
  exp->add_option("--threads", cfg.threads, "0 = all cores")->capture_default_str();
  exp->add_option("--out", out, "Quartile CSV path (default: stdout)");

  auto* post = app.add_subcommand("posterior", "Histogram of a scalar prediction");
  std::size_t bins = 50;
  std::optional<double> lo;
  std::optional<double> hi;
  post->add_option("--model", model)->required();
  post->add_option("--kernel", kernel)->capture_default_str();
  post->add_option("--budget", budget)->capture_default_str();
  post->add_option("--seed", seed)->capture_default_str();
  post->add_option("--bins", bins)->capture_default_str()->check(CLI::PositiveNumber);
  post->add_option("--lo", lo);
  post->add_option("--hi", hi);
  post->add_option("--out", out, "Histogram CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list();
    if (run->parsed()) return cmd_run(model, kernel, budget, max_samples, seed, csv, iris);
    if (exp->parsed()) return cmd_experiment(model, kernels, cfg, out, iris);
    if (post->parsed()) {
      return cmd_posterior(model, kernel, budget, seed, bins, lo, hi, out, iris);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
