// Command-line frontend: eval / bench / synth / inspect.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/eval.hpp"
#include "sparsewarn/model_io.hpp"
#include "sparsewarn/run_config.hpp"
#include "sparsewarn/synth.hpp"
#include "sparsewarn/version.hpp"

namespace fs = std::filesystem;
using namespace sparsewarn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw DataError(path.string() + ": write failure");
}

struct StageTimer {
  using Clock = std::chrono::steady_clock;
  Clock::time_point start = Clock::now();
  std::vector<std::pair<std::string, double>> stages;
  Clock::time_point last = start;

  void mark(const std::string& name) {
    const auto now = Clock::now();
    stages.emplace_back(name, std::chrono::duration<double>(now - last).count());
    last = now;
  }
  double total() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

std::string build_manifest(const RunConfig& cfg, const std::vector<EvalReport>& reports,
                           const StageTimer& timer) {
  std::ostringstream os;
  os << "sparsewarn run manifest\n";
  os << "version = " << kVersion << "\n";
  os << "master_seed = " << cfg.seed << "\n";
  os << "fold_seeds = ";
  for (int f = 0; f < cfg.folds; ++f) os << (f ? "," : "") << cfg.seed + static_cast<std::uint64_t>(f);
  os << "\n\n[config]\n" << cfg.echo();
  os << "\n[stages]\n";
  for (const auto& [name, secs] : timer.stages) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", secs);
    os << name << " = " << buf << " s\n";
  }
  os << "\n[notes]\n";
  for (const EvalReport& r : reports)
    for (const std::string& note : r.notes) os << method_name(r.method) << ": " << note << "\n";
  os << "\n[warnings]\n";
  for (const EvalReport& r : reports)
    for (const std::string& w : r.warnings) os << method_name(r.method) << ": " << w << "\n";
  return os.str();
}

int run_eval_or_bench(const std::string& config_path, bool bench_mode) {
  const RunConfig cfg = parse_run_config(config_path);
  if (cfg.dataset_path.empty()) throw ConfigError("config: dataset path missing");
  if (bench_mode && cfg.methods.size() < 2)
    throw ConfigError("bench: config must list at least 2 methods");

  StageTimer timer;
  const FeatureDataset ds = load_features(cfg.dataset_path, cfg.format);
  timer.mark("load");

  std::vector<EvalReport> reports;
  std::vector<ModelBundle> models;
  for (Method method : cfg.methods) {
    reports.push_back(run_cv(cfg, method, ds, &models));
    timer.mark(std::string("cv-") + method_name(method));
  }

  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);
  const auto rows = benchmark_time(reports);
  write_file(out / "timing.csv", render_timing_csv(rows));
  if (!bench_mode) {
    write_file(out / "report.txt",
               render_text_report(reports, ds.class_names, cfg.positive_class));
    write_file(out / "metrics.csv", render_metrics_csv(reports));
  } else {
    std::cout << render_timing_csv(rows);
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    ModelBundle& bundle = models[i];
    bundle.info["version"] = kVersion;
    const std::string name =
        "model_" + bundle.info["method"] + "_fold" + bundle.info["fold"] + ".swrn";
    save_model_bundle((out / name).string(), bundle);
  }
  timer.mark("write");
  write_file(out / "manifest.txt", build_manifest(cfg, reports, timer));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparsewarn: compact-classifier screening toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto* eval_cmd = app.add_subcommand("eval", "run the cross-validated evaluation for a config");
  eval_cmd->add_option("config", config_path, "run configuration file")->required();

  std::string bench_config;
  auto* bench_cmd =
      app.add_subcommand("bench", "time test-set scoring for every configured method");
  bench_cmd->add_option("config", bench_config, "run configuration file")->required();

  auto* synth_cmd = app.add_subcommand("synth", "write a Gaussian-mixture feature file");
  int classes = 2, dim = 64;
  std::string per_class = "500";
  double separation = 3.0, sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out_path = "synth.csv", out_format = "csv";
  synth_cmd->add_option("--classes", classes, "number of classes");
  synth_cmd->add_option("--per-class", per_class,
                        "samples per class (one count or a comma list)");
  synth_cmd->add_option("--dim", dim, "feature dimension");
  synth_cmd->add_option("--sep", separation,
                        "margin from each class mean to the decision midpoint, in noise sigmas");
  synth_cmd->add_option("--sigma", sigma, "per-component noise scale");
  synth_cmd->add_option("--seed", seed, "generator seed");
  synth_cmd->add_option("--out", out_path, "output file");
  synth_cmd->add_option("--format", out_format, "csv or binary");

  std::string model_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "print a model container's manifest");
  inspect_cmd->add_option("model", model_path, "model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (eval_cmd->parsed()) return run_eval_or_bench(config_path, false);
    if (bench_cmd->parsed()) return run_eval_or_bench(bench_config, true);
    if (synth_cmd->parsed()) {
      SynthParams params;
      params.classes = classes;
      params.dim = dim;
      params.separation = separation;
      params.sigma = sigma;
      params.seed = seed;
      std::stringstream ss(per_class);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) params.per_class.push_back(std::stoll(item));
      FileFormat format;
      if (out_format == "csv") format = FileFormat::kCsv;
      else if (out_format == "binary") format = FileFormat::kBinary;
      else throw ConfigError("synth: format must be csv or binary");
      const FeatureDataset ds = synth_dataset(params);
      save_features(ds, out_path, format);
      std::cout << "wrote " << out_path << " (n=" << ds.num_samples() << " d=" << ds.dim()
                << " c=" << ds.num_classes() << ")\n";
      return kExitOk;
    }
    if (inspect_cmd->parsed()) {
      std::cout << inspect_model(model_path);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
