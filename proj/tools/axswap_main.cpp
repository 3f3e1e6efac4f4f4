#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "axswap/apps.hpp"
#include "axswap/metrics.hpp"
#include "axswap/table_io.hpp"
#include "axswap/trace.hpp"
#include "axswap/tuner.hpp"
#include "model_spec.hpp"

namespace fs = std::filesystem;
using namespace axswap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;

struct ModelArgs {
  std::string model_spec;
  std::string table_path;

  void attach(CLI::App* cmd) {
    auto* m = cmd->add_option("--model", model_spec, "Model spec (exact:8u, truncb:8u:k=2, droppp:8u:mask=r.c,..)");
    auto* t = cmd->add_option("--table", table_path, "AXTT truth-table file");
    m->excludes(t);
    t->excludes(m);
  }

  MultiplierModel resolve() const {
    if (!table_path.empty()) return cli::parse_model_spec("table:" + table_path);
    if (!model_spec.empty()) return cli::parse_model_spec(model_spec);
    throw std::invalid_argument("one of --model or --table is required");
  }
};

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  f << content;
  if (!content.empty() && content.back() != '\n') f << '\n';
}

std::string format_pct(double pct) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f%%", pct);
  return buf;
}

// scores print to four decimals, reductions to two
std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string policy_label(const std::optional<SwapPolicy>& p) { return p ? p->describe() : "noswap"; }

// ---- tune -------------------------------------------------------------------

struct TuneArgs {
  ModelArgs model;
  std::string objective = "mae";
  std::string out_dir = "axswap-out";
  unsigned threads = 0;
};

int cmd_tune(const TuneArgs& args) {
  const MultiplierModel model = args.model.resolve();
  const auto objective = objective_from_name(args.objective);
  if (!objective || !objective_is_component(*objective))
    throw std::invalid_argument("objective must be one of mae, wce, are, mse, ep");
  const TuningResult result = tune_component(model, *objective, args.threads);
  write_file(fs::path(args.out_dir) / "tuning.json", result.to_json_string(2));
  write_file(fs::path(args.out_dir) / "tuning.csv", result.to_csv());
  char best_buf[64], noswap_buf[64];
  std::snprintf(best_buf, sizeof best_buf, "%.2f", result.best_metric);
  std::snprintf(noswap_buf, sizeof noswap_buf, "%.2f", result.noswap_metric);
  std::cout << "model " << model.describe() << " objective " << objective_name(*objective) << "\n"
            << "best policy " << policy_label(result.best_policy) << ": " << best_buf << " (reduction "
            << format_pct(result.reduction_pct()) << " vs noswap " << noswap_buf << ")\n";
  return kExitOk;
}

// ---- heatmap ----------------------------------------------------------------

struct HeatmapArgs {
  ModelArgs model;
  std::string mode = "noswap";
  std::string policy_spec;
  std::string out_prefix = "heatmap";
};

void write_heatmap_pgm(const std::vector<u64>& grid, u32 side, const fs::path& path) {
  GrayImage img = GrayImage::blank(static_cast<int>(side), static_cast<int>(side));
  const u64 max_err = *std::max_element(grid.begin(), grid.end());
  const double denom = max_err ? std::log2(1.0 + static_cast<double>(max_err)) : 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    img.pixels[i] = static_cast<u8>(std::lround(255.0 * std::log2(1.0 + static_cast<double>(grid[i])) / denom));
  write_pgm(img, path);
}

int cmd_heatmap(const HeatmapArgs& args) {
  const MultiplierModel model = args.model.resolve();
  HeatmapMode mode;
  std::optional<SwapPolicy> policy;
  if (args.mode == "noswap")
    mode = HeatmapMode::NoSwap;
  else if (args.mode == "oracle")
    mode = HeatmapMode::Oracle;
  else if (args.mode == "policy") {
    mode = HeatmapMode::Policy;
    if (args.policy_spec.empty()) throw std::invalid_argument("--mode policy requires --policy");
    policy = cli::parse_policy_spec(args.policy_spec);
  } else {
    throw std::invalid_argument("mode must be noswap, policy or oracle");
  }

  const auto grid = heatmap(model, mode, policy);
  const u32 side = static_cast<u32>(model.operand_count());
  std::ostringstream csv;
  for (u32 a = 0; a < side; ++a) {
    for (u32 b = 0; b < side; ++b) csv << grid[static_cast<std::size_t>(a) * side + b] << (b + 1 < side ? "," : "");
    csv << '\n';
  }
  write_file(fs::path(args.out_prefix + ".csv"), csv.str());
  write_heatmap_pgm(grid, side, fs::path(args.out_prefix + ".pgm"));
  std::cout << "wrote " << args.out_prefix << ".csv and " << args.out_prefix << ".pgm\n";
  return kExitOk;
}

// ---- dump-table -------------------------------------------------------------

struct DumpArgs {
  std::string model_spec;
  std::string out_path = "model.axtt";
};

int cmd_dump_table(const DumpArgs& args) {
  const MultiplierModel model = cli::parse_model_spec(args.model_spec);
  dump_truth_table(model, fs::path(args.out_path));
  std::cout << "wrote " << args.out_path << " (" << fs::file_size(args.out_path) << " bytes)\n";
  return kExitOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  ModelArgs model;
  std::string policy_spec;
  bool oracle = false;
  std::string trace_path;
  std::string slice;  // "begin:count"
  std::string out_path;
  bool csv = false;
  unsigned threads = 0;
};

int cmd_eval(const EvalArgs& args) {
  const MultiplierModel model = args.model.resolve();
  PairSource source = PairSource::full_space();
  if (!args.trace_path.empty()) {
    const OperandTrace trace = read_trace(fs::path(args.trace_path));
    if (trace.width != model.width() || trace.signedness != model.signedness())
      throw FormatError("trace width/signedness does not match the model");
    source = PairSource::pairs(trace.pairs);
  } else if (!args.slice.empty()) {
    const auto sep = args.slice.find(':');
    if (sep == std::string::npos) throw std::invalid_argument("--slice expects begin:count");
    source = PairSource::slice(std::stoull(args.slice.substr(0, sep)), std::stoull(args.slice.substr(sep + 1)));
  }

  ErrorReport report;
  if (args.oracle) {
    if (!args.policy_spec.empty()) throw std::invalid_argument("--oracle and --policy are exclusive");
    report = oracle_report(model, source, args.threads);
  } else {
    std::optional<SwapPolicy> policy;
    if (!args.policy_spec.empty()) policy = cli::parse_policy_spec(args.policy_spec);
    report = component_metrics(model, policy, source, args.threads);
  }

  const std::string text =
      args.csv ? ErrorReport::csv_header() + "\n" + report.to_csv_row() + "\n" : report.to_json_string(2);
  if (args.out_path.empty())
    std::cout << text << "\n";
  else
    write_file(fs::path(args.out_path), text);
  return kExitOk;
}

// ---- dataset ----------------------------------------------------------------

struct DatasetArgs {
  std::string kind = "train";
  u64 seed = 1;
  std::string out_dir = "dataset";
};

int cmd_dataset(const DatasetArgs& args) {
  if (args.kind != "train" && args.kind != "test") throw std::invalid_argument("kind must be train or test");
  const Dataset ds = generate_dataset(args.kind == "train" ? DatasetKind::Train : DatasetKind::Test, args.seed);
  write_dataset(ds, fs::path(args.out_dir));
  std::cout << "wrote " << args.out_dir << " (manifest hash " << dataset_manifest_hash(ds) << ")\n";
  return kExitOk;
}

// ---- shared application-side argument block ----------------------------------

struct AppArgs {
  std::string bench = "sobel";
  std::string mul_spec;
  std::array<std::string, 4> part_specs;  // optional per-part overrides
  std::string parts = "mdlo";
  std::string shift = "fidelity";

  void attach(CLI::App* cmd) {
    cmd->add_option("--bench", bench, "Benchmark: sobel, kmeans or fft")->required();
    cmd->add_option("--mul", mul_spec, "Sub-multiplier model spec or table:<path> (signed, width 16)")->required();
    cmd->add_option("--mul-hi", part_specs[0], "Override the HI part model");
    cmd->add_option("--mul-md1", part_specs[1], "Override the MD1 part model");
    cmd->add_option("--mul-md2", part_specs[2], "Override the MD2 part model");
    cmd->add_option("--mul-lo", part_specs[3], "Override the LO part model");
    cmd->add_option("--parts", parts, "Approximated parts: all, mdlo or custom:<HI,MD1,MD2,LO>");
    cmd->add_option("--shift", shift, "Low-half shift mode: fidelity or exact-fit");
  }

  BenchmarkId benchmark() const {
    const auto id = benchmark_from_name(bench);
    if (!id) throw std::invalid_argument("unknown benchmark '" + bench + "'");
    return *id;
  }

  WideMulConfig config() const {
    WideMulConfig cfg = cli::parse_wide_config(cli::parse_model_spec(mul_spec), parts, shift);
    for (std::size_t i = 0; i < part_specs.size(); ++i)
      if (!part_specs[i].empty()) cfg.part_models[i] = cli::parse_model_spec(part_specs[i]);
    cfg.validate();
    return cfg;
  }
};

Dataset resolve_dataset(const std::string& dir, DatasetKind kind, u64 seed) {
  if (!dir.empty()) return load_dataset(fs::path(dir));
  return generate_dataset(kind, seed);
}

// ---- trace ------------------------------------------------------------------

struct TraceArgs {
  AppArgs app;
  std::string policy_spec;
  bool oracle = false;
  std::string dataset_dir;
  u64 seed = 1;
  std::string out_path = "run.axtr";
};

int cmd_trace(const TraceArgs& args) {
  const WideMulConfig cfg = args.app.config();
  SwapDecision decision = NoSwapTag{};
  if (args.oracle)
    decision = OracleTag{};
  else if (!args.policy_spec.empty())
    decision = cli::parse_policy_spec(args.policy_spec);
  const Dataset ds = resolve_dataset(args.dataset_dir, DatasetKind::Train, args.seed);
  const OperandTrace trace = record_trace(args.app.benchmark(), ds, cfg, decision);
  write_trace(trace, fs::path(args.out_path));
  std::cout << "wrote " << args.out_path << " (" << trace.pairs.size() << " sub-multiplications)\n";
  return kExitOk;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
  AppArgs app;
  std::string train_dir;
  std::string test_dir;
  u64 seed = 1;
  std::string component_tuning;
  std::string out_dir = "bench-out";
  unsigned threads = 0;
};

int cmd_bench(const BenchArgs& args) {
  const BenchmarkId bench = args.app.benchmark();
  const WideMulConfig cfg = args.app.config();
  const ObjectiveId objective = benchmark_objective(bench);
  const bool higher = objective_higher_is_better(objective);

  if (args.component_tuning.empty())
    throw FormatError("missing component-tuning artifact: pass --component-tuning <tuning.json> from `tune`");
  std::ifstream ct(args.component_tuning);
  if (!ct) throw FormatError("cannot open component tuning artifact: " + args.component_tuning);
  const TuningResult component = TuningResult::from_json_string(
      std::string(std::istreambuf_iterator<char>(ct), std::istreambuf_iterator<char>()));
  if (component.best_policy && component.best_policy->bit_index >= cfg.half_width)
    throw FormatError("component policy bit index exceeds the configured half width");

  const Dataset train = resolve_dataset(args.train_dir, DatasetKind::Train, args.seed);
  const Dataset test = resolve_dataset(args.test_dir, DatasetKind::Test, args.seed);

  const double float_baseline = higher ? 1.0 : 0.0;  // reference scored against itself
  const double fxp_baseline = score_benchmark(bench, test, WideMulConfig::exact_baseline(cfg.half_width));
  const double noswap = score_benchmark(bench, test, cfg, NoSwapTag{});
  const SwapDecision comp_decision =
      component.best_policy ? SwapDecision{*component.best_policy} : SwapDecision{NoSwapTag{}};
  const double component_tuned = score_benchmark(bench, test, cfg, comp_decision);
  const TuningResult app_tuning = tune_application(bench, cfg, objective, train, args.threads);
  const SwapDecision app_decision =
      app_tuning.best_policy ? SwapDecision{*app_tuning.best_policy} : SwapDecision{NoSwapTag{}};
  const double application_tuned = score_benchmark(bench, test, cfg, app_decision);
  const double oracle = score_benchmark(bench, test, cfg, OracleTag{});

  const auto orientation = higher ? MetricOrientation::HigherBetter : MetricOrientation::LowerBetter;
  auto gain = [&](double value) {
    return gain_vs_noswap(std::vector<double>{value}, std::vector<double>{noswap}, orientation);
  };

  nlohmann::json j{
      {"benchmark", benchmark_name(bench)},
      {"objective", objective_name(objective)},
      {"half_width", cfg.half_width},
      {"parts", args.app.parts},
      {"shift_mode", args.app.shift},
      {"model", cfg.model_for(WidePart::LO).describe()},
      {"train", {{"kind", dataset_kind_name(train.kind)}, {"seed", train.seed}, {"manifest_hash", dataset_manifest_hash(train)}}},
      {"test", {{"kind", dataset_kind_name(test.kind)}, {"seed", test.seed}, {"manifest_hash", dataset_manifest_hash(test)}}},
      {"component_policy", policy_label(component.best_policy)},
      {"application_policy", policy_label(app_tuning.best_policy)},
      {"scores",
       {{"float_baseline", float_baseline},
        {"fxp_baseline", fxp_baseline},
        {"noswap", noswap},
        {"component_tuned", component_tuned},
        {"application_tuned", application_tuned},
        {"oracle", oracle}}},
      {"gains_vs_noswap",
       {{"component_tuned", gain(component_tuned)},
        {"application_tuned", gain(application_tuned)},
        {"oracle", gain(oracle)}}},
  };

  std::ostringstream csv;
  csv.precision(17);
  csv << "benchmark,objective,float_baseline,fxp_baseline,noswap,component_tuned,application_tuned,oracle,"
         "gain_component,gain_application,gain_oracle\n"
      << benchmark_name(bench) << ',' << objective_name(objective) << ',' << float_baseline << ',' << fxp_baseline
      << ',' << noswap << ',' << component_tuned << ',' << application_tuned << ',' << oracle << ','
      << gain(component_tuned) << ',' << gain(application_tuned) << ',' << gain(oracle) << '\n';

  write_file(fs::path(args.out_dir) / "report.json", j.dump(2));
  write_file(fs::path(args.out_dir) / "report.csv", csv.str());
  write_file(fs::path(args.out_dir) / "app_tuning.json", app_tuning.to_json_string(2));

  std::cout << benchmark_name(bench) << " " << objective_name(objective) << ": noswap " << format_score(noswap)
            << ", component-tuned " << format_score(component_tuned) << " ("
            << format_pct(100 * gain(component_tuned)) << "), application-tuned "
            << format_score(application_tuned) << " (" << format_pct(100 * gain(application_tuned))
            << "), oracle " << format_score(oracle) << "\n";
  return kExitOk;
}

// Reads "--config file" key=value pairs ('#' comments) and appends "--key value"
// for every key not already present on the command line, so explicit flags
// always win over archived configuration.
std::vector<std::string> apply_config_prepass(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].starts_with("--config="))
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream f(config_path);
  if (!f) throw FormatError("cannot open config file: " + config_path);
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(),
                                   [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
    if (given) continue;
    args.push_back(flag);
    if (value != "true") args.push_back(value);  // bare flags are written as key=true
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and tuning toolkit for operand swapping in non-commutative approximate multipliers"};
  app.require_subcommand(1);

  TuneArgs tune_args;
  auto* tune = app.add_subcommand("tune", "Exhaustive component-level policy search");
  tune_args.model.attach(tune);
  tune->add_option("--objective", tune_args.objective, "mae, wce, are, mse or ep");
  tune->add_option("--out", tune_args.out_dir, "Output directory");
  tune->add_option("--threads", tune_args.threads, "Worker threads (default: AXSWAP_THREADS or hardware)");

  HeatmapArgs heatmap_args;
  auto* hm = app.add_subcommand("heatmap", "Absolute-error grid as CSV and log-scaled PGM");
  heatmap_args.model.attach(hm);
  hm->add_option("--mode", heatmap_args.mode, "noswap, policy or oracle");
  hm->add_option("--policy", heatmap_args.policy_spec, "Policy A|B:<bit>:<trigger> for --mode policy");
  hm->add_option("--out", heatmap_args.out_prefix, "Output path prefix");

  DumpArgs dump_args;
  auto* dump = app.add_subcommand("dump-table", "Write a model's truth table as an AXTT file");
  dump->add_option("--model", dump_args.model_spec, "Model spec")->required();
  dump->add_option("--out", dump_args.out_path, "Output file");

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "Error metrics of a model/policy over a pair source");
  eval_args.model.attach(ev);
  ev->add_option("--policy", eval_args.policy_spec, "Policy A|B:<bit>:<trigger>");
  ev->add_flag("--oracle", eval_args.oracle, "Best-orientation bound instead of a fixed policy");
  ev->add_option("--trace", eval_args.trace_path, "Replay an AXTR operand trace");
  ev->add_option("--slice", eval_args.slice, "Contiguous slice begin:count of the full input space");
  ev->add_option("--out", eval_args.out_path, "Write the report here instead of stdout");
  ev->add_flag("--csv", eval_args.csv, "Emit CSV instead of JSON");
  ev->add_option("--threads", eval_args.threads, "Worker threads");

  DatasetArgs dataset_args;
  auto* ds = app.add_subcommand("dataset", "Materialize a deterministic benchmark dataset");
  ds->add_option("--kind", dataset_args.kind, "train or test");
  ds->add_option("--seed", dataset_args.seed, "Dataset seed");
  ds->add_option("--out", dataset_args.out_dir, "Output directory");

  TraceArgs trace_args;
  auto* tr = app.add_subcommand("trace", "Record the operand trace of a benchmark run");
  trace_args.app.attach(tr);
  tr->add_option("--policy", trace_args.policy_spec, "Policy applied during the traced run");
  tr->add_flag("--oracle", trace_args.oracle, "Trace an oracle-ordered run");
  tr->add_option("--dataset", trace_args.dataset_dir, "Dataset directory (default: generated train set)");
  tr->add_option("--seed", trace_args.seed, "Seed when generating the dataset");
  tr->add_option("--out", trace_args.out_path, "Output AXTR file");

  BenchArgs bench_args;
  auto* bn = app.add_subcommand("bench", "Run a benchmark across the swap variants and report scores");
  bench_args.app.attach(bn);
  bn->add_option("--train", bench_args.train_dir, "Training dataset directory (default: generated)");
  bn->add_option("--test", bench_args.test_dir, "Test dataset directory (default: generated)");
  bn->add_option("--seed", bench_args.seed, "Seed for generated datasets");
  bn->add_option("--component-tuning", bench_args.component_tuning, "tuning.json from a prior `tune` run");
  bn->add_option("--out", bench_args.out_dir, "Output directory");
  bn->add_option("--threads", bench_args.threads, "Worker threads");

  std::string config_path;  // consumed by the prepass; declared so parsing accepts it
  for (CLI::App* cmd : {tune, hm, dump, ev, ds, tr, bn})
    cmd->add_option("--config", config_path, "Read options from a key=value config file (flags override)");

  try {
    std::vector<std::string> args = apply_config_prepass(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
    if (tune->parsed()) return cmd_tune(tune_args);
    if (hm->parsed()) return cmd_heatmap(heatmap_args);
    if (dump->parsed()) return cmd_dump_table(dump_args);
    if (ev->parsed()) return cmd_eval(eval_args);
    if (ds->parsed()) return cmd_dataset(dataset_args);
    if (tr->parsed()) return cmd_trace(trace_args);
    if (bn->parsed()) return cmd_bench(bench_args);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
