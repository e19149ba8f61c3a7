#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "graphsys/cgl.hpp"
#include "graphsys/evaluation.hpp"
#include "graphsys/experiment.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/identify.hpp"
#include "graphsys/io.hpp"
#include "graphsys/signal.hpp"

namespace graphsys::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
auto usage_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    write_text_file(path, text);
  }
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string method;
  std::string filter;
  std::optional<double> beta;
  std::string alpha;
  std::string graph;
  std::optional<int> k;
  std::string signals;
  std::string covariance;
  std::string truth;
  std::string results;
};

ExperimentConfig load_config(const Options& o) {
  ExperimentConfig cfg = parse_experiment_config(read_text_file(o.config));
  if (o.seed) cfg.graph.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = load_config(o);
  fs::create_directories(cfg.output_dir);
  for (int t = 0; t < cfg.trials; ++t) {
    GraphModelSpec spec = cfg.graph;
    spec.seed = trial_seed(cfg.graph.seed, t);
    char name[32];
    std::snprintf(name, sizeof name, "graph_%03d.json", t);
    const fs::path path = fs::path(cfg.output_dir) / name;
    write_graph(path, generate_graph(spec));
    out << path.string() << '\n';
  }
  return kExitOk;
}

FilterSpec filter_from_options(const Options& o) {
  if (o.filter.empty()) throw UsageError("--filter is required");
  const FilterKind kind = usage_guard([&] { return parse_filter_kind(o.filter); });
  const FilterSpec spec{kind, o.beta.value_or(1.0)};
  usage_guard([&] {
    spec.validate();
    return 0;
  });
  return spec;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const FilterSpec spec = filter_from_options(o);
  if (!o.k) throw UsageError("--k is required");
  if (*o.k < 1) throw UsageError("--k must be >= 1");
  const CglMatrix l = build_cgl(read_graph(o.graph));
  const SignalBatch batch = sample_signals(apply_filter(spec, l), *o.k, o.seed.value_or(0));
  emit(matrix_to_csv(batch.data), o.out, out);
  return kExitOk;
}

int cmd_identify(const Options& o, std::ostream& out) {
  if (o.signals.empty() == o.covariance.empty()) {
    throw UsageError("exactly one of --signals and --covariance is required");
  }
  const Method method = usage_guard([&] { return parse_method(o.method.empty() ? "gsi" : o.method); });
  if (method != Method::cgl_noprefilter && o.filter.empty()) throw UsageError("--filter is required");
  const FilterSpec filter = method == Method::cgl_noprefilter && o.filter.empty()
                                ? FilterSpec{FilterKind::hop_localized, 1.0}
                                : filter_from_options(o);
  if (method == Method::ipf && !o.beta) throw UsageError("--beta is required for ipf");
  const bool grid = o.alpha == "grid";
  double alpha = 0.0;
  if (!grid && !o.alpha.empty()) {
    try {
      alpha = std::stod(o.alpha);
    } catch (const std::exception&) {
      throw UsageError("--alpha must be a number or 'grid'");
    }
    if (!(alpha >= 0.0)) throw UsageError("--alpha must be >= 0");
  }
  if (grid && o.truth.empty()) throw UsageError("--alpha grid needs --truth to select alpha");

  int k = 0;
  Matrix S;
  if (!o.signals.empty()) {
    const SignalBatch batch{read_matrix_csv(o.signals)};
    k = batch.k();
    S = sample_covariance(batch);
  } else {
    S = read_matrix_csv(o.covariance);
  }
  std::optional<CglMatrix> truth;
  if (!o.truth.empty()) truth = build_cgl(read_graph(o.truth));
  if (truth && truth->n() != S.rows()) throw std::invalid_argument("--truth size does not match the data");

  GsiOptions opts;
  opts.filter_kind = filter.kind;
  if (o.beta) opts.beta_init = *o.beta;

  if (grid) {
    const std::vector<double> alphas = k > 0 ? alpha_grid(S, static_cast<int>(S.rows()), k) : std::vector<double>{0.0};
    const SweepOutcome best = best_alpha_sweep(TrialInput{S, k, *truth, method, filter, opts}, alphas);
    alpha = best.metrics.alpha_used;
  }
  opts.alpha = alpha;

  Matrix l_hat;
  double beta_hat = std::nan("");
  bool converged = true;
  int iterations = 0;
  bool scale_note = false;
  if (method == Method::gsi) {
    const GsiResult r = identify(S, opts);
    l_hat = r.L_hat.matrix();
    beta_hat = r.beta_hat;
    converged = r.converged;
    iterations = r.iterations();
    scale_note = r.scale_note;
  } else if (method == Method::cgl_noprefilter) {
    const CglEstimate est = estimate_cgl(CglProblem{S, alpha, std::nullopt});
    l_hat = est.laplacian.matrix();
    converged = est.report.converged;
    iterations = est.report.iterations;
  } else {
    l_hat = baseline_ipf(S, filter, opts.eps_zero);
    beta_hat = filter.beta;
  }
  std::optional<MetricReport> metrics;
  if (truth) metrics = score_estimate(l_hat, *truth, alpha);
  emit(result_to_json(l_hat, beta_hat, converged, iterations, scale_note, metrics), o.out, out);
  return kExitOk;
}

void write_reports(const std::vector<ResultRow>& rows, const std::string& dir, std::ostream& out) {
  const std::vector<SummaryRow> summary = summarize(rows);
  const std::string table = summary_table(summary);
  if (!dir.empty()) {
    fs::create_directories(dir);
    write_text_file(fs::path(dir) / "summary.txt", table);
    write_text_file(fs::path(dir) / "series.csv", series_csv(summary));
  }
  out << table;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  ExperimentConfig cfg = load_config(o);
  if (!o.method.empty()) cfg.methods = {usage_guard([&] { return parse_method(o.method); })};
  if (!o.filter.empty()) cfg.filters = {filter_from_options(o)};
  if (o.alpha == "grid") {
    cfg.alpha_mode = AlphaMode::grid;
  } else if (!o.alpha.empty()) {
    try {
      cfg.alpha = std::stod(o.alpha);
    } catch (const std::exception&) {
      throw UsageError("--alpha must be a number or 'grid'");
    }
    cfg.alpha_mode = AlphaMode::fixed;
  }
  usage_guard([&] {
    cfg.validate();
    return 0;
  });
  const std::vector<ResultRow> rows = run_sweep(cfg);
  fs::create_directories(cfg.output_dir);
  write_text_file(fs::path(cfg.output_dir) / "results.csv", rows_to_csv(rows));
  write_reports(rows, cfg.output_dir, out);
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  write_reports(rows_from_csv(read_text_file(o.results)), o.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn a weighted graph and a graph filter from signals", "graphsys"};
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "Write ground-truth graphs for every trial of a config");
  generate->add_option("--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--seed", o.seed, "Root seed (overrides graph.seed)");
  generate->add_option("--out", o.out, "Output directory (overrides output_dir)");

  auto* sample = app.add_subcommand("sample", "Draw k signals from N(0, h(L)) for a graph file");
  sample->add_option("--graph", o.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  sample->add_option("--filter", o.filter, "Filter kind");
  sample->add_option("--beta", o.beta, "Filter parameter (default 1)");
  sample->add_option("--k", o.k, "Number of signals");
  sample->add_option("--seed", o.seed, "Sampling seed (default 0)");
  sample->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* ident = app.add_subcommand("identify", "Estimate a graph (and filter parameter) from data");
  ident->add_option("--signals", o.signals, "Signals CSV, one signal per row")->check(CLI::ExistingFile);
  ident->add_option("--covariance", o.covariance, "Covariance CSV")->check(CLI::ExistingFile);
  ident->add_option("--method", o.method, "gsi | cgl_noprefilter | ipf (default gsi)");
  ident->add_option("--filter", o.filter, "Filter kind");
  ident->add_option("--beta", o.beta, "Filter parameter (initial value for gsi)");
  ident->add_option("--alpha", o.alpha, "Regularization weight, or 'grid' (needs --truth)");
  ident->add_option("--truth", o.truth, "Ground-truth graph JSON for metrics")->check(CLI::ExistingFile);
  ident->add_option("--out", o.out, "Output JSON (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep and write results.csv");
  sweep->add_option("--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--seed", o.seed, "Root seed (overrides graph.seed)");
  sweep->add_option("--out", o.out, "Output directory (overrides output_dir)");
  sweep->add_option("--method", o.method, "Run only this method");
  sweep->add_option("--filter", o.filter, "Run only this filter kind");
  sweep->add_option("--beta", o.beta, "Filter parameter for --filter");
  sweep->add_option("--alpha", o.alpha, "Fixed regularization weight, or 'grid'");

  auto* report = app.add_subcommand("report", "Summarize a results CSV");
  report->add_option("--results", o.results, "results.csv from sweep")->required()->check(CLI::ExistingFile);
  report->add_option("--out", o.out, "Directory for summary.txt and series.csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run 'graphsys --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
    if (ident->parsed()) return cmd_identify(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    return cmd_report(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace graphsys::cli
