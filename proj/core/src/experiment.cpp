#include "graphsys/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "graphsys/io.hpp"
#include "graphsys/rng.hpp"
#include "graphsys/signal.hpp"

namespace graphsys {

using nlohmann::json;

namespace {

template <typename T>
void read_optional(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

GraphModelSpec parse_graph_spec(const json& g) {
  GraphModelSpec spec;
  if (g.contains("kind")) spec.kind = parse_graph_kind(g.at("kind").get<std::string>());
  read_optional(g, "n", spec.n);
  read_optional(g, "p", spec.p);
  read_optional(g, "p1", spec.p1);
  read_optional(g, "p2", spec.p2);
  read_optional(g, "module_count", spec.module_count);
  read_optional(g, "weight_low", spec.weight_low);
  read_optional(g, "weight_high", spec.weight_high);
  read_optional(g, "seed", spec.seed);
  return spec;
}

FilterSpec parse_filter(const json& f) { return filter_from_json(f.dump()); }

void parse_gsi_options(const json& g, GsiOptions& opts) {
  read_optional(g, "max_outer_iters", opts.max_outer_iters);
  read_optional(g, "tol_rel_change", opts.tol_rel_change);
  read_optional(g, "hop_min", opts.hop_min);
  read_optional(g, "hop_max", opts.hop_max);
  read_optional(g, "eps_zero", opts.eps_zero);
  read_optional(g, "kkt_tol", opts.solver.kkt_tol);
  read_optional(g, "max_sweeps", opts.solver.max_sweeps);
  if (g.contains("beta_init")) opts.beta_init = g.at("beta_init").get<double>();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct Cell {
  std::size_t filter_index = 0;
  int trial = 0;
  int k = 0;  // 0: exact covariance
};

std::vector<ResultRow> run_cell(const ExperimentConfig& config, const Cell& cell) {
  const FilterSpec& filter = config.filters[cell.filter_index];
  const std::uint64_t seed = trial_seed(config.graph.seed, cell.trial);
  GraphModelSpec graph_spec = config.graph;
  graph_spec.seed = seed;

  std::vector<ResultRow> rows;
  auto base_row = [&](Method m) {
    ResultRow row;
    row.method = std::string(to_string(m));
    row.graph_kind = std::string(to_string(config.graph.kind));
    row.filter_kind = std::string(to_string(filter.kind));
    row.beta_true = filter.beta;
    row.n = config.graph.n;
    row.k = cell.k;
    row.trial_seed = seed;
    row.alpha = config.alpha_mode == AlphaMode::fixed ? config.alpha : 0.0;
    row.beta_hat = std::nan("");
    row.re = std::nan("");
    row.fs = std::nan("");
    return row;
  };

  Matrix covariance;
  std::optional<CglMatrix> truth;
  try {
    truth = build_cgl(generate_graph(graph_spec));
    const Matrix sigma = apply_filter(filter, *truth, config.gsi.eps_zero);
    covariance = cell.k == 0
                     ? sigma
                     : sample_covariance(sample_signals(
                           sigma, cell.k, substream_seed(seed, static_cast<std::uint64_t>(cell.k))));
  } catch (const std::exception& err) {
    std::cerr << "sweep: trial " << cell.trial << " setup failed: " << err.what() << "\n";
    for (Method m : config.methods) rows.push_back(base_row(m));
    return rows;
  }

  std::vector<double> alphas{config.alpha};
  if (config.alpha_mode == AlphaMode::grid) alphas = alpha_grid(covariance, config.graph.n, cell.k);

  for (Method m : config.methods) {
    ResultRow row = base_row(m);
    const auto start = std::chrono::steady_clock::now();
    try {
      TrialInput input{covariance, cell.k, *truth, m, filter, config.gsi, config.edge_eps};
      const SweepOutcome out = best_alpha_sweep(input, alphas);
      row.alpha = out.metrics.alpha_used;
      row.beta_hat = out.beta_hat;
      row.re = out.metrics.re;
      row.fs = out.metrics.fs;
    } catch (const std::exception& err) {
      std::cerr << "sweep: " << row.method << " failed on trial " << cell.trial << " (k = " << cell.k
                << "): " << err.what() << "\n";
    }
    if (config.record_wall_time) row.wall_ms = elapsed_ms(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void mean_and_stderr(const std::vector<double>& xs, double& mean, double& err) {
  mean = 0.0;
  err = 0.0;
  if (xs.empty()) {
    mean = std::nan("");
    return;
  }
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  err = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
}

std::string ratio_label(const SummaryRow& s) {
  if (s.k == 0) return "exact";
  return format_double(static_cast<double>(s.k) / s.n);
}

}  // namespace

void ExperimentConfig::validate() const {
  graph.validate();
  if (filters.empty()) throw std::invalid_argument("config needs at least one filter");
  for (const FilterSpec& f : filters) f.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!exact_covariance) {
    if (k_over_n.empty()) throw std::invalid_argument("k_over_n must not be empty");
    for (double r : k_over_n) {
      if (!(r > 0.0)) throw std::invalid_argument("k_over_n ratios must be positive");
    }
  }
  if (exact_covariance && alpha_mode == AlphaMode::grid) {
    throw std::invalid_argument("exact_covariance runs need alpha_mode \"fixed\" (the grid depends on k)");
  }
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (!(edge_eps > 0.0)) throw std::invalid_argument("edge_eps must be positive");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  gsi.validate();
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config JSON: ") + err.what());
  }
  ExperimentConfig config;
  try {
    if (doc.contains("graph")) config.graph = parse_graph_spec(doc.at("graph"));
    if (doc.contains("filter")) {
      const json& f = doc.at("filter");
      if (f.is_array()) {
        for (const json& item : f) config.filters.push_back(parse_filter(item));
      } else {
        config.filters.push_back(parse_filter(f));
      }
    }
    read_optional(doc, "k_over_n", config.k_over_n);
    read_optional(doc, "trials", config.trials);
    if (doc.contains("alpha_mode")) {
      const auto mode = doc.at("alpha_mode").get<std::string>();
      if (mode == "grid") {
        config.alpha_mode = AlphaMode::grid;
      } else if (mode == "fixed") {
        config.alpha_mode = AlphaMode::fixed;
      } else {
        throw std::invalid_argument("alpha_mode must be \"grid\" or \"fixed\"");
      }
    }
    read_optional(doc, "alpha", config.alpha);
    if (doc.contains("methods")) {
      config.methods.clear();
      for (const json& m : doc.at("methods")) config.methods.push_back(parse_method(m.get<std::string>()));
    }
    read_optional(doc, "exact_covariance", config.exact_covariance);
    read_optional(doc, "record_wall_time", config.record_wall_time);
    read_optional(doc, "edge_eps", config.edge_eps);
    read_optional(doc, "threads", config.threads);
    read_optional(doc, "output_dir", config.output_dir);
    if (doc.contains("gsi")) parse_gsi_options(doc.at("gsi"), config.gsi);
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("config JSON: ") + err.what());
  }
  config.validate();
  return config;
}

std::uint64_t trial_seed(std::uint64_t root_seed, int trial) {
  return substream_seed(root_seed, static_cast<std::uint64_t>(trial));
}

int samples_for_ratio(double k_over_n, int n) {
  return std::max(1, static_cast<int>(std::lround(k_over_n * n)));
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (std::size_t f = 0; f < config.filters.size(); ++f) {
    for (int t = 0; t < config.trials; ++t) {
      if (config.exact_covariance) {
        cells.push_back({f, t, 0});
        continue;
      }
      for (double ratio : config.k_over_n) {
        cells.push_back({f, t, samples_for_ratio(ratio, config.graph.n)});
      }
    }
  }

  std::vector<std::vector<ResultRow>> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = run_cell(config, cells[i]);
  };
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  for (auto& cell_rows : results) {
    for (ResultRow& r : cell_rows) rows.push_back(std::move(r));
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.method + ',' + r.graph_kind + ',' + r.filter_kind + ',' + format_double(r.beta_true) + ',' +
           format_double(r.beta_hat) + ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.trial_seed) + ',' + format_double(r.alpha) + ',' + format_double(r.re) + ',' +
           format_double(r.fs) + ',' + format_double(r.wall_ms) + '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw std::invalid_argument("results CSV has an unexpected header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw std::invalid_argument("results CSV row has " + std::to_string(f.size()) + " fields");
    try {
      ResultRow r;
      r.method = f[0];
      r.graph_kind = f[1];
      r.filter_kind = f[2];
      r.beta_true = std::stod(f[3]);
      r.beta_hat = std::stod(f[4]);
      r.n = std::stoi(f[5]);
      r.k = std::stoi(f[6]);
      r.trial_seed = std::stoull(f[7]);
      r.alpha = std::stod(f[8]);
      r.re = std::stod(f[9]);
      r.fs = std::stod(f[10]);
      r.wall_ms = std::stod(f[11]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("results CSV: malformed row '" + line + "'");
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::string, double, int, int>;
  std::map<Key, std::size_t> index;
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> res;
  std::vector<std::vector<double>> fss;
  for (const ResultRow& r : rows) {
    const Key key{r.method, r.graph_kind, r.filter_kind, r.beta_true, r.n, r.k};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      SummaryRow s;
      s.method = r.method;
      s.graph_kind = r.graph_kind;
      s.filter_kind = r.filter_kind;
      s.beta_true = r.beta_true;
      s.n = r.n;
      s.k = r.k;
      out.push_back(s);
      res.emplace_back();
      fss.emplace_back();
    }
    if (std::isfinite(r.re) && std::isfinite(r.fs)) {
      res[it->second].push_back(r.re);
      fss[it->second].push_back(r.fs);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].count = static_cast<int>(res[i].size());
    mean_and_stderr(res[i], out[i].mean_re, out[i].stderr_re);
    mean_and_stderr(fss[i], out[i].mean_fs, out[i].stderr_fs);
  }
  return out;
}

std::string summary_table(const std::vector<SummaryRow>& summary) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-12s %-19s %6s %7s %6s %10s %10s %8s %8s\n", "method", "graph",
                "filter", "beta", "k/n", "count", "mean_re", "se_re", "mean_fs", "se_fs");
  out += line;
  for (const SummaryRow& s : summary) {
    std::snprintf(line, sizeof line, "%-16s %-12s %-19s %6.3g %7s %6d %10.4g %10.2g %8.4f %8.4f\n",
                  s.method.c_str(), s.graph_kind.c_str(), s.filter_kind.c_str(), s.beta_true,
                  ratio_label(s).c_str(), s.count, s.mean_re, s.stderr_re, s.mean_fs, s.stderr_fs);
    out += line;
  }
  return out;
}

std::string series_csv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "method,graph_kind,filter_kind,beta_true,k_over_n,mean_re,stderr_re,mean_fs,stderr_fs,trials\n";
  for (const SummaryRow& s : summary) {
    const double ratio = s.k == 0 ? 0.0 : static_cast<double>(s.k) / s.n;
    out += s.method + ',' + s.graph_kind + ',' + s.filter_kind + ',' + format_double(s.beta_true) + ',' +
           format_double(ratio) + ',' + format_double(s.mean_re) + ',' + format_double(s.stderr_re) + ',' +
           format_double(s.mean_fs) + ',' + format_double(s.stderr_fs) + ',' + std::to_string(s.count) + '\n';
  }
  return out;
}

}  // namespace graphsys
