#include "graphsys/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace graphsys {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.i, e.j, e.w}));
  return json{{"n", g.n()}, {"edges", edges}}.dump() + "\n";
}

WeightedGraph graph_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("graph JSON: ") + err.what());
  }
  if (!doc.contains("n") || !doc.contains("edges")) {
    throw std::invalid_argument("graph JSON needs \"n\" and \"edges\"");
  }
  std::vector<Edge> edges;
  for (const json& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("graph JSON edge must be [i, j, w]");
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return WeightedGraph(doc.at("n").get<int>(), std::move(edges));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_graph(const std::filesystem::path& path, const WeightedGraph& g) {
  write_text_file(path, graph_to_json(g));
}

WeightedGraph read_graph(const std::filesystem::path& path) {
  return graph_from_json(read_text_file(path));
}

std::string filter_to_json(const FilterSpec& spec) {
  json doc{{"kind", std::string(to_string(spec.kind))}};
  if (spec.kind == FilterKind::hop_localized) {
    doc["beta"] = static_cast<int>(spec.beta);
  } else {
    doc["beta"] = spec.beta;
  }
  return doc.dump();
}

FilterSpec filter_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("filter JSON: ") + err.what());
  }
  if (!doc.contains("kind") || !doc.contains("beta")) {
    throw std::invalid_argument("filter JSON needs \"kind\" and \"beta\"");
  }
  FilterSpec spec{parse_filter_kind(doc.at("kind").get<std::string>()), doc.at("beta").get<double>()};
  spec.validate();
  return spec;
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) comma = line.size();
      std::string cell(line.substr(start, comma - start));
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::invalid_argument("CSV: cannot parse number '" + cell + "'");
      }
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("CSV: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("CSV: no data");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  write_text_file(path, matrix_to_csv(m));
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  return matrix_from_csv(read_text_file(path));
}

std::string result_to_json(const Matrix& L_hat, double beta_hat, bool converged, int iterations,
                           bool scale_note, const std::optional<MetricReport>& metrics) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < L_hat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < L_hat.cols(); ++j) row.push_back(L_hat(i, j));
    rows.push_back(std::move(row));
  }
  json doc{{"L_hat", rows},
           {"beta_hat", beta_hat},
           {"converged", converged},
           {"iterations", iterations},
           {"scale_note", scale_note}};
  if (metrics) {
    doc["metrics"] = json{{"re", metrics->re},   {"fs", metrics->fs}, {"tp", metrics->tp},
                          {"fp", metrics->fp},   {"fn", metrics->fn},
                          {"alpha", metrics->alpha_used}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace graphsys
