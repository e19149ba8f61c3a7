#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "graphsys/evaluation.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/identify.hpp"
#include "graphsys/types.hpp"

namespace graphsys {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// {"n": <int>, "edges": [[i, j, w], ...]} with 0-based i < j.
std::string graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(std::string_view text);

void write_graph(const std::filesystem::path& path, const WeightedGraph& g);
WeightedGraph read_graph(const std::filesystem::path& path);

/// {"kind": "<name>", "beta": <number>}
std::string filter_to_json(const FilterSpec& spec);
FilterSpec filter_from_json(std::string_view text);

/// Dense matrix as CSV: one row per line, no header.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(std::string_view text);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Identification result as JSON: L_hat (row-major nested arrays), beta_hat,
/// converged, iterations, scale_note, plus a "metrics" object when given.
std::string result_to_json(const Matrix& L_hat, double beta_hat, bool converged, int iterations,
                           bool scale_note, const std::optional<MetricReport>& metrics);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace graphsys
