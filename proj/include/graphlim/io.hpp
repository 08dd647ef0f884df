#pragma once

#include "graphlim/graphons.hpp"
#include "graphlim/graphs.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

namespace graphlim::io {

/// 15 significant digits, '.' separator, independent of the C++ locale.
std::string format_number(double value);

/// Edge list: a header line "n m", then m lines "u v" with 1-based
/// vertices. Blank lines and lines starting with '#' are ignored.
SimpleGraph parse_edge_list(std::string_view text);
std::string serialize_edge_list(const SimpleGraph & g);

/// {"alpha":[...],"beta":[[...]]}
WeightedGraph parse_weighted_json(std::string_view text);
std::string serialize_weighted_json(const WeightedGraph & g);

/// {"weights":[...],"values":[[...]]}
StepGraphon parse_stepfunction_json(std::string_view text);
std::string serialize_stepfunction_json(const StepGraphon & w);

/// Comma-separated rows of numbers.
Eigen::MatrixXd parse_csv_matrix(std::string_view text);
std::string serialize_csv_matrix(const Eigen::MatrixXd & m);

std::string read_file(const std::filesystem::path & path);
void write_file(const std::filesystem::path & path, std::string_view contents);

using AnyGraph = std::variant<SimpleGraph, WeightedGraph>;

/// JSON objects parse as weighted graphs, anything else as an edge list.
AnyGraph parse_graph_text(std::string_view text);
AnyGraph parse_graph_file(const std::filesystem::path & path);
WeightedGraph as_weighted(const AnyGraph & g);

/// "constant:<p>", "half-graph", a stepfunction .json or a grid .csv.
Graphon load_graphon(const std::string & spec);

} // namespace graphlim::io
