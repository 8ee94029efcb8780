#ifndef RICHARDSON_GRAPH_HPP
#define RICHARDSON_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "richardson/errors.hpp"

namespace richardson {

// A small undirected graph given by an explicit edge list. This is the
// engine's validation surface: the same event-queue growth dynamics run on
// arbitrary finite graphs so they can be checked against exact computation.
struct GraphSpec {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // canonical u < v, deduplicated

  // adjacency[v] = list of (neighbor, edge index)
  std::vector<std::vector<std::pair<int, int>>> adjacency;

  void build_adjacency();
};

// Text format: first line "V E", then E lines "u v" (0-based vertex ids).
// Parse errors name the offending line.
GraphSpec parse_graph(const std::string& text);
std::string format_graph(const GraphSpec& g);

GraphSpec make_path_graph(int n);
GraphSpec make_cycle_graph(int n);
GraphSpec make_grid_graph(int rows, int cols);

// One realization of the two-type competition on the graph, independent
// channels: type 1 spreads at rate 1 on channel 1, type 2 at rate `lambda`
// on channel 2. `initial[v]` in {0,1,2}. Ties broken by (type 1 first, then
// target id, then source id).
struct GraphRunResult {
  std::vector<std::uint8_t> final_type;  // 0 = never infected (unreachable)
  std::vector<double> infection_time;    // +inf where never infected
  double completion_time = 0.0;          // last infection time
};

GraphRunResult run_graph_two_type(const GraphSpec& g, double lambda,
                                  const std::vector<std::uint8_t>& initial,
                                  std::uint64_t seed);

}  // namespace richardson

#endif
