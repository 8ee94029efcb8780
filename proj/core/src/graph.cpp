#include "richardson/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "richardson/field.hpp"

namespace richardson {

void GraphSpec::build_adjacency() {
  adjacency.assign(static_cast<std::size_t>(vertex_count), {});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    adjacency[static_cast<std::size_t>(u)].emplace_back(v, static_cast<int>(i));
    adjacency[static_cast<std::size_t>(v)].emplace_back(u, static_cast<int>(i));
  }
}

GraphSpec parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw InvalidInputError("graph text is empty");
  GraphSpec g;
  long edge_count = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> g.vertex_count >> edge_count)) {
      throw InvalidInputError("graph line " + std::to_string(line_no) +
                              ": expected \"V E\" header");
    }
  }
  if (g.vertex_count < 1) {
    throw InvalidInputError("graph must have at least one vertex");
  }
  for (long i = 0; i < edge_count; ++i) {
    if (!next_line()) {
      throw InvalidInputError("graph ends after " + std::to_string(i) + " of " +
                              std::to_string(edge_count) + " edges");
    }
    std::istringstream ls(line);
    int u = 0;
    int v = 0;
    if (!(ls >> u >> v)) {
      throw InvalidInputError("graph line " + std::to_string(line_no) +
                              ": expected \"u v\"");
    }
    if (u < 0 || v < 0 || u >= g.vertex_count || v >= g.vertex_count || u == v) {
      throw InvalidInputError("graph line " + std::to_string(line_no) +
                              ": invalid edge " + std::to_string(u) + " " + std::to_string(v));
    }
    if (u > v) std::swap(u, v);
    g.edges.emplace_back(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.build_adjacency();
  return g;
}

std::string format_graph(const GraphSpec& g) {
  std::string out = std::to_string(g.vertex_count) + " " + std::to_string(g.edges.size()) + "\n";
  for (auto [u, v] : g.edges) {
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
  }
  return out;
}

GraphSpec make_path_graph(int n) {
  if (n < 2) throw InvalidInputError("path graph needs >= 2 vertices");
  GraphSpec g;
  g.vertex_count = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  g.build_adjacency();
  return g;
}

GraphSpec make_cycle_graph(int n) {
  if (n < 3) throw InvalidInputError("cycle graph needs >= 3 vertices");
  GraphSpec g;
  g.vertex_count = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  g.edges.emplace_back(0, n - 1);
  std::sort(g.edges.begin(), g.edges.end());
  g.build_adjacency();
  return g;
}

GraphSpec make_grid_graph(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw InvalidInputError("grid graph needs >= 2 vertices");
  }
  GraphSpec g;
  g.vertex_count = rows * cols;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.build_adjacency();
  return g;
}

namespace {

// Edge passage value on the graph: same stateless construction as the lattice
// field, keyed by the canonical endpoint pair and the channel.
double graph_sample(std::uint64_t seed, int u, int v, Channel ch) {
  std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(u));
  h = mix64(h ^ static_cast<std::uint64_t>(v));
  h = mix64(h ^ (0x300ULL + static_cast<std::uint64_t>(ch)));
  return quantize_sample(-std::log(uniform_from_bits(h)));
}

struct GraphEvent {
  double t;
  std::int32_t target;
  std::int32_t source;
  std::uint8_t type;

  bool operator>(const GraphEvent& o) const {
    if (t != o.t) return t > o.t;
    if (type != o.type) return type > o.type;
    if (target != o.target) return target > o.target;
    return source > o.source;
  }
};

}  // namespace

GraphRunResult run_graph_two_type(const GraphSpec& g, double lambda,
                                  const std::vector<std::uint8_t>& initial,
                                  std::uint64_t seed) {
  if (!(lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  if (static_cast<int>(initial.size()) != g.vertex_count) {
    throw InvalidInputError("initial assignment size must match the vertex count");
  }

  GraphRunResult res;
  res.final_type.assign(initial.begin(), initial.end());
  res.infection_time.assign(static_cast<std::size_t>(g.vertex_count),
                            std::numeric_limits<double>::infinity());

  std::priority_queue<GraphEvent, std::vector<GraphEvent>, std::greater<GraphEvent>> queue;
  bool any = false;
  auto push_from = [&](int v) {
    int type = res.final_type[static_cast<std::size_t>(v)];
    double rate = type == 1 ? 1.0 : lambda;
    Channel ch = type == 1 ? Channel::kType1 : Channel::kType2;
    double t0 = res.infection_time[static_cast<std::size_t>(v)];
    for (auto [w, ei] : g.adjacency[static_cast<std::size_t>(v)]) {
      (void)ei;
      if (res.final_type[static_cast<std::size_t>(w)] != 0) continue;
      auto [a, b] = std::minmax(v, w);
      double dt = graph_sample(seed, a, b, ch) / rate;
      queue.push(GraphEvent{t0 + dt, w, v, static_cast<std::uint8_t>(type)});
    }
  };

  for (int v = 0; v < g.vertex_count; ++v) {
    auto type = initial[static_cast<std::size_t>(v)];
    if (type > 2) throw InvalidInputError("initial types must be 0, 1 or 2");
    if (type != 0) {
      res.infection_time[static_cast<std::size_t>(v)] = 0.0;
      any = true;
    }
  }
  if (!any) throw InvalidInputError("at least one vertex must start infected");
  for (int v = 0; v < g.vertex_count; ++v) {
    if (initial[static_cast<std::size_t>(v)] != 0) push_from(v);
  }

  while (!queue.empty()) {
    GraphEvent e = queue.top();
    queue.pop();
    if (res.final_type[static_cast<std::size_t>(e.target)] != 0) continue;
    res.final_type[static_cast<std::size_t>(e.target)] = e.type;
    res.infection_time[static_cast<std::size_t>(e.target)] = e.t;
    res.completion_time = e.t;
    push_from(e.target);
  }
  return res;
}

}  // namespace richardson
