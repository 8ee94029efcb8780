#include "richardson/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "richardson/field.hpp"

namespace richardson {

namespace {

std::uint32_t pow3(int n) {
  std::uint32_t p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

void validate_model(const GraphSpec& graph, const std::vector<std::uint8_t>& initial,
                    int max_vertices) {
  if (graph.vertex_count < 1 || graph.vertex_count > max_vertices) {
    throw CapacityError("exact computation supports 1.." + std::to_string(max_vertices) +
                        " vertices, got " + std::to_string(graph.vertex_count));
  }
  if (static_cast<int>(initial.size()) != graph.vertex_count) {
    throw InvalidInputError("initial assignment size must match the vertex count");
  }
  bool any = false;
  for (auto t : initial) {
    if (t > 2) throw InvalidInputError("initial types must be 0, 1 or 2");
    any = any || t != 0;
  }
  if (!any) throw InvalidInputError("at least one vertex must start infected");
}

}  // namespace

std::uint32_t pack_state(const std::vector<std::uint8_t>& types) {
  std::uint32_t code = 0;
  for (std::size_t v = types.size(); v-- > 0;) {
    code = code * 3 + types[v];
  }
  return code;
}

std::vector<std::uint8_t> unpack_state(std::uint32_t code, int vertex_count) {
  std::vector<std::uint8_t> types(static_cast<std::size_t>(vertex_count));
  for (int v = 0; v < vertex_count; ++v) {
    types[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(code % 3);
    code /= 3;
  }
  return types;
}

ExactResult exact_capture(const ExactModel& model, bool want_terminal_distribution) {
  validate_model(model.graph, model.initial, kMaxExactVertices);
  if (!(model.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  const int V = model.graph.vertex_count;
  const std::uint32_t states = pow3(V);
  if (want_terminal_distribution && V > 8) {
    throw CapacityError("terminal distribution supported for <= 8 vertices");
  }

  // prob[s] = probability that the jump chain visits state s. Valid because
  // each transition infects exactly one vertex, so states are visited in
  // increasing order of infected count and never twice.
  std::vector<double> prob(states, 0.0);
  prob[pack_state(model.initial)] = 1.0;

  // Bucket states by infected count for a topological sweep.
  std::vector<std::uint32_t> order(states);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint8_t> infected_count(states, 0);
  for (std::uint32_t s = 0; s < states; ++s) {
    std::uint32_t c = s;
    int k = 0;
    for (int v = 0; v < V; ++v) {
      if (c % 3 != 0) ++k;
      c /= 3;
    }
    infected_count[s] = static_cast<std::uint8_t>(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return infected_count[a] < infected_count[b];
  });

  ExactResult res;
  res.capture2.assign(static_cast<std::size_t>(V), 0.0);
  double terminal_mass = 0.0;

  std::vector<std::uint8_t> types(static_cast<std::size_t>(V));
  std::vector<std::uint32_t> digit(static_cast<std::size_t>(V));
  digit[0] = 1;
  for (int v = 1; v < V; ++v) digit[static_cast<std::size_t>(v)] = digit[static_cast<std::size_t>(v - 1)] * 3;

  for (std::uint32_t s : order) {
    double p = prob[s];
    if (p == 0.0) continue;
    std::uint32_t c = s;
    for (int v = 0; v < V; ++v) {
      types[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(c % 3);
      c /= 3;
    }

    // Flip rates of every uninfected vertex adjacent to an infection.
    double total_rate = 0.0;
    for (int v = 0; v < V; ++v) {
      if (types[static_cast<std::size_t>(v)] != 0) continue;
      int n1 = 0;
      int n2 = 0;
      for (auto [w, ei] : model.graph.adjacency[static_cast<std::size_t>(v)]) {
        (void)ei;
        n1 += types[static_cast<std::size_t>(w)] == 1;
        n2 += types[static_cast<std::size_t>(w)] == 2;
      }
      total_rate += n1 + model.lambda * n2;
    }

    if (total_rate == 0.0) {
      // Absorbing: no uninfected vertex touches an infection.
      terminal_mass += p;
      for (int v = 0; v < V; ++v) {
        if (types[static_cast<std::size_t>(v)] == 2) {
          res.capture2[static_cast<std::size_t>(v)] += p;
        }
      }
      if (want_terminal_distribution) {
        res.terminal_distribution.emplace_back(s, p);
      }
      continue;
    }

    res.expected_completion_time += p / total_rate;
    for (int v = 0; v < V; ++v) {
      if (types[static_cast<std::size_t>(v)] != 0) continue;
      int n1 = 0;
      int n2 = 0;
      for (auto [w, ei] : model.graph.adjacency[static_cast<std::size_t>(v)]) {
        (void)ei;
        n1 += types[static_cast<std::size_t>(w)] == 1;
        n2 += types[static_cast<std::size_t>(w)] == 2;
      }
      if (n1 > 0) {
        prob[s + digit[static_cast<std::size_t>(v)]] += p * (n1 / total_rate);
      }
      if (n2 > 0) {
        prob[s + 2 * digit[static_cast<std::size_t>(v)]] += p * (model.lambda * n2 / total_rate);
      }
    }
  }

  res.probability_flow_error = std::abs(1.0 - terminal_mass);
  return res;
}

Rational make_rational(long long num, long long den) {
  if (den == 0) throw InvalidInputError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

namespace {

Rational from_i128(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr __int128 kMax = std::numeric_limits<long long>::max();
  if (num > kMax || num < -kMax || den > kMax) {
    throw CapacityError("rational arithmetic overflow");
  }
  return Rational{static_cast<long long>(num), static_cast<long long>(den)};
}

}  // namespace

Rational rat_add(Rational a, Rational b) {
  return from_i128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
}

Rational rat_mul(Rational a, Rational b) {
  return from_i128(static_cast<__int128>(a.num) * b.num,
                   static_cast<__int128>(a.den) * b.den);
}

std::vector<Rational> exact_capture_rational(const GraphSpec& graph,
                                             const std::vector<std::uint8_t>& initial,
                                             long long lambda_num, long long lambda_den) {
  validate_model(graph, initial, kMaxRationalVertices);
  if (lambda_num <= 0 || lambda_den <= 0) {
    throw InvalidInputError("rational lambda must be positive");
  }
  const int V = graph.vertex_count;
  const std::uint32_t states = pow3(V);

  std::vector<Rational> prob(states, Rational{0, 1});
  prob[pack_state(initial)] = Rational{1, 1};

  std::vector<std::uint32_t> order(states);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint8_t> infected_count(states, 0);
  for (std::uint32_t s = 0; s < states; ++s) {
    std::uint32_t c = s;
    int k = 0;
    for (int v = 0; v < V; ++v) {
      if (c % 3 != 0) ++k;
      c /= 3;
    }
    infected_count[s] = static_cast<std::uint8_t>(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return infected_count[a] < infected_count[b];
  });

  std::vector<Rational> capture2(static_cast<std::size_t>(V), Rational{0, 1});
  std::vector<std::uint8_t> types(static_cast<std::size_t>(V));
  std::vector<std::uint32_t> digit(static_cast<std::size_t>(V));
  digit[0] = 1;
  for (int v = 1; v < V; ++v) digit[static_cast<std::size_t>(v)] = digit[static_cast<std::size_t>(v - 1)] * 3;

  for (std::uint32_t s : order) {
    Rational p = prob[s];
    if (p.num == 0) continue;
    std::uint32_t c = s;
    for (int v = 0; v < V; ++v) {
      types[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(c % 3);
      c /= 3;
    }

    // Scaled integer rates: vertex v flips to type 1 with weight den*n1 and
    // to type 2 with weight num*n2; the common 1/den cancels in the jump
    // probabilities.
    long long total_weight = 0;
    for (int v = 0; v < V; ++v) {
      if (types[static_cast<std::size_t>(v)] != 0) continue;
      long long n1 = 0;
      long long n2 = 0;
      for (auto [w, ei] : graph.adjacency[static_cast<std::size_t>(v)]) {
        (void)ei;
        n1 += types[static_cast<std::size_t>(w)] == 1;
        n2 += types[static_cast<std::size_t>(w)] == 2;
      }
      total_weight += lambda_den * n1 + lambda_num * n2;
    }

    if (total_weight == 0) {
      for (int v = 0; v < V; ++v) {
        if (types[static_cast<std::size_t>(v)] == 2) {
          capture2[static_cast<std::size_t>(v)] = rat_add(capture2[static_cast<std::size_t>(v)], p);
        }
      }
      continue;
    }

    for (int v = 0; v < V; ++v) {
      if (types[static_cast<std::size_t>(v)] != 0) continue;
      long long n1 = 0;
      long long n2 = 0;
      for (auto [w, ei] : graph.adjacency[static_cast<std::size_t>(v)]) {
        (void)ei;
        n1 += types[static_cast<std::size_t>(w)] == 1;
        n2 += types[static_cast<std::size_t>(w)] == 2;
      }
      if (n1 > 0) {
        Rational step = rat_mul(p, make_rational(lambda_den * n1, total_weight));
        auto& slot = prob[s + digit[static_cast<std::size_t>(v)]];
        slot = rat_add(slot, step);
      }
      if (n2 > 0) {
        Rational step = rat_mul(p, make_rational(lambda_num * n2, total_weight));
        auto& slot = prob[s + 2 * digit[static_cast<std::size_t>(v)]];
        slot = rat_add(slot, step);
      }
    }
  }
  return capture2;
}

OracleComparison exact_vs_engine(const ExactModel& model, int replicas, std::uint64_t seed) {
  if (replicas < 1) throw InvalidInputError("replicas must be >= 1");
  OracleComparison cmp;
  cmp.exact = exact_capture(model);
  cmp.replicas = replicas;
  const int V = model.graph.vertex_count;

  std::vector<std::int64_t> hits(static_cast<std::size_t>(V), 0);
  for (int r = 0; r < replicas; ++r) {
    GraphRunResult run =
        run_graph_two_type(model.graph, model.lambda, model.initial, derive_seed(seed, static_cast<std::uint64_t>(r)));
    for (int v = 0; v < V; ++v) {
      hits[static_cast<std::size_t>(v)] += run.final_type[static_cast<std::size_t>(v)] == 2;
    }
  }

  cmp.empirical2.resize(static_cast<std::size_t>(V));
  cmp.stderr2.resize(static_cast<std::size_t>(V));
  cmp.deviation_ses.resize(static_cast<std::size_t>(V));
  cmp.pass = true;
  for (int v = 0; v < V; ++v) {
    double p = cmp.exact.capture2[static_cast<std::size_t>(v)];
    double phat = static_cast<double>(hits[static_cast<std::size_t>(v)]) / replicas;
    double se = std::sqrt(p * (1.0 - p) / replicas);
    cmp.empirical2[static_cast<std::size_t>(v)] = phat;
    cmp.stderr2[static_cast<std::size_t>(v)] = se;
    double dev;
    if (se == 0.0) {
      dev = phat == p ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      dev = std::abs(phat - p) / se;
    }
    cmp.deviation_ses[static_cast<std::size_t>(v)] = dev;
    cmp.max_deviation_ses = std::max(cmp.max_deviation_ses, dev);
    if (dev > 3.0) cmp.pass = false;
  }
  return cmp;
}

}  // namespace richardson
