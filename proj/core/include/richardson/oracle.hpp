#ifndef RICHARDSON_ORACLE_HPP
#define RICHARDSON_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "richardson/graph.hpp"

namespace richardson {

// State-space bound for exact computation: 3^12 states.
inline constexpr int kMaxExactVertices = 12;
inline constexpr int kMaxRationalVertices = 6;

// The two-type dynamics on a small graph: type 1 flips uninfected neighbors
// at rate 1, type 2 at rate lambda; exact answers come from the embedded jump
// chain, which never revisits a state (the infected count only grows).
struct ExactModel {
  GraphSpec graph;
  double lambda = 1.0;
  std::vector<std::uint8_t> initial;  // 0/1/2 per vertex, at least one nonzero
};

struct ExactResult {
  std::vector<double> capture2;      // P(vertex ends type 2)
  double expected_completion_time = 0.0;
  // Terminal configurations (packed base-3 state, probability); filled only
  // when requested and V <= 8.
  std::vector<std::pair<std::uint32_t, double>> terminal_distribution;
  double probability_flow_error = 0.0;  // |1 - sum of terminal probabilities|
};

// Forward DP over states layered by infected count. Exact up to
// floating-point roundoff; the layering makes every state reachable at most
// once, so no linear solve is needed.
ExactResult exact_capture(const ExactModel& model, bool want_terminal_distribution = false);

// Base-3 packing helpers for the oracle state space.
std::uint32_t pack_state(const std::vector<std::uint8_t>& types);
std::vector<std::uint8_t> unpack_state(std::uint32_t code, int vertex_count);

// Exact fraction for golden tests (V <= 6, lambda = num/den).
struct Rational {
  long long num = 0;
  long long den = 1;

  bool operator==(const Rational&) const = default;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational make_rational(long long num, long long den);
Rational rat_add(Rational a, Rational b);
Rational rat_mul(Rational a, Rational b);

std::vector<Rational> exact_capture_rational(const GraphSpec& graph,
                                             const std::vector<std::uint8_t>& initial,
                                             long long lambda_num, long long lambda_den);

// Monte Carlo engine (graph mode) vs the exact DP.
struct OracleComparison {
  ExactResult exact;
  std::vector<double> empirical2;     // p-hat per vertex
  std::vector<double> stderr2;        // sqrt(p(1-p)/N) with the exact p
  std::vector<double> deviation_ses;  // |p-hat - p| in SE units; 0 where SE = 0 and equal
  double max_deviation_ses = 0.0;
  int replicas = 0;
  bool pass = false;  // every vertex within 3 SE
};

OracleComparison exact_vs_engine(const ExactModel& model, int replicas, std::uint64_t seed);

}  // namespace richardson

#endif
