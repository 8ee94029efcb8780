#ifndef RICHARDSON_FIELD_HPP
#define RICHARDSON_FIELD_HPP

#include <cstdint>
#include <unordered_map>

#include "richardson/lattice.hpp"

namespace richardson {

// Which passage-time table an edge value is drawn from. One-type runs and
// two-type runs with shared times read kShared; two-type runs with
// independent times read kType1/kType2.
enum class Channel : std::uint8_t { kShared = 0, kType1 = 1, kType2 = 2 };

enum class ChannelMode : std::uint8_t { kShared, kIndependent };

bool channel_allowed(ChannelMode mode, Channel ch);

// Full description of one random passage-time realization. Two FieldSpecs
// with equal fields produce bitwise-identical samples in any call order.
struct FieldSpec {
  std::uint64_t master_seed = 0;
  int dim = 2;
  ChannelMode mode = ChannelMode::kShared;
};

// splitmix64 finalizer; full-avalanche 64-bit mixer.
std::uint64_t mix64(std::uint64_t z);

// Seed for replica r of a batch, decorrelated from neighboring replicas.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replica);

// Uniform in (0,1] from 64 hash bits: 53-bit mantissa, centered. Never 0; the
// value 1 occurs only at the top bit pattern (probability 2^-53) and maps to
// the clamped minimum sample under the -log transform.
double uniform_from_bits(std::uint64_t h);

// Round to the 2^-26 grid, clamped away from zero. Every sample is a multiple
// of 2^-26 bounded by ~37, so any sum of fewer than ~2^26 samples is exactly
// representable in a double; path-sum identities then hold with zero
// tolerance instead of ulp slack.
double quantize_sample(double v);

// Abstract passage-time source. base_sample is the rate-1 exponential value;
// rates enter only through the explicit division in passage_time, so a
// lambda-grid at different rates shares one underlying realization.
class PassageField {
 public:
  virtual ~PassageField() = default;

  virtual double base_sample(const Edge& e, Channel ch) const = 0;
  virtual int dim() const = 0;

  double passage_time(const Edge& e, Channel ch, double rate) const;
};

// The production field: a counter-based (stateless) pseudorandom function of
// (master seed, canonical edge, channel). No sequential state, so values for
// any edge subset can be recomputed at will and concurrent readers agree.
class HashField : public PassageField {
 public:
  explicit HashField(FieldSpec spec);

  double base_sample(const Edge& e, Channel ch) const override;
  int dim() const override { return spec_.dim; }
  const FieldSpec& spec() const { return spec_; }

 private:
  FieldSpec spec_;
};

// Deterministic edge -> value table for unit tests. Unset edges fall back to
// the default value. Stored values are returned verbatim (no quantization).
class StubField : public PassageField {
 public:
  StubField(int dim, double default_value,
            ChannelMode mode = ChannelMode::kShared);

  void set(const Edge& e, Channel ch, double value);
  double base_sample(const Edge& e, Channel ch) const override;
  int dim() const override { return dim_; }

 private:
  struct Key {
    Edge edge;
    Channel ch;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return EdgeHash{}(k.edge) * 7u + static_cast<std::size_t>(k.ch);
    }
  };

  int dim_;
  double default_value_;
  ChannelMode mode_;
  std::unordered_map<Key, double, KeyHash> table_;
};

}  // namespace richardson

#endif
