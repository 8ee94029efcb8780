#include "richardson/field.hpp"

#include <cmath>

namespace richardson {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Map a signed coordinate to an unsigned word without sign-extension
// ambiguity: 0,-1,1,-2,2,... -> 0,1,2,3,4,...
std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replica) {
  return mix64(master_seed + kGolden * (replica + 1));
}

double uniform_from_bits(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1p-53;
}

double quantize_sample(double v) {
  double q = std::nearbyint(v * 0x1p26) * 0x1p-26;
  return q < 0x1p-26 ? 0x1p-26 : q;
}

bool channel_allowed(ChannelMode mode, Channel ch) {
  if (mode == ChannelMode::kShared) return ch == Channel::kShared;
  return ch == Channel::kType1 || ch == Channel::kType2;
}

double PassageField::passage_time(const Edge& e, Channel ch, double rate) const {
  if (!(rate > 0.0)) {
    throw InvalidInputError("passage_time rate must be > 0");
  }
  return base_sample(e, ch) / rate;
}

HashField::HashField(FieldSpec spec) : spec_(spec) {
  require_dimension(spec_.dim);
}

double HashField::base_sample(const Edge& e, Channel ch) const {
  if (!channel_allowed(spec_.mode, ch)) {
    throw InvalidInputError("channel not present in field spec");
  }
  // Sponge-style absorption: full 64-bit mix after every word, keyed by the
  // master seed. Identical (seed, edge, channel) always hashes identically.
  std::uint64_t h = mix64(spec_.master_seed ^ kGolden);
  for (int i = 0; i < spec_.dim; ++i) {
    h = mix64(h ^ zigzag(e.base.c[static_cast<std::size_t>(i)]));
  }
  h = mix64(h ^ (0x100ULL + static_cast<std::uint64_t>(e.axis)));
  h = mix64(h ^ (0x200ULL + static_cast<std::uint64_t>(ch)));
  double u = uniform_from_bits(h);
  return quantize_sample(-std::log(u));
}

StubField::StubField(int dim, double default_value, ChannelMode mode)
    : dim_(dim), default_value_(default_value), mode_(mode) {
  require_dimension(dim);
  if (!(default_value > 0.0)) {
    throw InvalidInputError("stub field default value must be > 0");
  }
}

void StubField::set(const Edge& e, Channel ch, double value) {
  if (!(value > 0.0)) {
    throw InvalidInputError("stub field values must be > 0");
  }
  if (!channel_allowed(mode_, ch)) {
    throw InvalidInputError("channel not present in field spec");
  }
  table_[Key{e, ch}] = value;
}

double StubField::base_sample(const Edge& e, Channel ch) const {
  if (!channel_allowed(mode_, ch)) {
    throw InvalidInputError("channel not present in field spec");
  }
  auto it = table_.find(Key{e, ch});
  return it == table_.end() ? default_value_ : it->second;
}

}  // namespace richardson
