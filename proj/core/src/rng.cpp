#include "lpl/rng.hpp"

#include <stdexcept>

namespace lpl {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL * (stream_id + 1));
  std::seed_seq seq{
      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
      static_cast<std::uint32_t>(seed >> 32),        static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(stream_id >> 32),   static_cast<std::uint32_t>(stream_id)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() { return uniform_(engine_); }

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

RngStream RngStream::derive(std::uint64_t child) const {
  std::uint64_t state = stream_id_ * 0xd1b54a32d192ed03ULL + child;
  return RngStream(seed_, splitmix64(state));
}

}  // namespace lpl
