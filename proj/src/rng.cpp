#include "ppe/rng.hpp"

#include <stdexcept>

namespace ppe {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  const std::uint64_t a = mix64(master_seed);
  const std::uint64_t b = mix64(stream_id ^ 0x6a09e667f3bcc909ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), engine_(seeded_engine(master_seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream(master_seed_, mix64(stream_id_ ^ mix64(tag + 0x3c6ef372fe94f82bULL)));
}

double RngStream::normal() { return normal_(engine_); }

std::complex<double> RngStream::complex_normal() {
  constexpr double kHalfVariance = 0.70710678118654752440;
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re * kHalfVariance, im * kHalfVariance};
}

double RngStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

}  // namespace ppe
