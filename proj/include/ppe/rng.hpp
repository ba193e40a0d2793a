#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace ppe {

// SplitMix64 finalizer; used to derive independent engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a list of words (system size, subsystem sizes, sample index, ...)
// into one stream id.
constexpr std::uint64_t stream_address(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

/// Reproducible random stream addressed by (master_seed, stream_id).
///
/// The engine seed is a hash of both words, so a stream can be rebuilt from
/// its address alone and distinct addresses give unrelated draws. Child
/// streams (one per gate, layer, realization, ...) are derived with
/// substream() rather than by advancing a shared engine, which keeps every
/// draw independent of scheduling order.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Child address: same master seed, stream id hashed with `tag`.
  RngStream substream(std::uint64_t tag) const;
  RngStream substream(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return substream(tag_a).substream(tag_b);
  }

  double normal();
  // Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal();
  double uniform();
  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ppe
