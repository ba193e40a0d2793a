#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ppe {

/// Gathers the bits of a flat basis index at a list of qubit positions into a
/// packed sub-index (listed qubit i -> bit i). Two half-width lookup tables
/// keep the per-index cost at two loads.
class QubitGather {
 public:
  QubitGather(std::span<const int> qubits, int n_qubits);

  std::uint64_t operator()(std::uint64_t x) const noexcept {
    return lo_[x & lo_mask_] | hi_[x >> lo_bits_];
  }
  // Inverse map: packed sub-index -> flat index with only those bits set.
  std::uint64_t scatter(std::uint64_t packed) const noexcept;

  std::size_t size() const noexcept { return qubits_.size(); }

 private:
  std::vector<int> qubits_;
  int lo_bits_;
  std::uint64_t lo_mask_;
  std::vector<std::uint64_t> lo_;
  std::vector<std::uint64_t> hi_;
};

}  // namespace ppe
