#include "ppe/bits.hpp"

namespace ppe {

QubitGather::QubitGather(std::span<const int> qubits, int n_qubits)
    : qubits_(qubits.begin(), qubits.end()) {
  lo_bits_ = (n_qubits + 1) / 2;
  const int hi_bits = n_qubits - lo_bits_;
  lo_mask_ = (std::uint64_t{1} << lo_bits_) - 1;
  lo_.assign(std::size_t{1} << lo_bits_, 0);
  hi_.assign(std::size_t{1} << hi_bits, 0);
  for (std::size_t i = 0; i < qubits_.size(); ++i) {
    const int q = qubits_[i];
    const std::uint64_t out = std::uint64_t{1} << i;
    if (q < lo_bits_) {
      for (std::uint64_t v = 0; v < lo_.size(); ++v)
        if ((v >> q) & 1U) lo_[v] |= out;
    } else {
      for (std::uint64_t v = 0; v < hi_.size(); ++v)
        if ((v >> (q - lo_bits_)) & 1U) hi_[v] |= out;
    }
  }
}

std::uint64_t QubitGather::scatter(std::uint64_t packed) const noexcept {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < qubits_.size(); ++i)
    if ((packed >> i) & 1U) x |= std::uint64_t{1} << qubits_[i];
  return x;
}

}  // namespace ppe
