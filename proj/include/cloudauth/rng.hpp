#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>

#include "cloudauth/bytes.hpp"

namespace cloudauth {

// Deterministic random source. Every operation that needs randomness takes
// one of these explicitly, so a run is reproducible from its seed alone.
// mt19937_64 output is fully specified by the standard, which keeps
// transcripts identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t word = eng_();
      for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
        out[i] = static_cast<std::uint8_t>(word >> (8 * b));
      }
    }
  }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  std::array<std::uint8_t, 32> key32() {
    std::array<std::uint8_t, 32> k{};
    fill(k);
    return k;
  }

  std::array<std::uint8_t, 12> nonce12() {
    std::array<std::uint8_t, 12> n{};
    fill(n);
    return n;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cloudauth
