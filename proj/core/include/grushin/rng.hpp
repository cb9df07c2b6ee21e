// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace grushin {

/// Counter-based deterministic random stream.
///
/// Every consumer of randomness owns a named stream derived from the run
/// seed; draws are a pure function of (seed, stream name, counter), so runs
/// reproduce bit-for-bit regardless of evaluation order or platform.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream) : key_(derive_key(seed, stream)) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::string_view stream) {
    // FNV-1a over the stream name, folded into the seed.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : stream) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return mix(seed ^ mix(h));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Compensated (Kahan) accumulator; used for all quadrature reductions so
/// sums are deterministic and accurate independent of node count.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace grushin
