#pragma once

#include <ksmooth/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ksmooth {

using Rng = std::mt19937_64;

/// Independent stream for (seed, a, b, ...); stable across platforms.
inline Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {}) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (auto k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Uniform integer in [lo, hi]. Avoids std::uniform_int_distribution, whose
/// output is implementation-defined, so reports stay byte-identical.
inline long uniform_int(Rng &rng, long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

inline bool coin(Rng &rng, long numerator = 1, long denominator = 2) {
  return uniform_int(rng, 1, denominator) <= numerator;
}

/// k strictly positive rationals with a common denominator in
/// [k, max(k, max_den)] that sum to 1.
inline std::vector<Rational> positive_weights(Rng &rng, std::size_t k, long max_den) {
  const long kk = static_cast<long>(k);
  const long den = uniform_int(rng, kk, std::max(kk, max_den));
  // Composition of `den` into k positive parts: choose k−1 distinct cuts.
  std::vector<long> cuts;
  while (static_cast<long>(cuts.size()) < kk - 1) {
    const long c = uniform_int(rng, 1, den - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end())
      cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> w;
  long prev = 0;
  for (long c : cuts) {
    w.push_back(make_rational(c - prev, den));
    prev = c;
  }
  w.push_back(make_rational(den - prev, den));
  return w;
}

} // namespace ksmooth
