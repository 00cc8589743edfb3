#pragma once

// Test-only helpers: random tensors and record sets.

#include <array>
#include <random>
#include <string>
#include <vector>

#include "thsynergy/oracle.hpp"
#include "thsynergy/tensor.hpp"

namespace ths::testing {

/// Random triples with up to `max_categories` labels per axis.
inline std::vector<CategorizedTriple> random_triples(std::mt19937_64& rng, std::size_t max_categories = 5,
                                                     std::size_t max_records = 200) {
  std::uniform_int_distribution<std::size_t> ncat(1, max_categories);
  std::uniform_int_distribution<std::size_t> nrec(1, max_records);
  const std::array<std::size_t, 3> k{ncat(rng), ncat(rng), ncat(rng)};
  const auto n = nrec(rng);
  std::vector<CategorizedTriple> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"g" + std::to_string(std::uniform_int_distribution<std::size_t>(0, k[0] - 1)(rng)),
                   "o" + std::to_string(std::uniform_int_distribution<std::size_t>(0, k[1] - 1)(rng)),
                   "t" + std::to_string(std::uniform_int_distribution<std::size_t>(0, k[2] - 1)(rng))});
  }
  return out;
}

/// Random cell counts (0..max_count) over a random shape, expanded into triples.
inline std::vector<CategorizedTriple> random_count_table(std::mt19937_64& rng, std::size_t max_categories = 5,
                                                         std::uint64_t max_count = 50) {
  std::uniform_int_distribution<std::size_t> ncat(1, max_categories);
  std::uniform_int_distribution<std::uint64_t> count(0, max_count);
  const std::array<std::size_t, 3> k{ncat(rng), ncat(rng), ncat(rng)};
  std::vector<CategorizedTriple> out;
  for (std::size_t g = 0; g < k[0]; ++g)
    for (std::size_t o = 0; o < k[1]; ++o)
      for (std::size_t t = 0; t < k[2]; ++t) {
        const auto c = count(rng);
        for (std::uint64_t i = 0; i < c; ++i) out.push_back({"g" + std::to_string(g), "o" + std::to_string(o), "t" + std::to_string(t)});
      }
  if (out.empty()) out.push_back({"g0", "o0", "t0"});
  return out;
}

inline std::vector<oracle::RawTriple> raw(const std::vector<CategorizedTriple>& v) {
  std::vector<oracle::RawTriple> out;
  for (const auto& t : v) out.push_back({t.geography, t.organization, t.technology});
  return out;
}

/// Parity construction: x, y uniform binary, z = x xor y, each outcome `copies` times.
inline std::vector<CategorizedTriple> parity_triples(std::size_t copies = 1) {
  std::vector<CategorizedTriple> out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (std::size_t c = 0; c < copies; ++c) out.push_back({"x" + std::to_string(x), "y" + std::to_string(y), "z" + std::to_string(x ^ y)});
  return out;
}

/// x = y = z uniform binary.
inline std::vector<CategorizedTriple> redundant_triples(std::size_t copies = 1) {
  std::vector<CategorizedTriple> out;
  for (int x = 0; x < 2; ++x)
    for (std::size_t c = 0; c < copies; ++c) out.push_back({"x" + std::to_string(x), "y" + std::to_string(x), "z" + std::to_string(x)});
  return out;
}

/// Every combination of a 2x2x2 grid, `copies` times each.
inline std::vector<CategorizedTriple> uniform_triples(std::size_t copies = 1, const std::string& prefix = "") {
  std::vector<CategorizedTriple> out;
  for (int g = 0; g < 2; ++g)
    for (int o = 0; o < 2; ++o)
      for (int t = 0; t < 2; ++t)
        for (std::size_t c = 0; c < copies; ++c)
          out.push_back({prefix + "g" + std::to_string(g), "o" + std::to_string(o), "t" + std::to_string(t)});
  return out;
}

/// Reorders the three attributes of every triple: out[i] = in[perm[i]].
inline std::vector<CategorizedTriple> permute_axes(const std::vector<CategorizedTriple>& v, std::array<int, 3> perm) {
  std::vector<CategorizedTriple> out;
  for (const auto& t : v) {
    const std::array<const std::string*, 3> f{&t.geography, &t.organization, &t.technology};
    out.push_back({*f[perm[0]], *f[perm[1]], *f[perm[2]]});
  }
  return out;
}

}  // namespace ths::testing
