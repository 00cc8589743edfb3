#pragma once

// Reference evaluation of the three-way transmission, written directly
// against the raw records. It deliberately shares no code with the tensor and
// entropy headers so the two can be checked against each other.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>

namespace ths::oracle {

using RawTriple = std::array<std::string, 3>;

namespace detail {

// Entropy (bits) of the frequency distribution of the attributes selected by
// mask bits 1, 2, 4 over the raw records.
inline double term(std::span<const RawTriple> records, unsigned mask) {
  std::map<std::string, std::uint64_t> freq;
  for (const auto& r : records) {
    std::string key;
    for (unsigned k = 0; k < 3; ++k) {
      if (mask & (1u << k)) {
        key += std::to_string(r[k].size());
        key += ':';
        key += r[k];
      }
      key += '|';
    }
    ++freq[key];
  }
  const double n = static_cast<double>(records.size());
  double h = 0.0;
  for (const auto& [key, count] : freq) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace detail

/// H_x + H_y + H_z - H_xy - H_xz - H_yz + H_xyz in bits.
inline double transmission3_bits(std::span<const RawTriple> records) {
  if (records.empty()) throw std::invalid_argument("empty dataset");
  using detail::term;
  return term(records, 1) + term(records, 2) + term(records, 4) - term(records, 3) - term(records, 5) -
         term(records, 6) + term(records, 7);
}

}  // namespace ths::oracle
