#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "thsynergy/error.hpp"

namespace ths {

/// Signed amount of information, stored in bits.
class InformationValue {
 public:
  constexpr InformationValue() = default;

  static constexpr InformationValue from_bits(double bits) { return InformationValue{bits}; }
  static constexpr InformationValue from_millibits(double mbits) { return InformationValue{mbits / 1000.0}; }

  constexpr double bits() const { return bits_; }
  constexpr double millibits() const { return bits_ * 1000.0; }

  constexpr InformationValue operator+(InformationValue other) const { return InformationValue{bits_ + other.bits_}; }
  constexpr InformationValue operator-(InformationValue other) const { return InformationValue{bits_ - other.bits_}; }
  constexpr InformationValue operator-() const { return InformationValue{-bits_}; }
  constexpr InformationValue operator*(double w) const { return InformationValue{bits_ * w}; }
  constexpr InformationValue& operator+=(InformationValue other) {
    bits_ += other.bits_;
    return *this;
  }

  constexpr auto operator<=>(const InformationValue&) const = default;

 private:
  constexpr explicit InformationValue(double bits) : bits_(bits) {}

  double bits_ = 0.0;
};

/// A discrete probability distribution. Construction validates that every
/// entry lies in [0, 1] and that the entries sum to one within 1e-12.
class Distribution {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit Distribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    if (p_.empty()) {
      throw ValidationError("distribution has no categories");
    }
    for (double p : p_) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("probability outside [0, 1]");
      }
    }
    const double sum = std::accumulate(p_.begin(), p_.end(), 0.0);
    if (std::abs(sum - 1.0) > kTolerance) {
      throw ValidationError("probabilities do not sum to 1");
    }
  }

  std::span<const double> probabilities() const { return p_; }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<double> p_;
};

namespace detail {

// -sum p log2 p over count / total, 0 log 0 = 0, in the order given.
inline double entropy_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total) {
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace detail

/// Shannon entropy in bits.
inline InformationValue entropy(const Distribution& d) {
  double h = 0.0;
  for (double p : d.probabilities()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return InformationValue::from_bits(h);
}

}  // namespace ths
