#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "thsynergy/error.hpp"
#include "thsynergy/information.hpp"
#include "thsynergy/tensor.hpp"

namespace ths {

/// Non-empty subset of the three axes.
class AxisSet {
 public:
  AxisSet(std::initializer_list<Axis> axes) {
    for (Axis a : axes) mask_ |= static_cast<std::uint8_t>(1u << axis_index(a));
  }
  bool contains(Axis a) const { return (mask_ >> axis_index(a)) & 1u; }
  bool empty() const { return mask_ == 0; }

 private:
  std::uint8_t mask_ = 0;
};

namespace detail {

inline void require_nonempty(const ContingencyTensor& t) {
  if (t.total() == 0) throw DataError("empty dataset");
}

// Counts of the marginal over `axes`, in lexicographic order of the kept indices.
inline std::vector<std::uint64_t> marginal_counts(std::span<const ContingencyTensor::Cell> cells, AxisSet axes) {
  using Entry = std::pair<ContingencyTensor::Index, std::uint64_t>;
  std::vector<Entry> projected;
  projected.reserve(cells.size());
  for (const auto& c : cells) {
    ContingencyTensor::Index key{};
    for (Axis a : kAllAxes) {
      if (axes.contains(a)) key[axis_index(a)] = c.index[axis_index(a)];
    }
    projected.emplace_back(key, c.count);
  }
  std::sort(projected.begin(), projected.end(), [](const Entry& x, const Entry& y) { return x.first < y.first; });
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < projected.size();) {
    std::uint64_t sum = 0;
    std::size_t j = i;
    for (; j < projected.size() && projected[j].first == projected[i].first; ++j) sum += projected[j].second;
    counts.push_back(sum);
    i = j;
  }
  return counts;
}

// Summed over sorted counts, so the result depends only on the multiset of
// counts and not on category order (shuffled input gives identical bits).
inline double sorted_entropy_bits(std::vector<std::uint64_t> counts, std::uint64_t total) {
  std::sort(counts.begin(), counts.end());
  return entropy_of_counts(counts, total);
}

inline double joint_entropy_bits(std::span<const ContingencyTensor::Cell> cells, std::uint64_t total, AxisSet axes) {
  return sorted_entropy_bits(marginal_counts(cells, axes), total);
}

}  // namespace detail

/// Entropy of the marginal distribution over the selected axes.
inline InformationValue joint_entropy(const ContingencyTensor& t, AxisSet axes) {
  if (axes.empty()) throw ValidationError("joint entropy needs at least one axis");
  detail::require_nonempty(t);
  return InformationValue::from_bits(detail::joint_entropy_bits(t.cells(), t.total(), axes));
}

/// Mutual information H_A + H_B - H_AB between two axes.
inline InformationValue transmission2(const ContingencyTensor& t, Axis a, Axis b) {
  if (a == b) throw ValidationError("transmission needs two distinct axes");
  detail::require_nonempty(t);
  const double ha = detail::joint_entropy_bits(t.cells(), t.total(), {a});
  const double hb = detail::joint_entropy_bits(t.cells(), t.total(), {b});
  const double hab = detail::joint_entropy_bits(t.cells(), t.total(), {a, b});
  return InformationValue::from_bits(ha + hb - hab);
}

/// Signed three-way transmission
///   T = H_G + H_O + H_T - H_GO - H_GT - H_OT + H_GOT.
/// Negative values indicate a reduction of uncertainty at the systems level.
inline InformationValue transmission3(const ContingencyTensor& t) {
  detail::require_nonempty(t);
  const auto cells = t.cells();
  const auto n = t.total();
  constexpr auto G = Axis::kGeography;
  constexpr auto O = Axis::kOrganization;
  constexpr auto T = Axis::kTechnology;
  const double hg = detail::joint_entropy_bits(cells, n, {G});
  const double ho = detail::joint_entropy_bits(cells, n, {O});
  const double ht = detail::joint_entropy_bits(cells, n, {T});
  const double hgo = detail::joint_entropy_bits(cells, n, {G, O});
  const double hgt = detail::joint_entropy_bits(cells, n, {G, T});
  const double hot = detail::joint_entropy_bits(cells, n, {O, T});
  std::vector<std::uint64_t> all;
  all.reserve(cells.size());
  for (const auto& c : cells) all.push_back(c.count);
  const double hgot = detail::sorted_entropy_bits(std::move(all), n);
  return InformationValue::from_bits(hg + ho + ht - hgo - hgt - hot + hgot);
}

/// Expected mutual information between `a` and `b` within slices of `given`:
/// sum over z of p(z) * T_ab(slice z).
inline InformationValue conditional_transmission2(const ContingencyTensor& t, Axis a, Axis b, Axis given) {
  if (a == b || a == given || b == given) throw ValidationError("conditional transmission needs three distinct axes");
  detail::require_nonempty(t);
  std::vector<ContingencyTensor::Cell> sorted(t.cells().begin(), t.cells().end());
  const auto z = axis_index(given);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [z](const auto& x, const auto& y) { return x.index[z] < y.index[z]; });
  const double n = static_cast<double>(t.total());
  double result = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::uint64_t nz = 0;
    for (; j < sorted.size() && sorted[j].index[z] == sorted[i].index[z]; ++j) nz += sorted[j].count;
    const std::span<const ContingencyTensor::Cell> slice(sorted.data() + i, j - i);
    const double tab = detail::joint_entropy_bits(slice, nz, {a}) + detail::joint_entropy_bits(slice, nz, {b}) -
                       detail::joint_entropy_bits(slice, nz, {a, b});
    result += (static_cast<double>(nz) / n) * tab;
    i = j;
  }
  return InformationValue::from_bits(result);
}

}  // namespace ths
