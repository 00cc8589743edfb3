#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thsynergy/error.hpp"

namespace ths {

/// Values keyed by label (for example region name -> indicator).
using LabeledSeries = std::vector<std::pair<std::string, double>>;

struct Correlations {
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t n = 0;  // common labels used
};

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> mid_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

/// Pearson product-moment correlation. Constant input yields NaN.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("series differ in length");
  if (a.size() < 2) throw DataError("correlation needs at least two observations");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  const double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

/// Spearman's rho as the Pearson correlation of mid-ranks (exact with ties).
inline double spearman(std::span<const double> a, std::span<const double> b) {
  const auto ra = mid_ranks(a);
  const auto rb = mid_ranks(b);
  return pearson(ra, rb);
}

/// Correlates two labeled series over the labels they share.
inline Correlations rank_correlations(const LabeledSeries& a, const LabeledSeries& b) {
  std::map<std::string, double> lookup;
  for (const auto& [label, value] : b) {
    if (!lookup.emplace(label, value).second) throw ValidationError("duplicate label '" + label + "'");
  }
  std::map<std::string, double> left;
  for (const auto& [label, value] : a) {
    if (!left.emplace(label, value).second) throw ValidationError("duplicate label '" + label + "'");
  }
  std::vector<double> xs, ys;
  for (const auto& [label, value] : left) {
    auto it = lookup.find(label);
    if (it == lookup.end()) continue;
    xs.push_back(value);
    ys.push_back(it->second);
  }
  if (xs.size() < 3) throw DataError("fewer than 3 common labels");
  return {pearson(xs, ys), spearman(xs, ys), xs.size()};
}

}  // namespace ths
