#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "thsynergy/error.hpp"
#include "thsynergy/ingestion.hpp"
#include "thsynergy/text.hpp"

namespace ths::synth {

enum class SamplingMode : std::uint8_t { kQuota, kIid };

/// One (employees, NACE) cell of a region's joint distribution, with an
/// unnormalized non-negative weight. Missing employee counts are allowed.
struct Cell {
  std::optional<std::int64_t> employees;
  std::string nace;
  double weight = 0.0;
};

struct RegionSpec {
  std::string city;
  std::string prefecture;
  std::string province;
  std::uint64_t firms = 0;
  // Either both marginals (independent) or an explicit joint table.
  std::vector<std::pair<std::optional<std::int64_t>, double>> size_marginal;
  std::vector<std::pair<std::string, double>> nace_marginal;
  std::vector<Cell> joint;
};

struct PopulationSpec {
  std::vector<RegionSpec> regions;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::kQuota;
  YearRange years{2009, 2009};
};

/// Deterministic pseudo-random source: std::mt19937_64 raw output (a fully
/// specified algorithm) with rejection sampling for bounded integers and
/// 53-bit doubles, so streams reproduce on every platform.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// The cells of a region's joint distribution with probabilities normalized.
inline std::vector<Cell> region_cells(const RegionSpec& region) {
  std::vector<Cell> cells;
  if (!region.joint.empty()) {
    if (!region.size_marginal.empty() || !region.nace_marginal.empty()) {
      throw ConfigError("region " + region.city + ": give either marginals or a joint table, not both");
    }
    cells = region.joint;
  } else {
    if (region.size_marginal.empty() || region.nace_marginal.empty()) {
      throw ConfigError("region " + region.city + ": missing size or nace distribution");
    }
    double size_sum = 0.0, nace_sum = 0.0;
    for (const auto& s : region.size_marginal) size_sum += s.second;
    for (const auto& t : region.nace_marginal) nace_sum += t.second;
    for (const auto& [employees, ws] : region.size_marginal) {
      for (const auto& [nace, wt] : region.nace_marginal) {
        cells.push_back({employees, nace, (ws / size_sum) * (wt / nace_sum)});
      }
    }
  }
  double sum = 0.0;
  for (const auto& c : cells) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw ConfigError("region " + region.city + ": negative weight");
    if (c.employees && *c.employees < 0) throw ConfigError("region " + region.city + ": negative employees");
    try {
      validate_nace(c.nace);
    } catch (const ValidationError& e) {
      throw ConfigError("region " + region.city + ": " + e.what());
    }
    sum += c.weight;
  }
  if (!(sum > 0.0)) throw ConfigError("region " + region.city + ": weights sum to zero");
  for (auto& c : cells) c.weight /= sum;
  return cells;
}

/// Largest-remainder apportionment of `n` over probabilities `p`; ties in the
/// remainder go to the earlier cell.
inline std::vector<std::uint64_t> quota_counts(std::span<const double> p, std::uint64_t n) {
  std::vector<std::uint64_t> counts(p.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = p[i] * static_cast<double>(n);
    const double whole = std::floor(q);
    counts[i] = static_cast<std::uint64_t>(whole);
    assigned += counts[i];
    remainders.emplace_back(q - whole, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++assigned, k = (k + 1) % remainders.size()) ++counts[remainders[k].second];
  while (assigned > n) {  // only reachable through rounding in p summing above 1
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  return counts;
}

/// Generates firm records. Per-region counts equal the spec exactly; in quota
/// mode per-cell counts are the largest-remainder allocation. The final order is
/// a seeded Fisher-Yates shuffle and ids are assigned after shuffling.
inline std::vector<FirmRecord> generate_dataset(const PopulationSpec& spec) {
  if (spec.regions.empty()) throw ConfigError("population spec has no regions");
  if (spec.years.first > spec.years.last) throw ConfigError("empty year range");
  Random rng(spec.seed);
  const auto span = static_cast<std::uint64_t>(spec.years.last - spec.years.first + 1);
  std::vector<FirmRecord> records;
  for (const auto& region : spec.regions) {
    if (region.city.empty() || region.province.empty()) throw ConfigError("region without city or province");
    const auto cells = region_cells(region);
    std::vector<double> p;
    for (const auto& c : cells) p.push_back(c.weight);
    std::vector<std::uint64_t> counts;
    if (spec.mode == SamplingMode::kQuota) {
      counts = quota_counts(p, region.firms);
    } else {
      counts.assign(cells.size(), 0);
      for (std::uint64_t k = 0; k < region.firms; ++k) {
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = cells.size() - 1;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          acc += p[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
        ++counts[pick];
      }
    }
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::uint64_t j = 0; j < counts[i]; ++j, ++k) {
        FirmRecord r;
        r.year = spec.years.first + static_cast<int>(k % span);
        r.city_raw = region.city;
        r.nace = cells[i].nace;
        r.employees = cells[i].employees;
        records.push_back(std::move(r));
      }
    }
  }
  for (std::size_t i = records.size(); i > 1; --i) {
    std::swap(records[i - 1], records[rng.below(i)]);
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "F%08zu", i + 1);
    records[i].firm_id = id;
    records[i].row = i + 1;
  }
  return records;
}

/// Writes records in the extract format read by `parse_records` with the
/// standard schema.
inline void write_records_csv(std::ostream& out, std::span<const FirmRecord> records) {
  out << "firm_id,year,city,nace,employees\n";
  for (const auto& r : records) {
    csv::write_row(out, {r.firm_id, std::to_string(r.year), r.city_raw, r.nace,
                         r.employees ? std::to_string(*r.employees) : std::string("n.a.")});
  }
}

/// Geography table (city, prefecture, province) for the spec's regions.
inline void write_geo_hierarchy(std::ostream& out, const PopulationSpec& spec) {
  std::vector<std::string> seen;
  out << "# generated from a population spec\n";
  for (const auto& r : spec.regions) {
    if (std::find(seen.begin(), seen.end(), r.city) != seen.end()) continue;
    seen.push_back(r.city);
    out << r.city << '\t' << r.prefecture << '\t' << r.province << '\n';
  }
}

namespace detail {

inline std::optional<std::int64_t> parse_employees(std::string_view s, const std::string& where) {
  if (s == "na" || s == "n.a.") return std::nullopt;
  auto n = text::parse_int<std::int64_t>(s);
  if (!n) throw ConfigError(where + ": bad employee count '" + std::string(s) + "'");
  return n;
}

inline std::pair<std::string_view, double> parse_weighted(std::string_view token, const std::string& where) {
  const auto colon = token.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError(where + ": expected value:weight, got '" + std::string(token) + "'");
  auto w = text::parse_double(token.substr(colon + 1));
  if (!w || *w < 0.0) throw ConfigError(where + ": bad weight in '" + std::string(token) + "'");
  return {token.substr(0, colon), *w};
}

}  // namespace detail

/// Parses the plain-text population spec:
///
///   seed 42
///   mode quota                 # or iid
///   years 2008 2010
///   region Hangzhou | Hangzhou | Zhejiang | 5000
///   size 25:1 75:1 na:0.1      # employee-count marginal (na = missing)
///   nace 2110:1 6201:2         # NACE marginal
///   joint 25/2110:1 75/6201:1  # or an explicit joint table
///
/// size/nace/joint lines belong to the preceding region.
inline PopulationSpec parse_population_spec(std::istream& in) {
  PopulationSpec spec;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto where = "spec line " + std::to_string(number);
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = text::trim(body);
    if (body.empty()) continue;
    const auto space = body.find_first_of(" \t");
    const auto keyword = body.substr(0, space);
    const auto rest = space == std::string_view::npos ? std::string_view{} : text::trim(body.substr(space));
    std::vector<std::string_view> tokens;
    {
      std::size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && text::is_space(rest[i])) ++i;
        std::size_t j = i;
        while (j < rest.size() && !text::is_space(rest[j])) ++j;
        if (j > i) tokens.push_back(rest.substr(i, j - i));
        i = j;
      }
    }
    auto current = [&]() -> RegionSpec& {
      if (spec.regions.empty()) throw ConfigError(where + ": '" + std::string(keyword) + "' before any region");
      return spec.regions.back();
    };
    if (keyword == "seed") {
      auto s = text::parse_int<std::uint64_t>(rest);
      if (!s) throw ConfigError(where + ": bad seed");
      spec.seed = *s;
    } else if (keyword == "mode") {
      if (rest == "quota") {
        spec.mode = SamplingMode::kQuota;
      } else if (rest == "iid") {
        spec.mode = SamplingMode::kIid;
      } else {
        throw ConfigError(where + ": mode must be quota or iid");
      }
    } else if (keyword == "years") {
      if (tokens.size() != 2) throw ConfigError(where + ": expected two years");
      auto a = text::parse_int<int>(tokens[0]);
      auto b = text::parse_int<int>(tokens[1]);
      if (!a || !b || *a > *b) throw ConfigError(where + ": bad year range");
      spec.years = {*a, *b};
    } else if (keyword == "region") {
      const auto parts = text::split(rest, '|');
      if (parts.size() != 4) throw ConfigError(where + ": expected city | prefecture | province | firms");
      RegionSpec r;
      r.city = std::string(text::trim(parts[0]));
      r.prefecture = std::string(text::trim(parts[1]));
      r.province = std::string(text::trim(parts[2]));
      auto firms = text::parse_int<std::uint64_t>(parts[3]);
      if (!firms) throw ConfigError(where + ": bad firm count");
      r.firms = *firms;
      spec.regions.push_back(std::move(r));
    } else if (keyword == "size") {
      auto& r = current();
      for (auto t : tokens) {
        auto [value, w] = detail::parse_weighted(t, where);
        r.size_marginal.emplace_back(detail::parse_employees(value, where), w);
      }
    } else if (keyword == "nace") {
      auto& r = current();
      for (auto t : tokens) {
        auto [value, w] = detail::parse_weighted(t, where);
        r.nace_marginal.emplace_back(std::string(value), w);
      }
    } else if (keyword == "joint") {
      auto& r = current();
      for (auto t : tokens) {
        auto [value, w] = detail::parse_weighted(t, where);
        const auto slash = value.find('/');
        if (slash == std::string_view::npos) throw ConfigError(where + ": expected employees/nace:weight");
        r.joint.push_back({detail::parse_employees(value.substr(0, slash), where), std::string(value.substr(slash + 1)), w});
      }
    } else {
      throw ConfigError(where + ": unknown keyword '" + std::string(keyword) + "'");
    }
  }
  for (const auto& r : spec.regions) region_cells(r);
  return spec;
}

}  // namespace ths::synth
