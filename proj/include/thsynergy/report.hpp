#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "thsynergy/csv.hpp"
#include "thsynergy/decomposition.hpp"
#include "thsynergy/error.hpp"
#include "thsynergy/ingestion.hpp"
#include "thsynergy/text.hpp"

namespace ths {

enum class TableStyle : std::uint8_t { kText, kCsv, kJson };

inline std::string level_name(int level) {
  switch (level) {
    case 1: return "province";
    case 2: return "prefecture";
    case 3: return "city";
    default: return "group";
  }
}

namespace detail {

inline std::string mbit(InformationValue v) { return text::format_fixed(v.millibits(), 2); }

inline nlohmann::json info_json(InformationValue v) {
  return {{"bits", v.bits()}, {"mbit", v.millibits()}};
}

inline InformationValue info_from_json(const nlohmann::json& j) {
  return InformationValue::from_bits(j.at("bits").get<double>());
}

inline std::string pad_right(std::string_view s, std::size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

inline std::string pad_left(std::string_view s, std::size_t width) {
  std::string out;
  if (s.size() < width) out.append(width - s.size(), ' ');
  out += s;
  return out;
}

inline std::string percent_or_dash(std::optional<double> v) { return v ? text::format_fixed(*v, 1) + "%" : "-"; }

}  // namespace detail

inline nlohmann::json report_to_json(const SynergyReport& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"label", g.label},
                      {"n", g.n},
                      {"within", detail::info_json(g.within)},
                      {"delta", detail::info_json(g.delta)}});
  }
  nlohmann::json j = {{"level", r.level},
                      {"level_name", level_name(r.level)},
                      {"filter", r.filter_description},
                      {"n_total", r.n_total},
                      {"total", detail::info_json(r.total)},
                      {"sum_delta", detail::info_json(r.sum_delta())},
                      {"residual", detail::info_json(r.residual)},
                      {"groups", std::move(groups)}};
  j["share_above_group"] = r.share_above_group ? nlohmann::json(*r.share_above_group) : nlohmann::json(nullptr);
  const auto within = r.share_within_groups();
  j["share_within_groups"] = within ? nlohmann::json(*within) : nlohmann::json(nullptr);
  return j;
}

/// Inverse of report_to_json; values are read from the exact "bits" fields.
inline SynergyReport report_from_json(const nlohmann::json& j) {
  try {
    SynergyReport r;
    r.level = j.at("level").get<int>();
    r.filter_description = j.at("filter").get<std::string>();
    r.n_total = j.at("n_total").get<std::uint64_t>();
    r.total = detail::info_from_json(j.at("total"));
    r.residual = detail::info_from_json(j.at("residual"));
    if (!j.at("share_above_group").is_null()) r.share_above_group = j.at("share_above_group").get<double>();
    for (const auto& g : j.at("groups")) {
      r.groups.push_back({g.at("label").get<std::string>(), g.at("n").get<std::uint64_t>(),
                          detail::info_from_json(g.at("within")), detail::info_from_json(g.at("delta"))});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

inline SynergyReport read_report_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
  return report_from_json(j);
}

/// Renders the decomposition with groups in ascending delta order, followed by
/// the sum of deltas, the pooled total and the residual T0. mbit values carry
/// two decimals in text and CSV; JSON keeps full precision.
inline std::string render_table(const SynergyReport& r, TableStyle style) {
  std::ostringstream out;
  switch (style) {
    case TableStyle::kJson:
      out << report_to_json(r).dump(2) << '\n';
      break;
    case TableStyle::kCsv: {
      out << "row,label,n,T_G_mbit,delta_T_mbit\n";
      for (const auto& g : r.groups) {
        csv::write_row(out, {"group", g.label, std::to_string(g.n), detail::mbit(g.within), detail::mbit(g.delta)});
      }
      csv::write_row(out, {"sum", "Sum", "", "", detail::mbit(r.sum_delta())});
      csv::write_row(out, {"total", "Total", std::to_string(r.n_total), detail::mbit(r.total), ""});
      csv::write_row(out, {"residual", "T0", "", "", detail::mbit(r.residual)});
      break;
    }
    case TableStyle::kText: {
      std::size_t width = 8;
      for (const auto& g : r.groups) width = std::max(width, g.label.size());
      width += 2;
      out << "Synergy by " << level_name(r.level);
      if (!r.filter_description.empty()) out << " (" << r.filter_description << ")";
      out << ", sorted by contribution\n";
      out << detail::pad_right("Region", width) << detail::pad_left("N of firms", 12) << detail::pad_left("T_G (mbit)", 14)
          << detail::pad_left("dT (mbit)", 12) << '\n';
      for (const auto& g : r.groups) {
        out << detail::pad_right(g.label, width) << detail::pad_left(std::to_string(g.n), 12)
            << detail::pad_left(detail::mbit(g.within), 14) << detail::pad_left(detail::mbit(g.delta), 12) << '\n';
      }
      out << std::string(width + 38, '-') << '\n';
      out << detail::pad_right("Sum", width) << detail::pad_left("", 26) << detail::pad_left(detail::mbit(r.sum_delta()), 12)
          << '\n';
      out << detail::pad_right("Total", width) << detail::pad_left(std::to_string(r.n_total), 12)
          << detail::pad_left(detail::mbit(r.total), 14) << '\n';
      out << detail::pad_right("T0", width) << detail::pad_left("", 26) << detail::pad_left(detail::mbit(r.residual), 12)
          << '\n';
      out << "Share above " << level_name(r.level) << " level (T0 / total): " << detail::percent_or_dash(r.share_above_group)
          << '\n';
      out << "Share within " << level_name(r.level) << "s (sum dT / total): "
          << detail::percent_or_dash(r.share_within_groups()) << '\n';
      break;
    }
  }
  return out.str();
}

/// Region-value CSV for joining onto map attribute tables: one row per group,
/// then summary rows for the total and T0 (level column "summary").
inline std::string export_region_values(const SynergyReport& r) {
  std::ostringstream out;
  out << "region,level,n_G,T_G_mbit,delta_T_mbit,share_of_sum_delta\n";
  const double sum = r.sum_delta().bits();
  for (const auto& g : r.groups) {
    const std::string share = sum != 0.0 ? text::format_fixed(100.0 * g.delta.bits() / sum, 2) : "";
    csv::write_row(out, {g.label, std::to_string(r.level), std::to_string(g.n), detail::mbit(g.within),
                         detail::mbit(g.delta), share});
  }
  csv::write_row(out, {"Total", "summary", std::to_string(r.n_total), detail::mbit(r.total), "", ""});
  csv::write_row(out, {"T0", "summary", "", "", detail::mbit(r.residual), ""});
  return out.str();
}

/// One line of a sector comparison: subset delta as a share of the base delta.
struct ComparisonRow {
  std::string kind;  // group | sum | total | residual
  std::string label;
  std::optional<InformationValue> base;
  std::optional<InformationValue> subset;
  std::optional<double> share;  // 100 * subset / base
};

/// Compares a sector-filtered report against the all-sector report of the
/// same level. Per-group shares use each group's own deltas; the sum, total
/// and residual rows compare the corresponding aggregates.
inline std::vector<ComparisonRow> compare_reports(const SynergyReport& base, const SynergyReport& subset) {
  if (base.level != subset.level) throw DataError("reports were computed at different levels");
  auto ratio = [](std::optional<InformationValue> b, std::optional<InformationValue> s) -> std::optional<double> {
    if (!b || !s || b->bits() == 0.0) return std::nullopt;
    return 100.0 * s->bits() / b->bits();
  };
  std::map<std::string, InformationValue> subset_delta;
  for (const auto& g : subset.groups) subset_delta.emplace(g.label, g.delta);
  std::vector<ComparisonRow> rows;
  for (const auto& g : base.groups) {
    std::optional<InformationValue> s;
    if (auto it = subset_delta.find(g.label); it != subset_delta.end()) {
      s = it->second;
      subset_delta.erase(it);
    }
    rows.push_back({"group", g.label, g.delta, s, ratio(g.delta, s)});
  }
  for (const auto& g : subset.groups) {
    if (subset_delta.contains(g.label)) rows.push_back({"group", g.label, std::nullopt, g.delta, std::nullopt});
  }
  rows.push_back({"sum", "Sum", base.sum_delta(), subset.sum_delta(), ratio(base.sum_delta(), subset.sum_delta())});
  rows.push_back({"total", "Total", base.total, subset.total, ratio(base.total, subset.total)});
  rows.push_back({"residual", "T0", base.residual, subset.residual, ratio(base.residual, subset.residual)});
  return rows;
}

inline std::string render_comparison_csv(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  out << "kind,label,base_delta_mbit,subset_delta_mbit,subset_share_percent\n";
  for (const auto& r : rows) {
    csv::write_row(out, {r.kind, r.label, r.base ? detail::mbit(*r.base) : "", r.subset ? detail::mbit(*r.subset) : "",
                         r.share ? text::format_fixed(*r.share, 1) : ""});
  }
  return out.str();
}

inline nlohmann::json profile_to_json(const DatasetProfile& p) {
  auto bins = [](const std::vector<HistogramBin>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& b : v) a.push_back({{"label", b.label}, {"count", b.count}, {"percent", b.percent}});
    return a;
  };
  nlohmann::json excl = nlohmann::json::object();
  for (const auto& [reason, n] : p.exclusions) excl[reason] = n;
  return {{"parsed_rows", p.parsed_rows}, {"included", p.included},          {"excluded", p.excluded},
          {"exclusions", excl},           {"by_year", bins(p.by_year)},      {"by_size_class", bins(p.by_size_class)},
          {"by_province", bins(p.by_province)}, {"by_sector", bins(p.by_sector)}};
}

/// Long-format CSV: section, label, count, percent (one decimal).
inline std::string profile_to_csv(const DatasetProfile& p) {
  std::ostringstream out;
  out << "section,label,count,percent\n";
  csv::write_row(out, {"totals", "parsed rows", std::to_string(p.parsed_rows), ""});
  csv::write_row(out, {"totals", "included", std::to_string(p.included), ""});
  csv::write_row(out, {"totals", "excluded", std::to_string(p.excluded), ""});
  for (const auto& [reason, n] : p.exclusions) csv::write_row(out, {"exclusion", reason, std::to_string(n), ""});
  auto section = [&](std::string_view name, const std::vector<HistogramBin>& bins) {
    for (const auto& b : bins) {
      csv::write_row(out, {std::string(name), b.label, std::to_string(b.count), text::format_fixed(b.percent, 1)});
    }
  };
  section("year", p.by_year);
  section("size_class", p.by_size_class);
  section("province", p.by_province);
  section("sector", p.by_sector);
  return out.str();
}

}  // namespace ths
