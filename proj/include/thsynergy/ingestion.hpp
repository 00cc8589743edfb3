#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thsynergy/csv.hpp"
#include "thsynergy/error.hpp"
#include "thsynergy/taxonomy.hpp"
#include "thsynergy/text.hpp"

namespace ths {

inline constexpr int kMinYear = 1990;
inline constexpr int kMaxYear = 2030;

/// One firm observation from an extract.
struct FirmRecord {
  std::string firm_id;
  int year = 0;
  std::string city_raw;
  std::string nace;  // normalized digits, division validated
  std::optional<std::int64_t> employees;
  std::size_t row = 0;  // 1-based data row in the source (header excluded)

  bool operator==(const FirmRecord&) const = default;
};

enum class IssueReason : std::uint8_t {
  kMissingCity,
  kInvalidNace,
  kNegativeEmployees,
  kUnparseableRow,
  kUnresolvedGeography,
};

inline constexpr std::array<IssueReason, 5> kAllIssueReasons = {
    IssueReason::kMissingCity, IssueReason::kInvalidNace, IssueReason::kNegativeEmployees,
    IssueReason::kUnparseableRow, IssueReason::kUnresolvedGeography};

constexpr std::string_view issue_reason_name(IssueReason r) {
  switch (r) {
    case IssueReason::kMissingCity: return "missing city";
    case IssueReason::kInvalidNace: return "invalid NACE";
    case IssueReason::kNegativeEmployees: return "negative employees";
    case IssueReason::kUnparseableRow: return "unparseable row";
    case IssueReason::kUnresolvedGeography: return "unresolved geography";
  }
  return "?";
}

/// Why a row was excluded. Each excluded row produces exactly one issue.
struct IngestIssue {
  std::size_t row = 0;
  std::string field;
  IssueReason reason = IssueReason::kUnparseableRow;
  std::string detail;

  bool operator==(const IngestIssue&) const = default;
};

/// Maps the logical fields onto column headers of an extract.
class Schema {
 public:
  static constexpr std::array<std::string_view, 5> kFields = {"firm_id", "year", "city", "nace", "employees"};
  static constexpr std::array<std::string_view, 4> kRequired = {"year", "city", "nace", "employees"};

  /// Headers equal to the logical field names (the format synthgen writes).
  static Schema standard() {
    Schema s;
    for (auto f : kFields) s.columns_.emplace(std::string(f), std::string(f));
    return s;
  }

  /// Tab-separated lines: logical field, header name.
  static Schema from_tsv(std::istream& in) {
    Schema s;
    for (const auto& row : text::read_tsv(in)) {
      const auto where = "schema line " + std::to_string(row.line);
      if (row.fields.size() != 2 || row.fields[1].empty()) throw ConfigError(where + ": expected field and header");
      if (std::find(kFields.begin(), kFields.end(), row.fields[0]) == kFields.end()) {
        throw ConfigError(where + ": unknown field '" + row.fields[0] + "'");
      }
      if (!s.columns_.emplace(row.fields[0], row.fields[1]).second) {
        throw ConfigError(where + ": field '" + row.fields[0] + "' mapped twice");
      }
    }
    for (auto f : kRequired) {
      if (!s.columns_.contains(std::string(f))) throw ConfigError("schema does not map required field '" + std::string(f) + "'");
    }
    return s;
  }

  static Schema from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    return from_tsv(in);
  }

  std::optional<std::string> header_for(std::string_view field) const {
    auto it = columns_.find(std::string(field));
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, std::string> columns_;
};

struct ParseResult {
  std::vector<FirmRecord> records;
  std::vector<IngestIssue> issues;
  std::size_t parsed_rows = 0;  // records.size() + issues.size()
};

namespace detail {

inline bool is_missing_marker(std::string_view v) {
  const auto f = text::fold(v);
  return f.empty() || f == "n.a." || f == "n.a" || f == "na" || f == "n/a" || f == "-";
}

}  // namespace detail

/// Reads a firm extract. Rows failing validation become issues; blank lines
/// are ignored. A header lacking a required column is a ConfigError.
inline ParseResult parse_records(std::istream& in, const Schema& schema) {
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (reader.next(fields) != csv::Reader::Status::kRow) throw ConfigError("missing header row");

  std::map<std::string_view, std::size_t> column;
  for (auto f : Schema::kFields) {
    const auto header = schema.header_for(f);
    if (!header) continue;
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const std::string& h) { return text::trim(h) == *header; });
    if (it == fields.end()) {
      throw ConfigError("header lacks column '" + *header + "' for field '" + std::string(f) + "'");
    }
    column[f] = static_cast<std::size_t>(it - fields.begin());
  }
  const std::size_t width = fields.size();

  ParseResult out;
  std::size_t row = 0;
  for (;;) {
    const auto status = reader.next(fields);
    if (status == csv::Reader::Status::kEnd) break;
    if (status == csv::Reader::Status::kRow && fields.size() == 1 && text::trim(fields[0]).empty()) continue;
    ++row;
    ++out.parsed_rows;
    auto issue = [&](std::string field, IssueReason reason, std::string detail) {
      out.issues.push_back({row, std::move(field), reason, std::move(detail)});
    };
    if (status == csv::Reader::Status::kMalformed) {
      issue("", IssueReason::kUnparseableRow, "malformed quoting");
      continue;
    }
    if (fields.size() != width) {
      issue("", IssueReason::kUnparseableRow,
            "expected " + std::to_string(width) + " columns, found " + std::to_string(fields.size()));
      continue;
    }
    auto value = [&](std::string_view f) -> std::string_view {
      auto it = column.find(f);
      return it == column.end() ? std::string_view{} : text::trim(fields[it->second]);
    };

    FirmRecord r;
    r.row = row;
    r.firm_id = std::string(value("firm_id"));
    if (r.firm_id.empty()) r.firm_id = "row-" + std::to_string(row);

    const auto year = text::parse_int<int>(value("year"));
    if (!year || *year < kMinYear || *year > kMaxYear) {
      issue("year", IssueReason::kUnparseableRow, "year '" + std::string(value("year")) + "' not in 1990-2030");
      continue;
    }
    r.year = *year;

    r.city_raw = std::string(value("city"));
    if (r.city_raw.empty()) {
      issue("city", IssueReason::kMissingCity, "empty city");
      continue;
    }

    try {
      r.nace = validate_nace(value("nace"));
    } catch (const ValidationError& e) {
      issue("nace", IssueReason::kInvalidNace, e.what());
      continue;
    }

    const auto employees = value("employees");
    if (!detail::is_missing_marker(employees)) {
      const auto n = text::parse_int<std::int64_t>(employees);
      if (!n) {
        issue("employees", IssueReason::kUnparseableRow, "employees '" + std::string(employees) + "' not an integer");
        continue;
      }
      if (*n < 0) {
        issue("employees", IssueReason::kNegativeEmployees, "employees " + std::to_string(*n));
        continue;
      }
      r.employees = *n;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

/// Inclusive range of years.
struct YearRange {
  int first = 2008;
  int last = 2010;

  bool contains(int y) const { return y >= first && y <= last; }
};

inline YearRange parse_year_range(std::string_view s) {
  const auto parts = text::split(s, '-');
  const auto first = text::parse_int<int>(parts.front());
  const auto last = text::parse_int<int>(parts.back());
  if (parts.size() > 2 || !first || !last) throw ConfigError("year range must look like 2008-2010");
  if (*first > *last) throw ConfigError("empty year range");
  return {*first, *last};
}

struct WindowResult {
  std::vector<FirmRecord> records;
  std::size_t dropped = 0;
  std::optional<std::string> warning;
};

/// Keeps records whose year lies in `years`.
inline WindowResult filter_window(std::span<const FirmRecord> records, YearRange years) {
  if (years.first > years.last) throw ConfigError("empty year range");
  WindowResult out;
  for (const auto& r : records) {
    if (years.contains(r.year)) {
      out.records.push_back(r);
    } else {
      ++out.dropped;
    }
  }
  if (out.records.empty()) {
    out.warning = "no records in " + std::to_string(years.first) + "-" + std::to_string(years.last);
  }
  return out;
}

/// Percentages with `decimals` digits that sum to exactly 100 (largest
/// remainder rounding); all zeros when the counts are all zero.
inline std::vector<double> rounded_percentages(std::span<const std::uint64_t> counts, int decimals = 1) {
  std::vector<double> out(counts.size(), 0.0);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return out;
  std::uint64_t scale = 100;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  std::vector<std::uint64_t> units(counts.size());
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto scaled = static_cast<unsigned __int128>(counts[i]) * scale;
    units[i] = static_cast<std::uint64_t>(scaled / total);
    remainders.emplace_back(static_cast<std::uint64_t>(scaled % total), i);
    assigned += units[i];
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < scale; ++k, ++assigned) ++units[remainders[k].second];
  const double unit = 100.0 / static_cast<double>(scale);
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(units[i]) * unit;
  return out;
}

struct HistogramBin {
  std::string label;
  std::uint64_t count = 0;
  double percent = 0.0;  // one decimal, largest-remainder rounded

  bool operator==(const HistogramBin&) const = default;
};

inline constexpr std::string_view kUnresolvedLabel = "(unresolved)";

/// Descriptive profile of a parsed extract.
struct DatasetProfile {
  std::uint64_t parsed_rows = 0;
  std::uint64_t included = 0;
  std::uint64_t excluded = 0;
  std::vector<std::pair<std::string, std::uint64_t>> exclusions;  // by reason, every reason listed
  std::vector<HistogramBin> by_year;
  std::vector<HistogramBin> by_size_class;  // scheme order, empty classes included
  std::vector<HistogramBin> by_province;    // sorted by label; unresolved cities last
  std::vector<HistogramBin> by_sector;

  bool operator==(const DatasetProfile&) const = default;
};

namespace detail {

inline std::vector<HistogramBin> make_bins(std::vector<std::pair<std::string, std::uint64_t>> entries) {
  std::vector<std::uint64_t> counts;
  for (const auto& e : entries) counts.push_back(e.second);
  const auto pct = rounded_percentages(counts, 1);
  std::vector<HistogramBin> bins;
  for (std::size_t i = 0; i < entries.size(); ++i) bins.push_back({std::move(entries[i].first), entries[i].second, pct[i]});
  return bins;
}

}  // namespace detail

inline DatasetProfile dataset_profile(std::span<const FirmRecord> records, std::span<const IngestIssue> issues,
                                      const Taxonomy& taxonomy) {
  DatasetProfile p;
  p.included = records.size();
  p.excluded = issues.size();
  p.parsed_rows = p.included + p.excluded;
  for (auto reason : kAllIssueReasons) {
    const auto n = std::count_if(issues.begin(), issues.end(), [&](const IngestIssue& i) { return i.reason == reason; });
    p.exclusions.emplace_back(std::string(issue_reason_name(reason)), static_cast<std::uint64_t>(n));
  }

  std::map<int, std::uint64_t> years;
  std::map<std::string, std::uint64_t> sizes;
  std::map<std::string, std::uint64_t> provinces;
  std::uint64_t unresolved = 0;
  std::array<std::uint64_t, 4> sectors{};
  for (const auto& r : records) {
    ++years[r.year];
    ++sizes[taxonomy.sizes.classify(r.employees)];
    const auto city = taxonomy.geo.normalize_city(r.city_raw);
    if (auto province = taxonomy.geo.resolve(city.name, 1)) {
      ++provinces[*province];
    } else {
      ++unresolved;
    }
    ++sectors[static_cast<std::size_t>(taxonomy.sectors.classify(r.nace).sector)];
  }

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  for (const auto& [y, n] : years) entries.emplace_back(std::to_string(y), n);
  p.by_year = detail::make_bins(std::move(entries));

  entries.clear();
  for (const auto& c : taxonomy.sizes.classes()) entries.emplace_back(c.label, sizes[c.label]);
  p.by_size_class = detail::make_bins(std::move(entries));

  entries.assign(provinces.begin(), provinces.end());
  if (unresolved) entries.emplace_back(std::string(kUnresolvedLabel), unresolved);
  p.by_province = detail::make_bins(std::move(entries));

  entries.clear();
  for (auto s : kAllSectorClasses) entries.emplace_back(std::string(sector_name(s)), sectors[static_cast<std::size_t>(s)]);
  p.by_sector = detail::make_bins(std::move(entries));
  return p;
}

/// Issues as CSV: row, field, reason, detail.
inline void write_issues_csv(std::ostream& out, std::span<const IngestIssue> issues) {
  out << "row,field,reason,detail\n";
  for (const auto& i : issues) {
    csv::write_row(out, {std::to_string(i.row), i.field, std::string(issue_reason_name(i.reason)), i.detail});
  }
}

}  // namespace ths
