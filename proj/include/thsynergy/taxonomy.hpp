#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "thsynergy/error.hpp"
#include "thsynergy/text.hpp"

namespace ths {

// ---------------------------------------------------------------------------
// Size classes

struct SizeClass {
  std::string label;
  std::int64_t min_employees = 0;
  std::optional<std::int64_t> max_employees;  // inclusive; nullopt = unbounded

  bool contains(std::int64_t n) const { return n >= min_employees && (!max_employees || n <= *max_employees); }
  bool operator==(const SizeClass&) const = default;
};

/// Contiguous partition of employee counts 0..inf into labelled classes.
/// Missing counts fall into the class that contains zero.
class SizeClassScheme {
 public:
  explicit SizeClassScheme(std::vector<SizeClass> classes) : classes_(std::move(classes)) {
    if (classes_.empty()) throw ConfigError("size class scheme is empty");
    std::int64_t expected = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      const auto& c = classes_[i];
      if (c.label.empty()) throw ConfigError("size class without label");
      if (c.min_employees != expected) {
        throw ConfigError("size classes are not contiguous at '" + c.label + "'");
      }
      const bool last = i + 1 == classes_.size();
      if (last != !c.max_employees.has_value()) {
        throw ConfigError("only the last size class may be unbounded");
      }
      if (c.max_employees) {
        if (*c.max_employees < c.min_employees) throw ConfigError("empty size class '" + c.label + "'");
        expected = *c.max_employees + 1;
      }
    }
  }

  /// The employee-size classes used for the Chinese and Dutch firm data.
  static SizeClassScheme standard() {
    return SizeClassScheme({{"0, 1, or n.a.", 0, 1},
                            {"2-4", 2, 4},
                            {"5-9", 5, 9},
                            {"10-19", 10, 19},
                            {"20-49", 20, 49},
                            {"50-99", 50, 99},
                            {"100-199", 100, 199},
                            {"200-499", 200, 499},
                            {"500-749", 500, 749},
                            {"750-999", 750, 999},
                            {"> 1000", 1000, std::nullopt}});
  }

  /// Columns: label, min, max (empty or "inf" for the unbounded top class).
  static SizeClassScheme from_tsv(std::istream& in) {
    std::vector<SizeClass> classes;
    for (const auto& row : text::read_tsv(in)) {
      if (row.fields.size() < 2 || row.fields.size() > 3) {
        throw ConfigError("size classes line " + std::to_string(row.line) + ": expected label, min, max");
      }
      SizeClass c;
      c.label = row.fields[0];
      auto lo = text::parse_int<std::int64_t>(row.fields[1]);
      if (!lo) throw ConfigError("size classes line " + std::to_string(row.line) + ": bad minimum");
      c.min_employees = *lo;
      if (row.fields.size() == 3 && !row.fields[2].empty() && row.fields[2] != "inf") {
        auto hi = text::parse_int<std::int64_t>(row.fields[2]);
        if (!hi) throw ConfigError("size classes line " + std::to_string(row.line) + ": bad maximum");
        c.max_employees = *hi;
      }
      classes.push_back(std::move(c));
    }
    return SizeClassScheme(std::move(classes));
  }

  static SizeClassScheme from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    return from_tsv(in);
  }

  std::span<const SizeClass> classes() const { return classes_; }

  const std::string& classify(std::optional<std::int64_t> employees) const {
    const std::int64_t n = employees.value_or(0);
    if (n < 0) throw ValidationError("negative employee count");
    for (const auto& c : classes_) {
      if (c.contains(n)) return c.label;
    }
    throw ConfigError("size class scheme does not cover " + std::to_string(n));  // unreachable for valid schemes
  }

  bool operator==(const SizeClassScheme&) const = default;

 private:
  std::vector<SizeClass> classes_;
};

inline const std::string& size_class(const SizeClassScheme& scheme, std::optional<std::int64_t> employees) {
  return scheme.classify(employees);
}

// ---------------------------------------------------------------------------
// NACE codes and sector classes

enum class SectorClass : std::uint8_t {
  kHighTechManufacturing,
  kMediumHighTechManufacturing,
  kKnowledgeIntensiveServices,
  kOther,
};

inline constexpr std::array<SectorClass, 4> kAllSectorClasses = {
    SectorClass::kHighTechManufacturing, SectorClass::kMediumHighTechManufacturing,
    SectorClass::kKnowledgeIntensiveServices, SectorClass::kOther};

constexpr std::string_view sector_name(SectorClass c) {
  switch (c) {
    case SectorClass::kHighTechManufacturing: return "high-tech manufacturing";
    case SectorClass::kMediumHighTechManufacturing: return "medium-high-tech manufacturing";
    case SectorClass::kKnowledgeIntensiveServices: return "knowledge-intensive services";
    case SectorClass::kOther: return "other";
  }
  return "?";
}

struct SectorAssignment {
  SectorClass sector = SectorClass::kOther;
  bool high_tech_services = false;  // only ever set together with kKnowledgeIntensiveServices

  bool operator==(const SectorAssignment&) const = default;
};

/// Strips dots and surrounding whitespace; the result must be 2-4 digits.
inline std::string normalize_nace(std::string_view raw) {
  std::string code;
  for (char c : text::trim(raw)) {
    if (c == '.') continue;
    if (c < '0' || c > '9') throw ValidationError("non-numeric NACE code '" + std::string(raw) + "'");
    code.push_back(c);
  }
  if (code.size() < 2 || code.size() > 4) {
    throw ValidationError("NACE code must have 2-4 digits: '" + std::string(raw) + "'");
  }
  return code;
}

/// True when the first two digits name a NACE Rev. 2 division.
inline bool is_valid_nace_division(std::string_view code) {
  if (code.size() < 2) return false;
  const auto d = text::parse_int<int>(code.substr(0, 2));
  if (!d) return false;
  static constexpr std::array<bool, 100> kValid = [] {
    std::array<bool, 100> v{};
    constexpr std::pair<int, int> ranges[] = {{1, 3},   {5, 9},   {10, 33}, {35, 35}, {36, 39}, {41, 43},
                                              {45, 47}, {49, 53}, {55, 56}, {58, 63}, {64, 66}, {68, 68},
                                              {69, 75}, {77, 82}, {84, 84}, {85, 85}, {86, 88}, {90, 93},
                                              {94, 96}, {97, 98}, {99, 99}};
    for (auto [lo, hi] : ranges)
      for (int i = lo; i <= hi; ++i) v[static_cast<std::size_t>(i)] = true;
    return v;
  }();
  return *d >= 0 && *d < 100 && kValid[static_cast<std::size_t>(*d)];
}

/// Validates a raw code and checks its division; returns the normalized code.
inline std::string validate_nace(std::string_view raw) {
  auto code = normalize_nace(raw);
  if (!is_valid_nace_division(code)) throw ValidationError("unknown NACE division '" + code.substr(0, 2) + "'");
  return code;
}

/// Truncates a code to `digits` (2..4); this is the label on the technology axis.
inline std::string tech_category(std::string_view nace, int digits) {
  if (digits < 2 || digits > 4) throw ConfigError("technology digits must be 2, 3 or 4");
  const auto code = normalize_nace(nace);
  if (code.size() < static_cast<std::size_t>(digits)) {
    throw ValidationError("NACE code '" + code + "' shorter than " + std::to_string(digits) + " digits");
  }
  return code.substr(0, static_cast<std::size_t>(digits));
}

/// One classification rule: a digit prefix, or an inclusive range of
/// equal-length prefixes ("64-66").
struct SectorRule {
  std::string low;
  std::string high;
  SectorAssignment assignment;

  bool matches(std::string_view code) const {
    if (code.size() < low.size()) return false;
    const auto head = code.substr(0, low.size());
    return head >= low && head <= high;
  }
  bool operator==(const SectorRule&) const = default;
};

/// NACE code -> sector class. The most specific (longest) matching prefix
/// wins, so "30.1 -> other" and "30.3 -> high-tech" override "30 -> medium-high".
/// Among equally specific rules the first listed wins. Unmatched codes are "other".
class SectorScheme {
 public:
  explicit SectorScheme(std::vector<SectorRule> rules) : rules_(std::move(rules)) {
    for (const auto& r : rules_) {
      if (r.low.empty() || r.low.size() != r.high.size() || r.low > r.high) {
        throw ConfigError("malformed sector rule '" + r.low + "-" + r.high + "'");
      }
      if (r.assignment.high_tech_services && r.assignment.sector != SectorClass::kKnowledgeIntensiveServices) {
        throw ConfigError("high-tech services flag outside knowledge-intensive services");
      }
    }
  }

  /// Eurostat/OECD aggregations of NACE Rev. 2 for high/medium-high-tech
  /// manufacturing and knowledge-intensive services.
  static SectorScheme standard() {
    constexpr auto htm = SectorAssignment{SectorClass::kHighTechManufacturing, false};
    constexpr auto mhtm = SectorAssignment{SectorClass::kMediumHighTechManufacturing, false};
    constexpr auto kis = SectorAssignment{SectorClass::kKnowledgeIntensiveServices, false};
    constexpr auto hts = SectorAssignment{SectorClass::kKnowledgeIntensiveServices, true};
    constexpr auto other = SectorAssignment{SectorClass::kOther, false};
    return SectorScheme({{"21", "21", htm},   {"26", "26", htm},   {"303", "303", htm}, {"20", "20", mhtm},
                         {"254", "254", mhtm}, {"27", "29", mhtm}, {"30", "30", mhtm},  {"301", "301", other},
                         {"325", "325", mhtm}, {"50", "51", kis},  {"58", "58", kis},   {"59", "63", hts},
                         {"64", "66", kis},   {"69", "71", kis},   {"72", "72", hts},   {"73", "75", kis},
                         {"78", "78", kis},   {"80", "80", kis},   {"84", "85", kis},   {"86", "88", kis},
                         {"90", "93", kis}});
  }

  /// Columns: pattern ("21", "30.3", "64-66"), class (htm | mhtm | kis | hts | other).
  static SectorScheme from_tsv(std::istream& in) {
    std::vector<SectorRule> rules;
    for (const auto& row : text::read_tsv(in)) {
      const auto where = "sector rules line " + std::to_string(row.line);
      if (row.fields.size() != 2) throw ConfigError(where + ": expected pattern and class");
      SectorRule rule;
      const auto bounds = text::split(row.fields[0], '-');
      if (bounds.size() > 2) throw ConfigError(where + ": bad pattern");
      try {
        rule.low = normalize_prefix(bounds[0]);
        rule.high = normalize_prefix(bounds.back());
      } catch (const ValidationError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      rule.assignment = parse_class(row.fields[1], where);
      rules.push_back(std::move(rule));
    }
    return SectorScheme(std::move(rules));
  }

  static SectorScheme from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    return from_tsv(in);
  }

  std::span<const SectorRule> rules() const { return rules_; }

  SectorAssignment classify(std::string_view nace) const {
    const auto code = normalize_nace(nace);
    const SectorRule* best = nullptr;
    for (const auto& r : rules_) {
      if (r.matches(code) && (!best || r.low.size() > best->low.size())) best = &r;
    }
    return best ? best->assignment : SectorAssignment{};
  }

  bool operator==(const SectorScheme&) const = default;

 private:
  static std::string normalize_prefix(std::string_view s) {
    std::string out;
    for (char c : text::trim(s)) {
      if (c == '.') continue;
      if (c < '0' || c > '9') throw ValidationError("non-numeric prefix '" + std::string(s) + "'");
      out.push_back(c);
    }
    if (out.empty() || out.size() > 4) throw ValidationError("prefix must have 1-4 digits");
    return out;
  }

  static SectorAssignment parse_class(std::string_view s, const std::string& where) {
    if (s == "htm") return {SectorClass::kHighTechManufacturing, false};
    if (s == "mhtm") return {SectorClass::kMediumHighTechManufacturing, false};
    if (s == "kis") return {SectorClass::kKnowledgeIntensiveServices, false};
    if (s == "hts") return {SectorClass::kKnowledgeIntensiveServices, true};
    if (s == "other") return {SectorClass::kOther, false};
    throw ConfigError(where + ": unknown sector class '" + std::string(s) + "'");
  }

  std::vector<SectorRule> rules_;
};

inline SectorAssignment classify_sector(const SectorScheme& scheme, std::string_view nace) {
  return scheme.classify(nace);
}

/// Subsets of firms selected for a sector-specific run.
enum class SectorFilter : std::uint8_t { kAll, kHighMediumTechManufacturing, kKnowledgeIntensiveServices, kHighTechServices };

inline SectorFilter parse_sector_filter(std::string_view s) {
  if (s == "all") return SectorFilter::kAll;
  if (s == "hmtm") return SectorFilter::kHighMediumTechManufacturing;
  if (s == "kis") return SectorFilter::kKnowledgeIntensiveServices;
  if (s == "hts") return SectorFilter::kHighTechServices;
  throw ConfigError("unknown sector filter '" + std::string(s) + "' (expected all, hmtm, kis, hts)");
}

constexpr std::string_view sector_filter_name(SectorFilter f) {
  switch (f) {
    case SectorFilter::kAll: return "all sectors";
    case SectorFilter::kHighMediumTechManufacturing: return "high- and medium-tech manufacturing";
    case SectorFilter::kKnowledgeIntensiveServices: return "knowledge-intensive services";
    case SectorFilter::kHighTechServices: return "high-tech services";
  }
  return "?";
}

constexpr std::string_view sector_filter_key(SectorFilter f) {
  switch (f) {
    case SectorFilter::kAll: return "all";
    case SectorFilter::kHighMediumTechManufacturing: return "hmtm";
    case SectorFilter::kKnowledgeIntensiveServices: return "kis";
    case SectorFilter::kHighTechServices: return "hts";
  }
  return "?";
}

inline bool sector_selected(SectorFilter f, SectorAssignment a) {
  switch (f) {
    case SectorFilter::kAll: return true;
    case SectorFilter::kHighMediumTechManufacturing:
      return a.sector == SectorClass::kHighTechManufacturing || a.sector == SectorClass::kMediumHighTechManufacturing;
    case SectorFilter::kKnowledgeIntensiveServices: return a.sector == SectorClass::kKnowledgeIntensiveServices;
    case SectorFilter::kHighTechServices: return a.high_tech_services;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Geography

/// Result of city-name standardization.
struct CityName {
  std::string name;
  bool known = false;  // false: not in the hierarchy or alias table; passed through

  bool operator==(const CityName&) const = default;
};

/// Administrative levels: 1 = province, 2 = prefecture, 3 = city.
struct GeoPath {
  std::string prefecture;  // empty when the prefecture is not known
  std::string province;
};

/// Alias table plus city -> (prefecture, province) paths.
class GeoHierarchy {
 public:
  GeoHierarchy() = default;

  /// `hierarchy` columns: city, prefecture, province (prefecture may be empty).
  /// `aliases` columns: raw name, canonical city.
  static GeoHierarchy from_tsv(std::istream& hierarchy, std::istream* aliases = nullptr) {
    GeoHierarchy geo;
    for (const auto& row : text::read_tsv(hierarchy)) {
      const auto where = "geo hierarchy line " + std::to_string(row.line);
      if (row.fields.size() != 3) throw ConfigError(where + ": expected city, prefecture, province");
      const auto& city = row.fields[0];
      if (city.empty() || row.fields[2].empty()) throw ConfigError(where + ": empty city or province");
      if (!geo.paths_.emplace(city, GeoPath{row.fields[1], row.fields[2]}).second) {
        throw ConfigError(where + ": duplicate city '" + city + "'");
      }
      auto [it, inserted] = geo.lookup_.emplace(text::fold(city), city);
      if (!inserted && it->second != city) throw ConfigError(where + ": city differs from '" + it->second + "' only by case");
    }
    if (aliases) {
      for (const auto& row : text::read_tsv(*aliases)) geo.add_alias(row.fields.at(0), row.fields.size() > 1 ? row.fields[1] : "", row.line);
    }
    return geo;
  }

  static GeoHierarchy from_files(const std::string& hierarchy_path, const std::string& aliases_path = {}) {
    std::ifstream h(hierarchy_path, std::ios::binary);
    if (!h) throw ConfigError("cannot open " + hierarchy_path);
    if (aliases_path.empty()) return from_tsv(h);
    std::ifstream a(aliases_path, std::ios::binary);
    if (!a) throw ConfigError("cannot open " + aliases_path);
    return from_tsv(h, &a);
  }

  /// Adds user-supplied alias rows on top of the loaded table.
  void extend_aliases(std::istream& aliases) {
    for (const auto& row : text::read_tsv(aliases)) add_alias(row.fields.at(0), row.fields.size() > 1 ? row.fields[1] : "", row.line);
  }

  /// Trims and case-folds, then resolves aliases and canonical names.
  /// Unknown names come back trimmed, with `known == false`.
  CityName normalize_city(std::string_view raw) const {
    const auto trimmed = text::trim(raw);
    if (trimmed.empty()) throw ValidationError("empty city name");
    auto it = lookup_.find(text::fold(trimmed));
    if (it != lookup_.end()) return {it->second, true};
    return {std::string(trimmed), false};
  }

  /// Region label of a canonical city at `level`; nullopt when unresolved.
  std::optional<std::string> resolve(std::string_view city, int level) const {
    if (level < 1 || level > 3) throw ConfigError("geographic level must be 1, 2 or 3");
    if (level == 3) return std::string(city);
    auto it = paths_.find(std::string(city));
    if (it == paths_.end()) return std::nullopt;
    const auto& label = level == 1 ? it->second.province : it->second.prefecture;
    if (label.empty()) return std::nullopt;
    return label;
  }

  std::vector<std::string> regions(int level) const {
    std::vector<std::string> out;
    for (const auto& [city, path] : paths_) {
      const auto& label = level == 1 ? path.province : level == 2 ? path.prefecture : city;
      if (!label.empty()) out.push_back(label);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<std::string> cities() const {
    std::vector<std::string> out;
    for (const auto& [city, path] : paths_) out.push_back(city);
    return out;
  }

 private:
  void add_alias(const std::string& raw, const std::string& canonical, std::size_t line) {
    const auto where = "geo aliases line " + std::to_string(line);
    if (raw.empty() || canonical.empty()) throw ConfigError(where + ": expected raw name and canonical city");
    if (!paths_.contains(canonical)) throw ConfigError(where + ": alias target '" + canonical + "' is not a known city");
    const auto key = text::fold(raw);
    auto it = lookup_.find(key);
    if (it != lookup_.end() && it->second != canonical) {
      throw ConfigError(where + ": '" + raw + "' already maps to '" + it->second + "'");
    }
    lookup_[key] = canonical;
  }

  std::map<std::string, GeoPath> paths_;
  std::unordered_map<std::string, std::string> lookup_;  // folded name -> canonical city
};

/// Bundle of the three classification schemes.
struct Taxonomy {
  SizeClassScheme sizes = SizeClassScheme::standard();
  SectorScheme sectors = SectorScheme::standard();
  GeoHierarchy geo;

  /// Loads size_classes.tsv, nace_sectors.tsv, geo_hierarchy.tsv and geo_aliases.tsv from `dir`.
  static Taxonomy from_directory(const std::string& dir) {
    return {SizeClassScheme::from_file(dir + "/size_classes.tsv"), SectorScheme::from_file(dir + "/nace_sectors.tsv"),
            GeoHierarchy::from_files(dir + "/geo_hierarchy.tsv", dir + "/geo_aliases.tsv")};
  }
};

}  // namespace ths
