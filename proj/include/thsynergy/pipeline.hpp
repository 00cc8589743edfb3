#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "thsynergy/decomposition.hpp"
#include "thsynergy/error.hpp"
#include "thsynergy/ingestion.hpp"
#include "thsynergy/report.hpp"
#include "thsynergy/taxonomy.hpp"

namespace ths {

/// One analysis run: ingest -> filter -> classify -> decompose -> report.
struct AnalysisConfig {
  std::vector<std::string> inputs;
  std::optional<std::string> schema_path;  // standard headers when absent
  YearRange years{2008, 2010};
  int level = 1;   // grouping level: 1 = province, 2 = prefecture
  int digits = 2;  // NACE digits on the technology axis
  SectorFilter sector = SectorFilter::kAll;
  std::string out_dir = ".";
  std::vector<std::string> formats{"txt", "csv", "json"};
  unsigned threads = 1;

  void validate() const {
    if (inputs.empty()) throw ConfigError("no input files");
    if (level != 1 && level != 2) throw ConfigError("grouping level must be 1 or 2 (the geography axis is level 3)");
    if (digits < 2 || digits > 4) throw ConfigError("technology digits must be 2, 3 or 4");
    if (years.first > years.last) throw ConfigError("empty year range");
    for (const auto& f : formats) {
      if (f != "txt" && f != "csv" && f != "json") throw ConfigError("unknown output format '" + f + "'");
    }
  }
};

inline constexpr std::string_view kOutsideWindow = "outside year window";
inline constexpr std::string_view kSectorFiltered = "sector filter";

/// Row accounting for one run. included + excluded_total() == parsed_rows.
struct Audit {
  std::uint64_t parsed_rows = 0;
  std::uint64_t included = 0;
  std::vector<std::pair<std::string, std::uint64_t>> excluded;  // by reason, fixed order

  std::uint64_t excluded_total() const {
    std::uint64_t n = 0;
    for (const auto& e : excluded) n += e.second;
    return n;
  }
};

struct AnalysisResult {
  SynergyReport report;
  Audit audit;
  std::vector<IngestIssue> issues;  // parse issues followed by unresolved geography
};

/// Runs the analysis over already-parsed records.
inline AnalysisResult analyze_records(const ParseResult& parsed, const AnalysisConfig& config, const Taxonomy& taxonomy) {
  config.validate();
  AnalysisResult result;
  result.issues = parsed.issues;

  std::uint64_t outside = 0;
  std::uint64_t filtered = 0;
  std::vector<GroupedTriple> triples;
  triples.reserve(parsed.records.size());
  std::unordered_map<std::string, CityName> city_cache;
  for (const auto& r : parsed.records) {
    if (!config.years.contains(r.year)) {
      ++outside;
      continue;
    }
    if (!sector_selected(config.sector, taxonomy.sectors.classify(r.nace))) {
      ++filtered;
      continue;
    }
    auto it = city_cache.find(r.city_raw);
    if (it == city_cache.end()) it = city_cache.emplace(r.city_raw, taxonomy.geo.normalize_city(r.city_raw)).first;
    const auto& city = it->second;
    auto group = taxonomy.geo.resolve(city.name, config.level);
    if (!group) {
      result.issues.push_back({r.row, "city", IssueReason::kUnresolvedGeography,
                               "'" + city.name + "' has no " + level_name(config.level)});
      continue;
    }
    triples.push_back({std::move(*group),
                       {city.name, taxonomy.sizes.classify(r.employees), tech_category(r.nace, config.digits)}});
  }

  auto& audit = result.audit;
  audit.parsed_rows = parsed.parsed_rows;
  audit.included = triples.size();
  for (auto reason : kAllIssueReasons) {
    const auto n = std::count_if(result.issues.begin(), result.issues.end(),
                                 [&](const IngestIssue& i) { return i.reason == reason; });
    audit.excluded.emplace_back(std::string(issue_reason_name(reason)), static_cast<std::uint64_t>(n));
  }
  audit.excluded.emplace_back(std::string(kOutsideWindow), outside);
  audit.excluded.emplace_back(std::string(kSectorFiltered), filtered);

  if (triples.empty()) throw DataError("empty post-filter dataset");

  DecomposeOptions options;
  options.grouping_level = config.level;
  options.geography_level = 3;
  options.threads = config.threads;
  options.filter_description = std::string(sector_filter_name(config.sector)) + ", " + std::to_string(config.years.first) +
                               "-" + std::to_string(config.years.last);
  result.report = decompose(triples, options);
  return result;
}

inline nlohmann::json audit_to_json(const Audit& audit, const AnalysisConfig& config) {
  nlohmann::json excluded = nlohmann::json::object();
  for (const auto& [reason, n] : audit.excluded) excluded[reason] = n;
  return {{"config",
           {{"inputs", config.inputs},
            {"schema", config.schema_path ? nlohmann::json(*config.schema_path) : nlohmann::json(nullptr)},
            {"years", std::to_string(config.years.first) + "-" + std::to_string(config.years.last)},
            {"level", config.level},
            {"digits", config.digits},
            {"sector", std::string(sector_filter_key(config.sector))},
            {"formats", config.formats}}},
          {"parsed_rows", audit.parsed_rows},
          {"included", audit.included},
          {"excluded_total", audit.excluded_total()},
          {"excluded", excluded}};
}

/// Parses every input (row numbers continue across files).
inline ParseResult read_inputs(const AnalysisConfig& config) {
  const Schema schema = config.schema_path ? Schema::from_file(*config.schema_path) : Schema::standard();
  ParseResult all;
  for (const auto& path : config.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    auto part = parse_records(in, schema);
    const auto offset = all.parsed_rows;
    for (auto& r : part.records) {
      r.row += offset;
      all.records.push_back(std::move(r));
    }
    for (auto& i : part.issues) {
      i.row += offset;
      all.issues.push_back(std::move(i));
    }
    all.parsed_rows += part.parsed_rows;
  }
  return all;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

/// Writes report.{txt,csv,json} (per config.formats), regions_level<L>.csv,
/// audit.json and issues.csv into config.out_dir.
inline void write_outputs(const AnalysisResult& result, const AnalysisConfig& config) {
  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& f : config.formats) {
    const auto style = f == "txt" ? TableStyle::kText : f == "csv" ? TableStyle::kCsv : TableStyle::kJson;
    write_text_file(dir / ("report." + f), render_table(result.report, style));
  }
  write_text_file(dir / ("regions_level" + std::to_string(config.level) + ".csv"), export_region_values(result.report));
  write_text_file(dir / "audit.json", audit_to_json(result.audit, config).dump(2) + "\n");
  std::ostringstream issues;
  write_issues_csv(issues, result.issues);
  write_text_file(dir / "issues.csv", issues.str());
}

inline AnalysisResult run_pipeline(const AnalysisConfig& config, const Taxonomy& taxonomy) {
  config.validate();
  auto result = analyze_records(read_inputs(config), config, taxonomy);
  write_outputs(result, config);
  return result;
}

}  // namespace ths
