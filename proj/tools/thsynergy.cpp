// thsynergy: synergy (three-way transmission) analysis of firm records.
//
// Exit codes: 0 success, 1 data error, 2 configuration error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "thsynergy.hpp"

namespace {

struct TaxonomyOptions {
  std::string data_dir;
  std::string geo_path;
  std::string aliases_path;

  void add_to(CLI::App& app) {
    app.add_option("--data-dir", data_dir, "Directory with the bundled classification tables");
    app.add_option("--geo", geo_path, "Geography table (city, prefecture, province) replacing the bundled one");
    app.add_option("--aliases", aliases_path, "Extra city aliases (raw, canonical)");
  }

  ths::Taxonomy load() const {
    std::string dir = data_dir;
    if (dir.empty()) {
      const char* env = std::getenv("THSYNERGY_DATA");
      dir = env ? env : THSYNERGY_DATA_DIR;
    }
    ths::Taxonomy t{ths::SizeClassScheme::from_file(dir + "/size_classes.tsv"),
                    ths::SectorScheme::from_file(dir + "/nace_sectors.tsv"),
                    geo_path.empty() ? ths::GeoHierarchy::from_files(dir + "/geo_hierarchy.tsv", dir + "/geo_aliases.tsv")
                                     : ths::GeoHierarchy::from_files(geo_path)};
    if (!aliases_path.empty()) {
      std::ifstream in(aliases_path, std::ios::binary);
      if (!in) throw ths::ConfigError("cannot open " + aliases_path);
      t.geo.extend_aliases(in);
    }
    return t;
  }
};

std::vector<std::string> split_formats(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : ths::text::split(s, ',')) {
    auto t = ths::text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

ths::LabeledSeries read_series(const std::string& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ths::ConfigError("cannot open " + path);
  ths::csv::Reader reader(in);
  std::vector<std::string> header;
  if (reader.next(header) != ths::csv::Reader::Status::kRow || header.size() < 2) {
    throw ths::ConfigError(path + ": expected a header with a label and a value column");
  }
  std::size_t value_col = 1;
  if (!column.empty()) {
    auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) throw ths::ConfigError(path + ": no column '" + column + "'");
    value_col = static_cast<std::size_t>(it - header.begin());
  }
  const auto level_it = std::find(header.begin(), header.end(), "level");
  std::vector<std::string> fields;
  ths::LabeledSeries series;
  std::size_t row = 0;
  for (auto status = reader.next(fields); status != ths::csv::Reader::Status::kEnd; status = reader.next(fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (status != ths::csv::Reader::Status::kRow || fields.size() != header.size()) {
      throw ths::DataError(path + ": malformed row " + std::to_string(row));
    }
    if (level_it != header.end() && fields[static_cast<std::size_t>(level_it - header.begin())] == "summary") continue;
    const auto value = ths::text::parse_double(fields[value_col]);
    if (!value) throw ths::DataError(path + ": row " + std::to_string(row) + " has no numeric value");
    series.emplace_back(std::string(ths::text::trim(fields[0])), *value);
  }
  return series;
}

int run(int argc, char** argv) {
  CLI::App app{"Synergy among geography, size and technology of firms, decomposed by region"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Decompose the three-way transmission by region");
  ths::AnalysisConfig config;
  std::string years = "2008-2010";
  std::string sector = "all";
  std::string formats = "txt,csv,json";
  std::string schema;
  TaxonomyOptions analyze_taxonomy;
  analyze->add_option("--input", config.inputs, "Firm CSV extract (repeatable)")->required();
  analyze->add_option("--schema", schema, "Schema file mapping fields to column headers");
  analyze->add_option("--years", years, "Inclusive year range, e.g. 2008-2010")->capture_default_str();
  analyze->add_option("--level", config.level, "Grouping level: 1 province, 2 prefecture")->capture_default_str();
  analyze->add_option("--digits", config.digits, "NACE digits on the technology axis (2-4)")->capture_default_str();
  analyze->add_option("--sector", sector, "all | hmtm | kis | hts")->capture_default_str();
  analyze->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--format", formats, "Report formats: txt,csv,json")->capture_default_str();
  analyze->add_option("--threads", config.threads, "Worker threads")->capture_default_str();
  analyze_taxonomy.add_to(*analyze);

  // compare
  auto* compare = app.add_subcommand("compare", "Sector report as a share of the all-sector report");
  std::string base_path, subset_path, compare_out;
  compare->add_option("--base", base_path, "report.json of the all-sector run")->required();
  compare->add_option("--subset", subset_path, "report.json of the sector-filtered run")->required();
  compare->add_option("--out", compare_out, "Write CSV here instead of stdout");

  // profile
  auto* profile = app.add_subcommand("profile", "Describe an extract: years, size classes, provinces, sectors");
  std::vector<std::string> profile_inputs;
  std::string profile_schema, profile_years, profile_out = ".", profile_formats = "csv,json";
  TaxonomyOptions profile_taxonomy;
  profile->add_option("--input", profile_inputs, "Firm CSV extract (repeatable)")->required();
  profile->add_option("--schema", profile_schema, "Schema file");
  profile->add_option("--years", profile_years, "Only profile this inclusive year range");
  profile->add_option("--out", profile_out, "Output directory")->capture_default_str();
  profile->add_option("--format", profile_formats, "csv,json")->capture_default_str();
  profile_taxonomy.add_to(*profile);

  // correlate
  auto* correlate = app.add_subcommand("correlate", "Pearson and Spearman correlation of two labeled series");
  std::string series_a, series_b, column_a, column_b, correlate_format = "text";
  correlate->add_option("--a", series_a, "CSV: label column first")->required();
  correlate->add_option("--b", series_b, "CSV: label column first")->required();
  correlate->add_option("--a-column", column_a, "Value column of --a (default: second column)");
  correlate->add_option("--b-column", column_b, "Value column of --b (default: second column)");
  correlate->add_option("--format", correlate_format, "text | json")->capture_default_str();

  // synthgen
  auto* synthgen = app.add_subcommand("synthgen", "Generate a synthetic extract from a population spec");
  std::string spec_path, synth_out, geo_out;
  std::optional<std::uint64_t> seed;
  synthgen->add_option("--spec", spec_path, "Population spec file")->required();
  synthgen->add_option("--out", synth_out, "Output CSV")->required();
  synthgen->add_option("--seed", seed, "Override the spec's seed");
  synthgen->add_option("--geo-out", geo_out, "Also write a geography table for the spec's regions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*analyze) {
    config.years = ths::parse_year_range(years);
    config.sector = ths::parse_sector_filter(sector);
    config.formats = split_formats(formats);
    if (!schema.empty()) config.schema_path = schema;
    const auto taxonomy = analyze_taxonomy.load();
    const auto result = ths::run_pipeline(config, taxonomy);
    if (std::find(config.formats.begin(), config.formats.end(), "txt") != config.formats.end()) {
      std::cout << ths::render_table(result.report, ths::TableStyle::kText);
    }
    std::cout << "included " << result.audit.included << " of " << result.audit.parsed_rows << " rows; outputs in "
              << config.out_dir << '\n';
  } else if (*compare) {
    std::ifstream a(base_path, std::ios::binary), b(subset_path, std::ios::binary);
    if (!a) throw ths::ConfigError("cannot open " + base_path);
    if (!b) throw ths::ConfigError("cannot open " + subset_path);
    const auto rows = ths::compare_reports(ths::read_report_json(a), ths::read_report_json(b));
    const auto text = ths::render_comparison_csv(rows);
    if (compare_out.empty()) {
      std::cout << text;
    } else {
      ths::write_text_file(compare_out, text);
    }
  } else if (*profile) {
    ths::AnalysisConfig reader;
    reader.inputs = profile_inputs;
    if (!profile_schema.empty()) reader.schema_path = profile_schema;
    const auto taxonomy = profile_taxonomy.load();
    auto parsed = ths::read_inputs(reader);
    std::uint64_t outside = 0;
    if (!profile_years.empty()) {
      auto window = ths::filter_window(parsed.records, ths::parse_year_range(profile_years));
      if (window.warning) std::cerr << "warning: " << *window.warning << '\n';
      outside = window.dropped;
      parsed.records = std::move(window.records);
    }
    auto p = ths::dataset_profile(parsed.records, parsed.issues, taxonomy);
    if (!profile_years.empty()) {
      p.exclusions.emplace_back(std::string(ths::kOutsideWindow), outside);
      p.excluded += outside;
      p.parsed_rows += outside;
    }
    const std::filesystem::path dir(profile_out);
    std::filesystem::create_directories(dir);
    for (const auto& f : split_formats(profile_formats)) {
      if (f == "csv") {
        ths::write_text_file(dir / "profile.csv", ths::profile_to_csv(p));
      } else if (f == "json") {
        ths::write_text_file(dir / "profile.json", ths::profile_to_json(p).dump(2) + "\n");
      } else {
        throw ths::ConfigError("unknown profile format '" + f + "'");
      }
    }
    std::ostringstream issues;
    ths::write_issues_csv(issues, parsed.issues);
    ths::write_text_file(dir / "issues.csv", issues.str());
    std::cout << "parsed " << p.parsed_rows << " rows: " << p.included << " included, " << p.excluded << " excluded\n";
  } else if (*correlate) {
    const auto c = ths::rank_correlations(read_series(series_a, column_a), read_series(series_b, column_b));
    if (correlate_format == "json") {
      std::cout << nlohmann::json{{"n", c.n}, {"pearson_r", c.pearson}, {"spearman_rho", c.spearman}}.dump(2) << '\n';
    } else if (correlate_format == "text") {
      std::cout << "n = " << c.n << "\nPearson r = " << ths::text::format_fixed(c.pearson, 3)
                << "\nSpearman rho = " << ths::text::format_fixed(c.spearman, 3) << '\n';
    } else {
      throw ths::ConfigError("unknown format '" + correlate_format + "'");
    }
  } else if (*synthgen) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw ths::ConfigError("cannot open " + spec_path);
    auto spec = ths::synth::parse_population_spec(in);
    if (seed) spec.seed = *seed;
    const auto records = ths::synth::generate_dataset(spec);
    std::ostringstream out;
    ths::synth::write_records_csv(out, records);
    ths::write_text_file(synth_out, out.str());
    if (!geo_out.empty()) {
      std::ostringstream geo;
      ths::synth::write_geo_hierarchy(geo, spec);
      ths::write_text_file(geo_out, geo.str());
    }
    std::cout << "wrote " << records.size() << " records to " << synth_out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ths::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ths::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
}
