#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "thsynergy/entropy.hpp"
#include "thsynergy/error.hpp"
#include "thsynergy/information.hpp"
#include "thsynergy/parallel.hpp"
#include "thsynergy/tensor.hpp"

namespace ths {

/// A categorized observation tagged with the group (region) it belongs to.
struct GroupedTriple {
  std::string group;
  CategorizedTriple triple;
};

/// One group's share of the national synergy.
struct GroupContribution {
  std::string label;
  std::uint64_t n = 0;           // records in the group
  InformationValue within;       // transmission within the group's own records
  InformationValue delta;        // (n / N) * within

  bool operator==(const GroupContribution&) const = default;
};

/// Result of decomposing the pooled transmission into within-group
/// contributions and the between-group residual.
struct SynergyReport {
  InformationValue total;
  std::uint64_t n_total = 0;
  std::vector<GroupContribution> groups;  // ascending delta, ties by label
  InformationValue residual;              // total - sum of deltas
  std::optional<double> share_above_group;
  int level = 0;
  std::string filter_description;

  InformationValue sum_delta() const {
    InformationValue s;
    for (const auto& g : groups) s += g.delta;
    return s;
  }

  /// Percentage of the total realized inside the groups (sum of deltas / total).
  std::optional<double> share_within_groups() const {
    if (total.bits() == 0.0) return std::nullopt;
    return 100.0 * sum_delta().bits() / total.bits();
  }

  bool operator==(const SynergyReport&) const = default;
};

/// (n_group / n_total) * within.
inline InformationValue delta_contribution(std::uint64_t n_group, std::uint64_t n_total, InformationValue within) {
  if (n_total == 0) throw DataError("empty dataset");
  if (n_group > n_total) throw ValidationError("group larger than the total set");
  return within * (static_cast<double>(n_group) / static_cast<double>(n_total));
}

/// 100 * residual / total, in percent.
inline double share_above_group(InformationValue residual, InformationValue total) {
  if (total.bits() == 0.0) throw DataError("undefined share");
  return 100.0 * residual.bits() / total.bits();
}

inline void sort_groups(std::vector<GroupContribution>& groups) {
  std::sort(groups.begin(), groups.end(), [](const GroupContribution& a, const GroupContribution& b) {
    if (a.delta.bits() != b.delta.bits()) return a.delta.bits() < b.delta.bits();
    return a.label < b.label;
  });
}

/// Assembles a report from an already-known total and per-group terms. Groups
/// with no records are dropped; the residual is total minus the sum of deltas
/// taken in presentation order.
inline SynergyReport assemble_report(InformationValue total, std::uint64_t n_total,
                                     std::vector<GroupContribution> groups, int level = 0,
                                     std::string filter_description = {}) {
  if (n_total == 0) throw DataError("empty dataset");
  std::erase_if(groups, [](const GroupContribution& g) { return g.n == 0; });
  sort_groups(groups);
  SynergyReport report;
  report.total = total;
  report.n_total = n_total;
  report.groups = std::move(groups);
  report.residual = total - report.sum_delta();
  if (total.bits() != 0.0) report.share_above_group = share_above_group(report.residual, total);
  report.level = level;
  report.filter_description = std::move(filter_description);
  return report;
}

/// Builds a group entry from a published (n, delta) pair, recovering the
/// within-group value as delta * N / n.
inline GroupContribution contribution_from_delta(std::string label, std::uint64_t n_group, std::uint64_t n_total,
                                                 InformationValue delta) {
  if (n_total == 0) throw DataError("empty dataset");
  GroupContribution g{std::move(label), n_group, {}, delta};
  if (n_group > 0) g.within = delta * (static_cast<double>(n_total) / static_cast<double>(n_group));
  return g;
}

struct DecomposeOptions {
  int grouping_level = 1;   // 1 = province, 2 = prefecture
  int geography_level = 3;  // level of the categories on the geography axis
  unsigned threads = 1;
  std::uint64_t min_group_size = 1;  // smaller groups are left to the residual
  std::string filter_description;
};

/// Decomposes the three-way transmission of the pooled records into groups:
///   T = T0 + sum_G (n_G / N) T_G
/// T0 is the residual. Group terms are computed independently (in parallel
/// when requested); the report does not depend on the thread count.
inline SynergyReport decompose(std::span<const GroupedTriple> records, const DecomposeOptions& options = {}) {
  if (options.grouping_level >= options.geography_level) {
    throw ConfigError("grouping level must be coarser than the geography axis level");
  }
  if (records.empty()) throw DataError("empty dataset");

  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> members;
  std::unordered_map<std::string, std::size_t> slot;
  TensorBuilder pooled;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.group.empty()) throw ValidationError("record without group label");
    pooled.add(r.triple);
    auto [it, inserted] = slot.emplace(r.group, labels.size());
    if (inserted) {
      labels.push_back(r.group);
      members.emplace_back();
    }
    members[it->second].push_back(i);
  }

  const auto n_total = static_cast<std::uint64_t>(records.size());
  std::vector<GroupContribution> groups(labels.size());
  InformationValue total;
  // Slot labels.size() holds the pooled computation.
  parallel_for(labels.size() + 1, options.threads, [&](std::size_t k) {
    if (k == labels.size()) {
      total = transmission3(std::move(pooled).build());
      return;
    }
    TensorBuilder builder;
    for (std::size_t i : members[k]) builder.add(records[i].triple);
    const auto n = static_cast<std::uint64_t>(builder.size());
    const auto within = transmission3(std::move(builder).build());
    groups[k] = {labels[k], n, within, delta_contribution(n, n_total, within)};
  });

  std::erase_if(groups, [&](const GroupContribution& g) { return g.n < options.min_group_size; });
  return assemble_report(total, n_total, std::move(groups), options.grouping_level, options.filter_description);
}

}  // namespace ths
