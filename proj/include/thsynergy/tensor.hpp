#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "thsynergy/error.hpp"

namespace ths {

/// The three dimensions of the synergy tensor.
enum class Axis : std::uint8_t { kGeography = 0, kOrganization = 1, kTechnology = 2 };

inline constexpr std::array<Axis, 3> kAllAxes = {Axis::kGeography, Axis::kOrganization, Axis::kTechnology};

constexpr std::size_t axis_index(Axis a) { return static_cast<std::size_t>(a); }

constexpr std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::kGeography: return "geography";
    case Axis::kOrganization: return "organization";
    case Axis::kTechnology: return "technology";
  }
  return "?";
}

/// Ordered set of distinct category labels for one axis.
class Codebook {
 public:
  explicit Codebook(std::string axis_name = {}) : axis_name_(std::move(axis_name)) {}

  const std::string& axis_name() const { return axis_name_; }
  std::span<const std::string> labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  /// Index of `label`, appending it when unseen.
  std::uint32_t intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return it->second;
    const auto idx = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), idx);
    return idx;
  }

  std::optional<std::uint32_t> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Codebook& other) const {
    return axis_name_ == other.axis_name_ && labels_ == other.labels_;
  }

 private:
  std::string axis_name_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// One categorized observation: geography, organization (size class), technology.
struct CategorizedTriple {
  std::string geography;
  std::string organization;
  std::string technology;

  bool operator==(const CategorizedTriple&) const = default;
};

/// Non-negative integer counts over (geography x organization x technology).
///
/// Storage is sparse: only non-zero cells are kept, sorted lexicographically by
/// (g, o, t) index. Every summation over cells runs in that order.
class ContingencyTensor {
 public:
  using Index = std::array<std::uint32_t, 3>;

  struct Cell {
    Index index{};
    std::uint64_t count = 0;

    bool operator==(const Cell&) const = default;
  };

  ContingencyTensor(std::array<Codebook, 3> codebooks, std::vector<Cell> cells)
      : codebooks_(std::move(codebooks)), cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) { return a.index < b.index; });
    std::vector<Cell> merged;
    merged.reserve(cells_.size());
    for (const Cell& c : cells_) {
      for (std::size_t a = 0; a < 3; ++a) {
        if (c.index[a] >= codebooks_[a].size()) {
          throw ValidationError("cell index outside codebook for axis " + codebooks_[a].axis_name());
        }
      }
      if (c.count == 0) continue;
      if (!merged.empty() && merged.back().index == c.index) {
        merged.back().count += c.count;
      } else {
        merged.push_back(c);
      }
      total_ += c.count;
    }
    cells_ = std::move(merged);
  }

  const Codebook& codebook(Axis a) const { return codebooks_[axis_index(a)]; }
  const std::array<Codebook, 3>& codebooks() const { return codebooks_; }
  std::array<std::size_t, 3> shape() const {
    return {codebooks_[0].size(), codebooks_[1].size(), codebooks_[2].size()};
  }
  std::uint64_t total() const { return total_; }
  std::span<const Cell> cells() const { return cells_; }

  std::uint64_t count(std::uint32_t g, std::uint32_t o, std::uint32_t t) const {
    const Index key{g, o, t};
    auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                               [](const Cell& c, const Index& k) { return c.index < k; });
    return (it != cells_.end() && it->index == key) ? it->count : 0;
  }

  /// Copy with an extra, empty category appended to one axis.
  ContingencyTensor with_empty_category(Axis a, std::string_view label) const {
    auto books = codebooks_;
    const auto before = books[axis_index(a)].size();
    books[axis_index(a)].intern(label);
    if (books[axis_index(a)].size() == before) {
      throw ValidationError("category already present: " + std::string(label));
    }
    return ContingencyTensor(std::move(books), cells_);
  }

 private:
  std::array<Codebook, 3> codebooks_;
  std::vector<Cell> cells_;
  std::uint64_t total_ = 0;
};

/// Accumulates triples; codebooks hold the observed labels in first-seen order.
class TensorBuilder {
 public:
  TensorBuilder()
      : books_{Codebook(std::string(axis_name(Axis::kGeography))), Codebook(std::string(axis_name(Axis::kOrganization))),
               Codebook(std::string(axis_name(Axis::kTechnology)))} {}

  void add(const CategorizedTriple& r) {
    if (r.geography.empty() || r.organization.empty() || r.technology.empty()) {
      throw ValidationError("triple with empty label");
    }
    cells_.push_back(
        {{books_[0].intern(r.geography), books_[1].intern(r.organization), books_[2].intern(r.technology)}, 1});
  }

  std::size_t size() const { return cells_.size(); }

  ContingencyTensor build() && {
    if (cells_.empty()) throw DataError("empty dataset");
    return ContingencyTensor(std::move(books_), std::move(cells_));
  }

 private:
  std::array<Codebook, 3> books_;
  std::vector<ContingencyTensor::Cell> cells_;
};

inline ContingencyTensor build_tensor(std::span<const CategorizedTriple> records) {
  TensorBuilder builder;
  for (const auto& r : records) builder.add(r);
  return std::move(builder).build();
}

}  // namespace ths
