#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ths::csv {

/// Streaming reader for comma-separated, double-quote escaped text.
/// Quoted fields may contain commas, doubled quotes and line breaks.
class Reader {
 public:
  enum class Status { kRow, kMalformed, kEnd };

  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads one record into `fields`. A malformed record (stray characters
  /// after a closing quote, or a quote left open at end of input) is consumed
  /// up to the end of its line and reported as kMalformed.
  Status next(std::vector<std::string>& fields) {
    fields.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return Status::kEnd;
    if (first_ && in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (std::string_view(bom, 3) != "\xEF\xBB\xBF") in_.seekg(-3, std::ios::cur);
    }
    first_ = false;

    std::string field;
    bool malformed = false;
    for (;;) {
      int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        fields.push_back(std::move(field));
        return malformed ? Status::kMalformed : Status::kRow;
      }
      if (c == '"' && field.empty()) {
        if (!read_quoted(field)) {
          fields.push_back(std::move(field));
          return Status::kMalformed;
        }
        c = in_.get();
        if (c != ',' && c != '\n' && c != '\r' && c != std::char_traits<char>::eof()) {
          malformed = true;
          skip_line();
          fields.push_back(std::move(field));
          return Status::kMalformed;
        }
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\n' || c == '\r' || c == std::char_traits<char>::eof()) {
        if (c == '\r' && in_.peek() == '\n') in_.get();
        fields.push_back(std::move(field));
        return malformed ? Status::kMalformed : Status::kRow;
      } else {
        field.push_back(static_cast<char>(c));
      }
    }
  }

 private:
  // Reads the body of a quoted field; false when input ends inside the quotes.
  bool read_quoted(std::string& field) {
    for (;;) {
      int c = in_.get();
      if (c == std::char_traits<char>::eof()) return false;
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          return true;
        }
      } else {
        field.push_back(static_cast<char>(c));
      }
    }
  }

  void skip_line() {
    for (int c = in_.get(); c != std::char_traits<char>::eof() && c != '\n'; c = in_.get()) {
    }
  }

  std::istream& in_;
  bool first_ = true;
};

inline std::string escape(std::string_view field) {
  const bool quote = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!quote) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

inline void write_row(std::ostream& out, std::initializer_list<std::string> fields) {
  write_row(out, std::span<const std::string>(fields.begin(), fields.size()));
}

}  // namespace ths::csv
