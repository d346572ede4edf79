#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mondrian/error.hpp"

namespace mondrian {

struct CellCoord {
  int x = 0;  // column
  int y = 0;  // row

  friend bool operator==(const CellCoord&, const CellCoord&) = default;
  friend auto operator<=>(const CellCoord& a, const CellCoord& b) {
    if (a.y != b.y) return a.y <=> b.y;
    return a.x <=> b.x;
  }
};

enum class SyntacticType : std::uint8_t {
  Empty,
  Integer,
  Float,
  Time,
  Date,
  UpperString,
  LowerString,
  TitleString,
  GenericString,
};

inline constexpr std::array<SyntacticType, 9> kAllTypes = {
    SyntacticType::Empty,       SyntacticType::Integer,     SyntacticType::Float,
    SyntacticType::Time,        SyntacticType::Date,        SyntacticType::UpperString,
    SyntacticType::LowerString, SyntacticType::TitleString, SyntacticType::GenericString,
};

inline const char* to_string(SyntacticType t) {
  switch (t) {
    case SyntacticType::Empty: return "empty";
    case SyntacticType::Integer: return "integer";
    case SyntacticType::Float: return "float";
    case SyntacticType::Time: return "time";
    case SyntacticType::Date: return "date";
    case SyntacticType::UpperString: return "upper";
    case SyntacticType::LowerString: return "lower";
    case SyntacticType::TitleString: return "title";
    case SyntacticType::GenericString: return "generic";
  }
  return "generic";
}

struct ColorRGB {
  std::uint8_t r = 255;
  std::uint8_t g = 255;
  std::uint8_t b = 255;

  friend bool operator==(const ColorRGB&, const ColorRGB&) = default;
};

/// One primary hue per fundamental type, shades per sub-type.
constexpr ColorRGB color_of(SyntacticType t) {
  switch (t) {
    case SyntacticType::Empty: return {255, 255, 255};
    case SyntacticType::Integer: return {0, 255, 255};
    case SyntacticType::Float: return {0, 0, 255};
    case SyntacticType::Time: return {0, 255, 0};
    case SyntacticType::Date: return {0, 128, 0};
    case SyntacticType::UpperString: return {128, 0, 0};
    case SyntacticType::LowerString: return {255, 128, 128};
    case SyntacticType::TitleString: return {255, 75, 75};
    case SyntacticType::GenericString: return {255, 0, 0};
  }
  return {255, 0, 0};
}

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Consumes a run of digits; returns the count.
inline std::size_t eat_digits(std::string_view s, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < s.size() && is_digit(s[pos])) ++pos;
  return pos - start;
}

// Integer part: plain digits or 1-3 digits followed by ",ddd" groups.
inline bool eat_integer_part(std::string_view s, std::size_t& pos) {
  std::size_t first = eat_digits(s, pos);
  if (first == 0) return false;
  if (first <= 3 && pos < s.size() && s[pos] == ',') {
    std::size_t save = pos;
    bool grouped = false;
    while (pos + 3 < s.size() + 0 && s[pos] == ',' && is_digit(s[pos + 1]) &&
           is_digit(s[pos + 2]) && is_digit(s[pos + 3]) &&
           (pos + 4 == s.size() || !is_digit(s[pos + 4]))) {
      pos += 4;
      grouped = true;
    }
    if (!grouped) pos = save;
  }
  return true;
}

inline void eat_sign(std::string_view s, std::size_t& pos) {
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
}

inline bool looks_integer(std::string_view s) {
  std::size_t pos = 0;
  eat_sign(s, pos);
  if (!eat_integer_part(s, pos)) return false;
  return pos == s.size();
}

inline bool looks_float(std::string_view s) {
  std::size_t pos = 0;
  eat_sign(s, pos);
  bool mantissa = false;
  bool marker = false;
  if (pos < s.size() && is_digit(s[pos])) {
    eat_integer_part(s, pos);
    mantissa = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    marker = true;
    if (eat_digits(s, pos) > 0) mantissa = true;
  }
  if (!mantissa) return false;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    eat_sign(s, pos);
    if (eat_digits(s, pos) == 0) return false;
    marker = true;
  }
  return marker && pos == s.size();
}

inline int parse_small(std::string_view s, std::size_t from, std::size_t count) {
  int v = 0;
  for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

inline bool looks_time(std::string_view s) {
  std::size_t pos = 0;
  std::size_t hd = eat_digits(s, pos);
  if (hd < 1 || hd > 2) return false;
  int hours = parse_small(s, 0, hd);
  for (int part = 0; part < 2; ++part) {
    if (pos >= s.size() || s[pos] != ':') {
      if (part == 0) return false;
      break;
    }
    ++pos;
    std::size_t start = pos;
    if (eat_digits(s, pos) != 2 || parse_small(s, start, 2) > 59) return false;
  }
  std::string_view rest = trim(s.substr(pos));
  if (rest.empty()) return hours <= 23;
  if (rest.size() == 2 && (rest[1] == 'm' || rest[1] == 'M') &&
      (rest[0] == 'a' || rest[0] == 'A' || rest[0] == 'p' || rest[0] == 'P')) {
    return hours >= 1 && hours <= 12;
  }
  return false;
}

inline bool looks_date(std::string_view s) {
  std::size_t pos = 0;
  std::size_t n1 = eat_digits(s, pos);
  if (n1 == 0 || pos >= s.size()) return false;
  char sep = s[pos];
  if (sep != '/' && sep != '-' && sep != '.') return false;
  std::size_t p2 = ++pos;
  std::size_t n2 = eat_digits(s, pos);
  if (n2 == 0 || n2 > 2 || pos >= s.size() || s[pos] != sep) return false;
  std::size_t p3 = ++pos;
  std::size_t n3 = eat_digits(s, pos);
  if (pos != s.size()) return false;
  int a = parse_small(s, 0, n1);
  int b = parse_small(s, p2, n2);
  int c = n3 > 0 && n3 <= 4 ? parse_small(s, p3, n3) : -1;
  if (n1 == 4) {
    // YYYY-MM-DD
    return n3 >= 1 && n3 <= 2 && b >= 1 && b <= 12 && c >= 1 && c <= 31;
  }
  if (n1 > 2 || (n3 != 2 && n3 != 4)) return false;
  // D/M/YY or M/D/YY: both leading fields plausible, one of them a month.
  return a >= 1 && a <= 31 && b >= 1 && b <= 31 && std::min(a, b) <= 12;
}

enum class CaseClass { None, Upper, Lower, Title, Mixed };

inline CaseClass case_class(std::string_view s) {
  bool any_upper = false;
  bool any_lower = false;
  for (char c : s) {
    any_upper |= is_upper(c);
    any_lower |= is_lower(c);
  }
  if (!any_upper && !any_lower) return CaseClass::None;
  if (!any_lower) return CaseClass::Upper;
  if (!any_upper) return CaseClass::Lower;
  // Title: every token carrying letters starts with an uppercase letter.
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    bool has_alpha = false;
    while (i < s.size() && !is_space(s[i])) has_alpha |= is_alpha(s[i++]);
    if (start < i && has_alpha && !is_upper(s[start])) return CaseClass::Mixed;
  }
  return CaseClass::Title;
}

}  // namespace detail

/// Syntactic type of a raw cell literal. First matching rule wins:
/// empty, integer, float, time, date, upper/lower/title case, generic.
inline SyntacticType type_of(std::string_view raw) {
  using namespace detail;
  std::string_view s = trim(raw);
  if (s.empty()) return SyntacticType::Empty;
  if (looks_integer(s)) return SyntacticType::Integer;
  if (looks_float(s)) return SyntacticType::Float;
  if (looks_time(s)) return SyntacticType::Time;
  if (looks_date(s)) return SyntacticType::Date;
  switch (case_class(s)) {
    case CaseClass::Upper: return SyntacticType::UpperString;
    case CaseClass::Lower: return SyntacticType::LowerString;
    case CaseClass::Title: return SyntacticType::TitleString;
    default: return SyntacticType::GenericString;
  }
}

/// Rectangular matrix of typed cells; the "image" of one worksheet.
class TypedGrid {
 public:
  TypedGrid() = default;

  TypedGrid(int rows, int cols, std::vector<SyntacticType> types,
            std::vector<std::string> values = {})
      : rows_(rows), cols_(cols), types_(std::move(types)), values_(std::move(values)) {
    if (rows < 0 || cols < 0 || types_.size() != static_cast<std::size_t>(rows) * cols) {
      throw Error(ErrorCode::InvalidArgument, "grid dimensions do not match cell count");
    }
    if (values_.empty()) values_.resize(types_.size());
    if (values_.size() != types_.size()) {
      throw Error(ErrorCode::InvalidArgument, "grid values do not match cell count");
    }
  }

  /// Builds a grid from row strings where '.' or ' ' is empty and any other
  /// character is an integer-typed cell. Handy for fixtures.
  static TypedGrid from_mask(const std::vector<std::string>& rows) {
    int m = static_cast<int>(rows.size());
    int n = 0;
    for (const auto& r : rows) n = std::max(n, static_cast<int>(r.size()));
    std::vector<SyntacticType> types(static_cast<std::size_t>(m) * n, SyntacticType::Empty);
    std::vector<std::string> values(types.size());
    for (int y = 0; y < m; ++y) {
      for (int x = 0; x < static_cast<int>(rows[y].size()); ++x) {
        char c = rows[y][x];
        if (c != '.' && c != ' ') {
          types[static_cast<std::size_t>(y) * n + x] = SyntacticType::Integer;
          values[static_cast<std::size_t>(y) * n + x] = "1";
        }
      }
    }
    return TypedGrid(m, n, std::move(types), std::move(values));
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return types_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < cols_ && y < rows_;
  }
  SyntacticType type_at(int x, int y) const { return types_[index(x, y)]; }
  const std::string& value_at(int x, int y) const { return values_[index(x, y)]; }
  bool empty_at(int x, int y) const { return type_at(x, y) == SyntacticType::Empty; }

  const std::vector<SyntacticType>& types() const noexcept { return types_; }

  std::string file_id;
  std::string sheet_id;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * cols_ + static_cast<std::size_t>(x);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<SyntacticType> types_;
  std::vector<std::string> values_;
};

struct CsvDialect {
  char delimiter = ',';
  char quote = '"';
};

/// Splits delimited text into records (RFC 4180 quoting, CRLF or LF endings).
/// A trailing line terminator does not start a new record.
inline std::vector<std::vector<std::string>> split_records(std::string_view text,
                                                           CsvDialect dialect = {}) {
  if (dialect.delimiter == dialect.quote) {
    throw Error(ErrorCode::InvalidArgument, "delimiter and quote must differ");
  }
  std::vector<std::vector<std::string>> records;
  if (text.empty()) return records;
  // Skip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool pending = false;  // some content seen since the last record break
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == dialect.quote) {
        if (i + 1 < text.size() && text[i + 1] == dialect.quote) {
          field.push_back(c);
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == dialect.quote) {
      in_quotes = true;
      pending = true;
    } else if (c == dialect.delimiter) {
      record.push_back(std::move(field));
      field.clear();
      pending = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      pending = false;
    } else {
      field.push_back(c);
      pending = true;
    }
  }
  if (pending || in_quotes) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

/// Parses raw delimited text into a padded, typed grid.
inline TypedGrid parse_csv(std::string_view bytes, CsvDialect dialect = {},
                           std::string file_id = {}) {
  auto records = split_records(bytes, dialect);
  if (records.empty()) throw Error(ErrorCode::EmptyFile, "file has no rows");
  int rows = static_cast<int>(records.size());
  int cols = 0;
  for (const auto& r : records) cols = std::max(cols, static_cast<int>(r.size()));
  std::vector<SyntacticType> types(static_cast<std::size_t>(rows) * cols, SyntacticType::Empty);
  std::vector<std::string> values(types.size());
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < static_cast<int>(records[y].size()); ++x) {
      std::size_t k = static_cast<std::size_t>(y) * cols + x;
      types[k] = type_of(records[y][x]);
      values[k] = std::move(records[y][x]);
    }
  }
  TypedGrid grid(rows, cols, std::move(types), std::move(values));
  grid.sheet_id = std::filesystem::path(file_id).stem().string();
  grid.file_id = std::move(file_id);
  return grid;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return data;
}

inline TypedGrid load_csv(const std::filesystem::path& path, CsvDialect dialect = {}) {
  return parse_csv(read_file(path), dialect, path.filename().string());
}

/// Quotes a field when it contains the delimiter, the quote, or a line break.
inline std::string csv_escape(std::string_view field, CsvDialect dialect = {}) {
  bool needs = field.find_first_of(std::string{dialect.delimiter, dialect.quote, '\n', '\r'}) !=
               std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out(1, dialect.quote);
  for (char c : field) {
    if (c == dialect.quote) out.push_back(c);
    out.push_back(c);
  }
  out.push_back(dialect.quote);
  return out;
}

struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<ColorRGB> pixels;

  const ColorRGB& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * cols + static_cast<std::size_t>(x)];
  }
};

inline Image render(const TypedGrid& grid) {
  Image img{grid.rows(), grid.cols(), {}};
  img.pixels.reserve(grid.size());
  for (SyntacticType t : grid.types()) img.pixels.push_back(color_of(t));
  return img;
}

}  // namespace mondrian
