#pragma once

// Line-oriented atlas documents.
//
//   # comment
//   strip S
//     lower a@0,1 b@2,inf
//     upper c
//   glue a c -
//
// Ids on a side line are listed left to right; `@lo,hi` attaches optional
// coordinates (`-inf`/`inf` allowed).

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "striped/core.hpp"
#include "striped/rational.hpp"

namespace striped {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        detail_(what) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == '@' || c == ',' || c == '#') return false;
  }
  return true;
}

inline std::optional<Rational> parse_endpoint(std::string_view text, bool low, std::size_t line, std::size_t column) {
  if (low && text == "-inf") return std::nullopt;
  if (!low && (text == "inf" || text == "+inf")) return std::nullopt;
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, column, "malformed endpoint '" + std::string(text) + "'");
  }
}

}  // namespace detail

/// Syntax only; does not validate. Throws ParseError.
inline StripedAtlas parse_atlas_unchecked(std::string_view text) {
  StripedAtlas atlas;
  bool seen_lower = false;
  bool seen_upper = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const auto& head = tokens.front();
    if (head.text == "strip") {
      if (tokens.size() != 2) throw ParseError(line_no, head.column, "expected 'strip <id>'");
      if (!detail::valid_id(tokens[1].text)) throw ParseError(line_no, tokens[1].column, "invalid strip id");
      atlas.strips.push_back({std::string(tokens[1].text), {}, {}, {}});
      seen_lower = seen_upper = false;
    } else if (head.text == "lower" || head.text == "upper") {
      if (atlas.strips.empty()) throw ParseError(line_no, head.column, "side line before any 'strip'");
      bool& seen = head.text == "lower" ? seen_lower : seen_upper;
      if (seen) throw ParseError(line_no, head.column, "repeated '" + std::string(head.text) + "' line");
      seen = true;
      auto& strip = atlas.strips.back();
      auto& side = head.text == "lower" ? strip.lower : strip.upper;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        std::string_view tok = tokens[k].text;
        const std::size_t col = tokens[k].column;
        std::size_t at = tok.find('@');
        std::string_view id = tok.substr(0, at);
        if (!detail::valid_id(id)) throw ParseError(line_no, col, "invalid interval id");
        side.emplace_back(id);
        if (at == std::string_view::npos) continue;
        std::string_view coords = tok.substr(at + 1);
        std::size_t comma = coords.find(',');
        if (comma == std::string_view::npos || coords.find(',', comma + 1) != std::string_view::npos) {
          throw ParseError(line_no, col + at + 1, "expected '@lo,hi'");
        }
        GeomInterval gi{detail::parse_endpoint(coords.substr(0, comma), true, line_no, col + at + 1),
                        detail::parse_endpoint(coords.substr(comma + 1), false, line_no, col + at + comma + 2)};
        if (!strip.geom.emplace(std::string(id), gi).second) {
          throw ParseError(line_no, col, "coordinates given twice for '" + std::string(id) + "'");
        }
      }
    } else if (head.text == "glue") {
      if (tokens.size() != 4) throw ParseError(line_no, head.column, "expected 'glue <x> <y> <+|->'");
      for (std::size_t k = 1; k <= 2; ++k) {
        if (!detail::valid_id(tokens[k].text)) throw ParseError(line_no, tokens[k].column, "invalid interval id");
      }
      Sign sign;
      if (tokens[3].text == "+") sign = Sign::Plus;
      else if (tokens[3].text == "-") sign = Sign::Minus;
      else throw ParseError(line_no, tokens[3].column, "sign must be '+' or '-'");
      atlas.gluings.push_back({std::string(tokens[1].text), std::string(tokens[2].text), sign});
    } else {
      throw ParseError(line_no, head.column, "unknown keyword '" + std::string(head.text) + "'");
    }
  }
  return atlas;
}

/// Parses and validates. Throws ParseError or ValidationError.
inline StripedAtlas parse_atlas(std::string_view text) {
  StripedAtlas atlas = parse_atlas_unchecked(text);
  require_valid(atlas);
  return atlas;
}

/// Canonical document: one `strip` block per strip in input order, side
/// lines indented by two spaces and omitted when empty, then the gluings.
inline std::string serialize_atlas(const StripedAtlas& atlas) {
  std::ostringstream out;
  for (const auto& strip : atlas.strips) {
    out << "strip " << strip.id << '\n';
    for (Side s : kSides) {
      const auto& ids = strip.side(s);
      if (ids.empty()) continue;
      out << "  " << side_name(s);
      for (const auto& id : ids) {
        out << ' ' << id;
        auto it = strip.geom.find(id);
        if (it == strip.geom.end()) continue;
        out << '@' << (it->second.lo ? to_compact_string(*it->second.lo) : "-inf") << ','
            << (it->second.hi ? to_compact_string(*it->second.hi) : "inf");
      }
      out << '\n';
    }
  }
  for (const auto& g : atlas.gluings) out << "glue " << g.x << ' ' << g.y << ' ' << sign_char(g.sign) << '\n';
  return out.str();
}

}  // namespace striped
