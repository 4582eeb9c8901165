#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "qk/digraph.hpp"
#include "qk/errors.hpp"

namespace qk {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline bool parse_uint(std::string_view token, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

// Digraph keeps per-vertex bitsets, so memory grows as n^2.
inline constexpr std::uint64_t kMaxParsedOrder = std::uint64_t{1} << 14;

}  // namespace detail

/// Reads the edge-list format:
///
///   # comment
///   p dgraph <n> <m>
///   <u> <v>        (m lines, arc u->v, 0-based)
///
/// Blank lines and lines starting with '#' are ignored everywhere.
inline Digraph parse_digraph(std::string_view text) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0, m = 0;
  std::vector<Arc> arcs;
  std::unordered_set<std::uint64_t> seen;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto tokens = detail::split_ws(line);
    if (!have_header) {
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "dgraph" || !detail::parse_uint(tokens[2], n) ||
          !detail::parse_uint(tokens[3], m))
        throw parse_error(line_no, "expected header 'p dgraph <n> <m>'");
      if (n > detail::kMaxParsedOrder) throw parse_error(line_no, "vertex count too large");
      if (m > n * (n == 0 ? 0 : n - 1)) throw parse_error(line_no, "arc count exceeds n(n-1)");
      have_header = true;
    } else {
      std::uint64_t u = 0, v = 0;
      if (tokens.size() != 2 || !detail::parse_uint(tokens[0], u) || !detail::parse_uint(tokens[1], v))
        throw parse_error(line_no, "expected arc line '<u> <v>'");
      if (arcs.size() == m) throw parse_error(line_no, "more arc lines than the header's m = " + std::to_string(m));
      if (u >= n || v >= n) throw parse_error(line_no, "vertex id out of range (n = " + std::to_string(n) + ")");
      if (u == v) throw parse_error(line_no, "self-loop at vertex " + std::to_string(u));
      if (!seen.insert(u * n + v).second)
        throw parse_error(line_no, "duplicate arc " + std::to_string(u) + " " + std::to_string(v));
      arcs.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw parse_error(line_no, "missing header 'p dgraph <n> <m>'");
  if (arcs.size() != m)
    throw parse_error(line_no, "expected " + std::to_string(m) + " arc lines, found " + std::to_string(arcs.size()));
  return Digraph(n, arcs);
}

/// Canonical text form: optional label comments, header, arcs sorted by
/// (tail, head). parse_digraph(serialize_digraph(d)) == d.
inline std::string serialize_digraph(const Digraph& d, const std::vector<std::string>& labels = {}) {
  std::ostringstream os;
  for (std::size_t v = 0; v < labels.size() && v < d.order(); ++v) os << "# label " << v << ' ' << labels[v] << '\n';
  os << "p dgraph " << d.order() << ' ' << d.arc_count() << '\n';
  for (const Arc& a : d.arcs()) os << a.tail << ' ' << a.head << '\n';
  return os.str();
}

inline std::string to_dot(const Digraph& d, const std::vector<std::string>& labels = {}) {
  std::ostringstream os;
  os << "digraph {\n";
  for (Vertex v = 0; v < d.order(); ++v) {
    os << "  " << v;
    if (v < labels.size()) os << " [label=\"" << labels[v] << "\"]";
    os << ";\n";
  }
  for (const Arc& a : d.arcs()) os << "  " << a.tail << " -> " << a.head << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace qk
