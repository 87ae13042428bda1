#include "arbor/graph_io.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arbor/error.hpp"

namespace arbor {

namespace {

using boost::multiprecision::cpp_int;

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool parse_count(std::string_view token, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// cpp_int reads a leading 0 as an octal prefix.
cpp_int decimal_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return cpp_int(std::string(digits.empty() ? "0" : digits));
}

}  // namespace

Rational parse_weight(std::string_view token) {
  if (auto slash = token.find('/'); slash != std::string_view::npos) {
    const auto num = token.substr(0, slash);
    const auto den = token.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) fail(ErrorCode::Parse, "bad rational weight '" + std::string(token) + "'");
    const cpp_int q = decimal_integer(den);
    if (q == 0) fail(ErrorCode::Parse, "zero denominator in '" + std::string(token) + "'");
    return Rational(decimal_integer(num), q);
  }
  // [+]digits[.digits][(e|E)[+|-]digits]
  std::string_view s = token;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::string digits;
  long long scale = 0;
  std::size_t i = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], any = true;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], --scale, any = true;
  }
  if (!any) fail(ErrorCode::Parse, "bad weight '" + std::string(token) + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    long long exp = 0;
    auto rest = s.substr(i);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exp);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || exp > 4000 || exp < -4000) {
      fail(ErrorCode::Parse, "bad exponent in '" + std::string(token) + "'");
    }
    scale += exp;
    i = s.size();
  }
  if (i != s.size()) fail(ErrorCode::Parse, "bad weight '" + std::string(token) + "'");
  Rational value{decimal_integer(digits)};
  const cpp_int ten_pow = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  if (scale >= 0) {
    value *= ten_pow;
  } else {
    value /= ten_pow;
  }
  return value;
}

GraphFile parse_graph(std::string_view text) {
  GraphFile file;
  std::size_t n = 0;
  std::uint64_t m = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::uint64_t body = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto tokens = split(line);
    if (tokens.empty() || tokens.front().front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      std::uint64_t count = 0;
      if (tokens.size() < 2 || tokens.size() > 3 || !parse_count(tokens[0], count) || !parse_count(tokens[1], m)) {
        parse_fail(line_no, "expected header 'n m [undirected]'");
      }
      if (tokens.size() == 3) {
        if (tokens[2] != "undirected") parse_fail(line_no, "unknown header flag '" + std::string(tokens[2]) + "'");
        file.undirected = true;
      }
      if (count == 0) parse_fail(line_no, "graph needs at least one vertex");
      if (count > (std::uint64_t{1} << 31)) parse_fail(line_no, "too many vertices");
      n = static_cast<std::size_t>(count);
      have_header = true;
    } else {
      if (body == m) parse_fail(line_no, "more edge lines than the header announced");
      std::uint64_t u = 0, v = 0;
      if (tokens.size() != 3 || !parse_count(tokens[0], u) || !parse_count(tokens[1], v)) {
        parse_fail(line_no, "expected 'u v w'");
      }
      if (u >= n || v >= n) parse_fail(line_no, "vertex id out of range");
      Rational w;
      try {
        w = parse_weight(tokens[2]);
      } catch (const Error& e) {
        parse_fail(line_no, e.what());
      }
      if (w <= 0) parse_fail(line_no, "weight must be positive");
      const double wd = static_cast<double>(w);
      if (!(wd > 0.0) || !std::isfinite(wd)) parse_fail(line_no, "weight is not representable");
      edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), wd});
      file.exact_weights.push_back(w);
      if (file.undirected) {
        edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(u), wd});
        file.exact_weights.push_back(w);
      }
      ++body;
    }
    if (end == text.size()) break;
  }
  if (!have_header) parse_fail(line_no, "missing header");
  if (body != m) parse_fail(line_no, "expected " + std::to_string(m) + " edge lines, found " + std::to_string(body));
  file.graph = WeightedDigraph(n, std::move(edges));
  return file;
}

GraphFile load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Parse, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string format_graph(const WeightedDigraph& g) {
  std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const Edge& e : g.edges()) {
    // The exact binary value as p/q keeps the round trip lossless.
    const Rational w(e.weight);
    out += std::to_string(e.src) + " " + std::to_string(e.dst) + " " + w.str() + "\n";
  }
  return out;
}

std::string format_arborescence(const WeightedDigraph& g, const Arborescence& t) {
  std::string out = "root=" + std::to_string(t.root) + ";";
  bool first = true;
  for (VertexId v = 0; v < t.parent_edge.size(); ++v) {
    if (v == t.root) continue;
    out += first ? " " : ",";
    first = false;
    out += std::to_string(v) + ":" + std::to_string(parent_vertex(g, t, v));
  }
  return out;
}

}  // namespace arbor
