#include "tailcausal/dag_io.hpp"

#include "tailcausal/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tailcausal {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::size_t parse_label(std::string_view tok, std::size_t line_no) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0) {
    throw ParseError("expected a positive vertex label, got '" + std::string(tok) + "'", line_no);
  }
  return v;
}

double parse_weight(std::string_view tok, std::size_t line_no) {
  double w = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a numeric weight, got '" + std::string(tok) + "'", line_no);
  }
  return w;
}

}  // namespace

DagFile parse_dag_text(std::string_view text) {
  std::size_t d = 0;
  std::vector<Edge> edges;
  std::map<Edge, double> weights;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tokens[0] == "nodes") {
      if (tokens.size() != 2) throw ParseError("'nodes' takes exactly one count", line_no);
      d = std::max(d, parse_label(tokens[1], line_no));
    } else {
      if (tokens.size() < 3 || tokens.size() > 4 || tokens[1] != "->") {
        throw ParseError("expected 'i -> j [weight]'", line_no);
      }
      const std::size_t from = parse_label(tokens[0], line_no);
      const std::size_t to = parse_label(tokens[2], line_no);
      d = std::max({d, from, to});
      const Edge e{from - 1, to - 1};
      edges.push_back(e);
      if (tokens.size() == 4) {
        const double w = parse_weight(tokens[3], line_no);
        auto [it, inserted] = weights.emplace(e, w);
        if (!inserted && it->second != w) throw ParseError("edge listed twice with different weights", line_no);
      }
    }
    if (end == text.size()) break;
  }
  return DagFile{Dag(d, std::move(edges)), std::move(weights)};
}

DagFile load_dag_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open DAG file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dag_text(buf.str());
}

std::string format_dag_text(const Dag& dag, const std::map<Edge, double>& weights) {
  std::string out = "nodes " + std::to_string(dag.size()) + "\n";
  for (const Edge& e : dag.edges()) {
    out += std::to_string(e.from + 1) + " -> " + std::to_string(e.to + 1);
    if (auto it = weights.find(e); it != weights.end()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, " %.17g", it->second);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace tailcausal
