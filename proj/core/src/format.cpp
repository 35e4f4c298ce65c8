#include "semimarkov/format.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace semimarkov {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    out.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return out;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::optional<std::pair<Mark, Mark>> parse_connector(std::string_view c) {
  const auto dash = c.find('-');
  if (dash == std::string_view::npos || c.find('-', dash + 1) != std::string_view::npos) {
    return std::nullopt;
  }
  const auto left = c.substr(0, dash);
  const auto right = c.substr(dash + 1);
  Mark l;
  Mark r;
  if (left.empty()) {
    l = Mark::Tail;
  } else if (left == "<") {
    l = Mark::Arrow;
  } else if (left == "o") {
    l = Mark::Circle;
  } else {
    return std::nullopt;
  }
  if (right.empty()) {
    r = Mark::Tail;
  } else if (right == ">") {
    r = Mark::Arrow;
  } else if (right == "o") {
    r = Mark::Circle;
  } else {
    return std::nullopt;
  }
  return std::pair{l, r};
}

class Parser {
 public:
  MixedGraph run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      auto line = text.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      handle_line(line_no, tokenize(line));
      pos = end + 1;
    }
    if (!graph_) throw ParseError(line_no, 1, "missing 'role' header");
    graph_->validate();
    return std::move(*graph_);
  }

 private:
  void handle_line(std::size_t line_no, const std::vector<Token>& tokens) {
    if (tokens.empty()) return;
    const auto& keyword = tokens[0];
    auto fail = [&](const Token& at, const std::string& what) -> ParseError {
      return ParseError(line_no, at.column, what);
    };
    if (!graph_) {
      if (keyword.text != "role") throw fail(keyword, "expected 'role' header");
      if (tokens.size() != 2) throw fail(keyword, "'role' takes exactly one argument");
      auto role = role_from_string(tokens[1].text);
      if (!role) throw fail(tokens[1], "unknown role '" + std::string(tokens[1].text) + "'");
      graph_.emplace(*role);
      return;
    }
    auto vertex = [&](const Token& t) {
      if (!valid_name(t.text)) throw fail(t, "invalid vertex name '" + std::string(t.text) + "'");
      auto i = graph_->find(t.text);
      if (!i) throw fail(t, "undeclared vertex '" + std::string(t.text) + "'");
      return *i;
    };

    if (keyword.text == "role") throw fail(keyword, "duplicate 'role' header");
    if (keyword.text == "obs" || keyword.text == "lat") {
      const bool latent = keyword.text == "lat";
      if (latent && graph_->role() != Role::CausalDag) {
        throw fail(keyword, "latent vertices are only allowed in causal-dag graphs");
      }
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        if (!valid_name(tokens[k].text)) {
          throw fail(tokens[k], "invalid vertex name '" + std::string(tokens[k].text) + "'");
        }
        if (graph_->find(tokens[k].text)) {
          throw fail(tokens[k], "duplicate vertex '" + std::string(tokens[k].text) + "'");
        }
        graph_->add_vertex(std::string(tokens[k].text),
                           latent ? VertexKind::Latent : VertexKind::Observable);
      }
      return;
    }
    if (keyword.text == "edge" || keyword.text == "hidden") {
      if (tokens.size() != 4) throw fail(keyword, "expected '<X> <connector> <Y>'");
      const bool hidden = keyword.text == "hidden";
      auto marks = parse_connector(tokens[2].text);
      if (!marks) throw fail(tokens[2], "unknown connector '" + std::string(tokens[2].text) + "'");
      if (marks->first == Mark::Tail && marks->second == Mark::Tail) {
        throw fail(tokens[2], "tail-tail connector '" + std::string(tokens[2].text) +
                                  "' is not allowed");
      }
      if (hidden && !(marks->first == Mark::Tail && marks->second == Mark::Arrow)) {
        throw fail(tokens[2], "hidden edges must use '->'");
      }
      if (hidden && graph_->role() != Role::CausalDag) {
        throw fail(keyword, "hidden edges are only allowed in causal-dag graphs");
      }
      const auto u = vertex(tokens[1]);
      const auto v = vertex(tokens[3]);
      if (u == v) throw fail(tokens[3], "self-loop on '" + graph_->name(u) + "'");
      if (graph_->adjacent(u, v)) {
        throw fail(tokens[1], "duplicate edge between '" + graph_->name(u) + "' and '" +
                                  graph_->name(v) + "'");
      }
      graph_->add_edge(u, v, marks->first, marks->second, hidden);
      return;
    }
    if (keyword.text == "noncollider") {
      if (graph_->role() != Role::Mdg) {
        throw fail(keyword, "noncollider triples are only allowed in mdg graphs");
      }
      if (tokens.size() != 4) throw fail(keyword, "expected '<A> <B> <C>'");
      vertex(tokens[1]);
      vertex(tokens[2]);
      vertex(tokens[3]);
      graph_->add_noncollider(tokens[1].text, tokens[2].text, tokens[3].text);
      return;
    }
    throw fail(keyword, "unknown keyword '" + std::string(keyword.text) + "'");
  }

  std::optional<MixedGraph> graph_;
};

std::string dot_arrow(Mark m) {
  switch (m) {
    case Mark::Tail:
      return "none";
    case Mark::Arrow:
      return "normal";
    case Mark::Circle:
      return "odot";
  }
  return "none";
}

std::string quoted(const std::string& s) { return '"' + s + '"'; }

}  // namespace

std::string connector(Mark left, Mark right) {
  std::string out;
  if (left == Mark::Arrow) out += '<';
  if (left == Mark::Circle) out += 'o';
  out += '-';
  if (right == Mark::Arrow) out += '>';
  if (right == Mark::Circle) out += 'o';
  return out;
}

MixedGraph parse_graph(std::string_view text) { return Parser{}.run(text); }

std::vector<MixedGraph> parse_graphs(std::string_view text) {
  std::vector<MixedGraph> out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (line == "---" || line == "---\r") {
      out.push_back(parse_graph(current));
      current.clear();
    } else {
      current.append(line);
      current += '\n';
    }
    pos = end + 1;
  }
  if (current.find_first_not_of(" \t\r\n") != std::string::npos) {
    out.push_back(parse_graph(current));
  }
  return out;
}

std::string serialize_graph(const MixedGraph& g, Format format) {
  std::ostringstream out;
  if (format == Format::Native) {
    out << "role " << to_string(g.role()) << '\n';
    std::string obs;
    std::string lat;
    for (const auto& v : g.vertices()) {
      (v.kind == VertexKind::Observable ? obs : lat) += ' ' + v.name;
    }
    if (!obs.empty()) out << "obs" << obs << '\n';
    if (!lat.empty()) out << "lat" << lat << '\n';
    for (const auto& e : g.edges()) {
      out << (e.hidden ? "hidden " : "edge ") << e.u << ' ' << connector(e.at_u, e.at_v) << ' '
          << e.v << '\n';
    }
    for (const auto& t : g.noncolliders()) {
      out << "noncollider " << t.a << ' ' << t.center << ' ' << t.c << '\n';
    }
    return out.str();
  }

  out << "digraph G {\n";
  for (const auto& v : g.vertices()) {
    out << "  " << quoted(v.name) << " [shape="
        << (v.kind == VertexKind::Latent ? "circle" : "box") << "];\n";
  }
  for (const auto& e : g.edges()) {
    out << "  " << quoted(e.u) << " -> " << quoted(e.v) << " [dir=both, arrowtail="
        << dot_arrow(e.at_u) << ", arrowhead=" << dot_arrow(e.at_v);
    if (e.hidden) out << ", style=dashed";
    out << "];\n";
  }
  for (const auto& t : g.noncolliders()) {
    out << "  // noncollider " << t.a << ' ' << t.center << ' ' << t.c << '\n';
  }
  out << "}\n";
  return out.str();
}

std::string serialize_graphs(const std::vector<MixedGraph>& graphs, Format format) {
  std::string out;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    if (k > 0) out += "---\n";
    out += serialize_graph(graphs[k], format);
  }
  return out;
}

}  // namespace semimarkov
