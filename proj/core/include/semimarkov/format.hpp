#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semimarkov/graph.hpp"

namespace semimarkov {

enum class Format { Native, Dot };

/// Parses the line-oriented native format:
///
///   role <causal-dag|ipg|mdg|pearl>
///   obs <name>...
///   lat <name>...              (causal-dag only)
///   edge <X> <connector> <Y>
///   hidden <X> -> <Y>          (causal-dag only)
///   noncollider <A> <B> <C>    (mdg only, B is the center)
///
/// A connector is an optional left mark (`<` arrow, `o` circle, nothing for tail),
/// a dash, and an optional right mark (`>` arrow, `o` circle, nothing for tail):
/// `->`, `<->`, `o->`, `o-o`, `-o`, `<-`, `<-o`, `o-`. Tail-tail (`-`, `--`) is rejected.
/// `#` starts a comment. Names are [A-Za-z0-9_]+ and must be declared before use.
///
/// Throws ParseError (with line/column) for syntax errors, self-loops and duplicates,
/// and InvariantError when the finished graph breaks its role invariants.
MixedGraph parse_graph(std::string_view text);

/// Splits a stream of documents separated by `---` lines and parses each one.
std::vector<MixedGraph> parse_graphs(std::string_view text);

/// Native output round-trips through parse_graph. DOT output draws observables as
/// boxes, latents as circles, and endpoint marks as arrowheads (arrow -> normal,
/// tail -> none, circle -> odot); hidden edges are dashed.
std::string serialize_graph(const MixedGraph& g, Format format = Format::Native);

/// Documents joined by `---` lines.
std::string serialize_graphs(const std::vector<MixedGraph>& graphs,
                             Format format = Format::Native);

/// Two-character-ish connector for an edge written left to right.
std::string connector(Mark left, Mark right);

}  // namespace semimarkov
