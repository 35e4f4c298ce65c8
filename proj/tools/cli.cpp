#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include "semimarkov/construction.hpp"
#include "semimarkov/equivalence.hpp"
#include "semimarkov/format.hpp"
#include "semimarkov/ipg_calculus.hpp"
#include "semimarkov/separation.hpp"

namespace semimarkov::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Settings {
  std::string format = "native";
  std::string mode = "auto";
  std::size_t max_observables = kDefaultMaxObservables;
  std::size_t max_circles = kDefaultMaxCircles;
  std::size_t max_vertices = kDefaultMaxVertices;

  Format fmt() const { return format == "dot" ? Format::Dot : Format::Native; }
  MdgOptions mdg() const {
    return {*mdg_mode_from_string(mode), max_observables, max_circles};
  }
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

MixedGraph load(const std::string& path) {
  try {
    return parse_graph(read_input(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                     ": " + e.what());
  } catch (const InvariantError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void require_role(const MixedGraph& g, Role role, const std::string& verb) {
  if (g.role() != role) {
    throw UsageError(verb + " expects a " + std::string(to_string(role)) + " graph, got " +
                     std::string(to_string(g.role())));
  }
}

// Causal model behind any input: correlated errors become latents, an IPG is read
// through its first expansion.
MixedGraph as_model(const MixedGraph& g) {
  switch (g.role()) {
    case Role::CausalDag:
      return g;
    case Role::Pearl:
      return pearl_to_dag(g);
    case Role::Ipg: {
      auto ex = expansions(g);
      if (ex.empty()) throw PreconditionError("IPG has no valid expansion");
      return ex.front();
    }
    case Role::Mdg:
      break;
  }
  throw UsageError("an mdg graph does not determine a model");
}

MixedGraph as_ipg(const MixedGraph& g) {
  if (g.role() == Role::Ipg) return g;
  if (g.role() == Role::Mdg) throw UsageError("expected an ipg or a model, got an mdg graph");
  return ipg_of(as_model(g));
}

std::string comment(const Settings& s, const std::string& text) {
  return (s.fmt() == Format::Dot ? "// " : "# ") + text + "\n";
}

class Emitter {
 public:
  Emitter(std::ostream& out, const Settings& s) : out_(out), s_(s) {}
  void operator()(const std::string& title, const MixedGraph& g) {
    if (count_++ > 0) out_ << "---\n";
    out_ << comment(s_, title) << serialize_graph(g, s_.fmt());
  }

 private:
  std::ostream& out_;
  const Settings& s_;
  std::size_t count_ = 0;
};

int run_pipeline(const MixedGraph& input, const Settings& s, std::ostream& out) {
  const auto model = as_model(input);
  const auto opts = s.mdg();
  const auto ipg = ipg_of(model);
  const auto mdg = mdg_of(model, opts);
  const auto sig = d_separation_signature(model, s.max_observables);
  Emitter emit(out, s);
  emit("model", model);
  emit("ipg", ipg);
  emit("mdg (" + std::string(to_string(resolve_mode(model, opts))) + ")", mdg);
  const auto comps = completions(mdg, s.max_circles);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto exps = expansions(comps[k]);
    bool equivalent = false;
    for (const auto& e : exps) equivalent = equivalent || d_separation_signature(e) == sig;
    const auto id = std::to_string(k + 1);
    emit("completion " + id + (equivalent ? "" : " (not equivalent to the model)"), comps[k]);
    for (std::size_t j = 0; j < exps.size(); ++j) {
      emit("expansion " + id + "." + std::to_string(j + 1), exps[j]);
    }
    if (!equivalent) continue;
    const auto models = minimal_models(comps[k], s.max_vertices);
    for (std::size_t j = 0; j < models.size(); ++j) {
      emit("minimal model " + id + "." + std::to_string(j + 1), models[j]);
    }
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inducing path graphs, marginal dependency graphs and minimal latent models",
               "semimarkov"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--format", s.format, "Output format")
      ->check(CLI::IsMember({"native", "dot"}));
  app.add_option("--mode", s.mode, "MDG extraction mode")
      ->check(CLI::IsMember({"auto", "tetrad", "exact"}));
  app.add_option("--max-observables", s.max_observables, "Signature bound");
  app.add_option("--max-circles", s.max_circles, "Completion bound");
  app.add_option("--max-vertices", s.max_vertices, "Model size bound");

  std::function<int()> action;
  std::string file;
  std::string file2;
  std::string x;
  std::string y;
  std::string rule;
  std::vector<std::string> given;

  auto graph_verb = [&](const std::string& name, const std::string& help,
                        std::function<int(const MixedGraph&)> body) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("file", file, "Graph file ('-' for stdin)")->required();
    cmd->callback([&, body] { action = [&, body] { return body(load(file)); }; });
    return cmd;
  };

  graph_verb("ipg", "Inducing path graph of a model", [&](const MixedGraph& g) {
    out << serialize_graph(ipg_of(as_model(g)), s.fmt());
    return 0;
  });
  graph_verb("mdg", "Marginal dependency graph of a model", [&](const MixedGraph& g) {
    out << serialize_graph(mdg_of(as_model(g), s.mdg()), s.fmt());
    return 0;
  });
  graph_verb("completions", "Valid IPG completions of an MDG", [&](const MixedGraph& g) {
    const auto mdg = g.role() == Role::Mdg ? g : mdg_of(as_model(g), s.mdg());
    out << serialize_graphs(completions(mdg, s.max_circles), s.fmt());
    return 0;
  });
  graph_verb("expansions", "Expansions of an IPG", [&](const MixedGraph& g) {
    out << serialize_graphs(expansions(as_ipg(g)), s.fmt());
    return 0;
  });
  graph_verb("minimal", "Minimal models entailing an IPG", [&](const MixedGraph& g) {
    out << serialize_graphs(minimal_models(as_ipg(g), s.max_vertices), s.fmt());
    return 0;
  });
  graph_verb("check-ipg", "Validate an IPG (exit 1 if invalid)", [&](const MixedGraph& g) {
    require_role(g, Role::Ipg, "check-ipg");
    const auto d = is_valid_ipg(g);
    if (d) {
      out << "valid\n";
      return 0;
    }
    out << "invalid\n";
    for (const auto& p : d.problems) out << "  " << p << '\n';
    return 1;
  });
  graph_verb("closure", "Close an IPG under R1 and R2 (exit 1 on conflict)",
             [&](const MixedGraph& g) {
               require_role(g, Role::Ipg, "closure");
               const auto r = closure(g);
               if (!r) {
                 err << "conflict: " << r.conflict->message << '\n';
                 return 1;
               }
               out << serialize_graph(*r.graph, s.fmt());
               return 0;
             });
  graph_verb("dot", "Re-emit a graph as DOT", [&](const MixedGraph& g) {
    out << serialize_graph(g, Format::Dot);
    return 0;
  });
  graph_verb("pipeline", "Model to IPG, MDG, completions, expansions and minimal models",
             [&](const MixedGraph& g) { return run_pipeline(g, s, out); });

  auto* equiv = app.add_subcommand("equiv", "Semi-Markov equivalence (exit 1 if not)");
  equiv->add_option("first", file, "Model file")->required();
  equiv->add_option("second", file2, "Model file")->required();
  equiv->callback([&] {
    action = [&] {
      const auto v = semi_markov_equivalent(as_model(load(file)), as_model(load(file2)), s.mdg());
      out << (v.equivalent ? "equivalent\n" : "not equivalent\n");
      if (v.witness) out << "witness: " << describe_witness(*v.witness) << '\n';
      out << "mdg agreement: " << (v.mdg_agreement ? "yes" : "no") << '\n';
      return v.equivalent ? 0 : 1;
    };
  });

  auto* dsep = app.add_subcommand("dsep", "d-separation query (exit 1 if d-connected)");
  dsep->add_option("file", file, "Model file")->required();
  dsep->add_option("a", x, "Vertex")->required();
  dsep->add_option("b", y, "Vertex")->required();
  dsep->add_option("given", given, "Conditioning vertices");
  dsep->callback([&] {
    action = [&] {
      const bool sep = d_separated(as_model(load(file)), x, y, given);
      std::string w;
      for (const auto& v : given) w += (w.empty() ? "" : ", ") + v;
      out << x << " _||_ " << y << " | {" << w << "}: " << (sep ? "separated" : "d-connected")
          << '\n';
      return sep ? 0 : 1;
    };
  });

  auto* pearl = app.add_subcommand("pearl", "Correlated-error models and their rules");
  pearl->require_subcommand(1);
  auto rule_verb = [&](const std::string& name, const std::string& help, bool apply) {
    auto* cmd = pearl->add_subcommand(name, help);
    cmd->add_option("file", file, "Correlated-error model")->required();
    cmd->add_option("x", x, "Tail of the designated edge")->required();
    cmd->add_option("y", y, "Head of the designated edge")->required();
    cmd->add_option("rule", rule, "1, 2, 1p or 2p")
        ->required()
        ->check(CLI::IsMember({"1", "2", "1p", "2p"}));
    cmd->callback([&, apply] {
      action = [&, apply] {
        const auto g = load(file);
        require_role(g, Role::Pearl, "pearl " + std::string(apply ? "apply" : "check"));
        const auto r = *pearl_rule_from_string(rule);
        if (apply) {
          out << serialize_graph(pearl_apply(g, x, y, r), s.fmt());
          return 0;
        }
        const bool ok = pearl_rule_check(g, x, y, r);
        out << (ok ? "applicable\n" : "not applicable\n");
        return ok ? 0 : 1;
      };
    });
  };
  rule_verb("check", "Evaluate a rule's side conditions (exit 1 if they fail)", false);
  rule_verb("apply", "Apply a rule", true);
  auto* to_dag = pearl->add_subcommand("to-dag", "Replace correlated errors by latents");
  to_dag->add_option("file", file, "Correlated-error model")->required();
  to_dag->callback([&] {
    action = [&] {
      const auto g = load(file);
      require_role(g, Role::Pearl, "pearl to-dag");
      out << serialize_graph(pearl_to_dag(g), s.fmt());
      return 0;
    };
  });
  pearl->add_subcommand("counterexample", "Rule 2 counterexample report")->callback([&] {
    action = [&] {
      out << counterexample_report().describe();
      return 0;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const BoundError& e) {
    err << "bound exceeded: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace semimarkov::cli
