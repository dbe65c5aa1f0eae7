#include "smtkc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "smtkc/compiler.hpp"
#include "smtkc/oracle.hpp"

namespace smtkc::cli {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string nnf;
  std::string atoms;
  std::string weights;
  std::string mode = "lazy";
  std::string heuristic = "dlcs";
  std::string stats;
  int eager_k = -1;
  bool no_components = false;
  bool no_cache = false;
  bool no_learning = false;
  long long prop_budget = -1;
  std::uint64_t seed = 0;
  bool condense = false;
  bool theory = false;
  std::size_t max = std::numeric_limits<std::size_t>::max();
};

void add_shared(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Compilation mode")->check(CLI::IsMember({"lazy", "eager", "agnostic"}));
  cmd->add_option("--eager-k", o.eager_k, "Largest theory lemma in eager mode (default: all linear atoms)");
  cmd->add_flag("--no-components", o.no_components, "Disable component decomposition");
  cmd->add_flag("--no-cache", o.no_cache, "Disable component caching");
  cmd->add_flag("--no-learning", o.no_learning, "Disable theory conflict clauses");
  cmd->add_option("--heuristic", o.heuristic, "Branching heuristic")->check(CLI::IsMember({"dlcs", "fixed"}));
  cmd->add_option("--prop-budget", o.prop_budget, "Entailment checks per theory propagation round");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--stats", o.stats, "Print compile statistics")->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--condense", o.condense, "Drop theory-implied literals from exported graphs");
}

CompileConfig config_of(const Options& o) {
  CompileConfig cfg;
  cfg.mode = o.mode == "eager" ? CompileMode::Eager : o.mode == "agnostic" ? CompileMode::Agnostic : CompileMode::Lazy;
  cfg.components = !o.no_components;
  cfg.cache = !o.no_cache;
  cfg.learning = !o.no_learning;
  cfg.propagation_budget = o.prop_budget;
  cfg.heuristic = o.heuristic == "fixed" ? Heuristic::FixedOrder : Heuristic::Dlcs;
  cfg.condense_output = o.condense;
  cfg.random_seed = o.seed;
  cfg.eager_k = o.eager_k;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << data)) throw InputError("cannot write " + path);
}

std::string atoms_path(const std::string& nnf_path) {
  const std::string ext = ".nnf";
  if (nnf_path.size() > ext.size() && nnf_path.compare(nnf_path.size() - ext.size(), ext.size(), ext) == 0)
    return nnf_path.substr(0, nnf_path.size() - ext.size()) + ".atoms";
  return nnf_path + ".atoms";
}

void print_stats(std::ostream& out, const std::string& format, const CompileStats& s) {
  if (format == "json")
    out << s.to_json() << '\n';
  else if (format == "text")
    out << s.to_text();
}

DdnnfGraph compile_input(const Options& o, CompileStats& stats) {
  Formula f = parse_smt2(read_file(o.input));
  return compile_formula(f, config_of(o), &stats);
}

DdnnfGraph load_graph(const Options& o) {
  std::string atoms = o.atoms.empty() ? std::string() : read_file(o.atoms);
  return import_nnf(read_file(o.nnf), atoms);
}

WeightMap read_weights(const std::string& path) {
  WeightMap w;
  std::istringstream in(read_file(path));
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    std::istringstream ls(line);
    std::string lit_text;
    std::string weight_text;
    if (!(ls >> lit_text) || lit_text[0] == '#' || lit_text == "c") continue;
    std::string extra;
    int lit = 0;
    try {
      lit = std::stoi(lit_text);
    } catch (const std::exception&) {
      lit = 0;
    }
    Rational q;
    if (lit == 0 || !(ls >> weight_text) || (ls >> extra) || q.set_str(weight_text, 10) != 0 || sgn(q.get_den()) == 0)
      throw InputError(path + ":" + std::to_string(line_no) + ": expected '<signed-var> <p/q>'");
    q.canonicalize();
    if (sgn(q) < 0) throw InputError(path + ":" + std::to_string(line_no) + ": negative weight");
    w.set(Literal::from_dimacs(lit), q);
  }
  return w;
}

int cmd_compile(const Options& o, std::ostream& out) {
  CompileStats stats;
  DdnnfGraph g = compile_input(o, stats);
  NnfFiles files = export_nnf(o.condense ? condense(g) : g);
  write_file(o.output, files.nnf);
  write_file(atoms_path(o.output), files.atoms);
  print_stats(out, o.stats.empty() ? "text" : o.stats, stats);
  return kExitOk;
}

int cmd_count(const Options& o, std::ostream& out) {
  if (o.input.empty() == o.nnf.empty()) throw CLI::ValidationError("count", "give either an .smt2 input or --nnf");
  CompileStats stats;
  DdnnfGraph g = o.nnf.empty() ? compile_input(o, stats) : load_graph(o);
  if (o.weights.empty())
    out << count(g).get_str() << '\n';
  else
    out << weighted_count(g, read_weights(o.weights)).get_str() << '\n';
  if (o.nnf.empty()) print_stats(out, o.stats, stats);
  return kExitOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  CompileStats stats;
  DdnnfGraph g = compile_input(o, stats);
  for (const Assignment& a : enumerate(g, o.max)) {
    std::string line;
    for (Literal l : a) {
      if (!line.empty()) line += ' ';
      line += std::to_string(l.dimacs());
    }
    out << line << '\n';
  }
  print_stats(out, o.stats, stats);
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  DdnnfGraph g = load_graph(o);
  ValidationReport r = validate(g, o.theory ? ValidationLevel::Theory : ValidationLevel::Structural);
  for (const Violation& v : r.violations) {
    out << to_string(v.kind) << ": " << v.detail;
    for (Literal l : v.assignment) out << ' ' << l.dimacs();
    out << '\n';
  }
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  out << r.violations.size() << " violations\n";
  return r.ok() ? kExitOk : kExitInvalid;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  BruteCounts c = brute_counts(parse_smt2(read_file(o.input)));
  out << "agnostic " << c.agnostic << '\n' << "aware " << c.aware << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Knowledge compiler for QF_LRA formulas into d-DNNF", "smtkc");
  app.require_subcommand(1);
  Options o;

  CLI::App* compile_cmd = app.add_subcommand("compile", "Compile an SMT-LIB2 file to .nnf and .atoms");
  compile_cmd->add_option("input", o.input, "QF_LRA input")->required();
  compile_cmd->add_option("-o,--output", o.output, "Output .nnf path")->required();
  add_shared(compile_cmd, o);

  CLI::App* count_cmd = app.add_subcommand("count", "Model count of a formula or compiled graph");
  count_cmd->add_option("input", o.input, "QF_LRA input");
  count_cmd->add_option("--nnf", o.nnf, "Compiled graph");
  count_cmd->add_option("--atoms", o.atoms, "Atom sidecar of --nnf");
  count_cmd->add_option("--weights", o.weights, "Literal weights, one '<signed-var> <p/q>' per line");
  add_shared(count_cmd, o);

  CLI::App* enum_cmd = app.add_subcommand("enumerate", "List models of a formula");
  enum_cmd->add_option("input", o.input, "QF_LRA input")->required();
  enum_cmd->add_option("--max", o.max, "Stop after this many models");
  add_shared(enum_cmd, o);

  CLI::App* check_cmd = app.add_subcommand("check", "Validate a compiled graph");
  check_cmd->add_option("--nnf", o.nnf, "Compiled graph")->required();
  check_cmd->add_option("--atoms", o.atoms, "Atom sidecar")->required();
  check_cmd->add_flag("--theory", o.theory, "Also check every captured assignment against the theory");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Brute-force Boolean and theory-aware counts");
  oracle_cmd->add_option("input", o.input, "QF_LRA input")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (compile_cmd->parsed()) return cmd_compile(o, out);
    if (count_cmd->parsed()) return cmd_count(o, out);
    if (enum_cmd->parsed()) return cmd_enumerate(o, out);
    if (check_cmd->parsed()) return cmd_check(o, out);
    return cmd_oracle(o, out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NotTotal& e) {
    err << "error: graph is not total: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace smtkc::cli
