// herbrand — build, check and debug Herbrand trees for contradictory finite
// universal theories; run lambda-c programs on the Krivine machine; run
// contradiction proofs on the scheduler machine.
//
// Exit codes: 0 success, 1 domain error (rejected tree, exhausted fuel,
// satisfiable theory), 2 usage or parse error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "herbrand/builder.hpp"
#include "herbrand/builtins.hpp"
#include "herbrand/debugger.hpp"
#include "herbrand/kam.hpp"
#include "herbrand/kam_encode.hpp"
#include "herbrand/scheduler.hpp"
#include "herbrand/theory.hpp"
#include "herbrand/tree_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const herbrand::CompiledTheory> load_theory(const std::string& path) {
  return herbrand::compile(herbrand::parse_theory(slurp(path)));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

std::string format_tree(const herbrand::HerbrandTree& tree, const std::string& format) {
  if (format == "json") return herbrand::tree_to_json(tree);
  if (format == "dot") return herbrand::tree_to_dot(tree);
  return herbrand::tree_to_text(tree);
}

// Valuation sources: each entry is either a file of `Pred(args)=true|false`
// lines or an inline comma-separated list of the same shape.
herbrand::Valuation parse_valuation(const std::vector<std::string>& sources,
                                    const herbrand::CompiledTheory& th,
                                    std::optional<bool> fallback) {
  herbrand::Valuation val =
      fallback ? herbrand::Valuation(*fallback) : herbrand::Valuation::from_function(
        [](const herbrand::Atom& a) -> bool {
          throw std::runtime_error("valuation does not cover atom " + a.str() +
                                   " (use --default true|false)");
        });
  auto add_line = [&](std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!line.empty() && is_space(line.front())) line.erase(line.begin());
    while (!line.empty() && is_space(line.back())) line.pop_back();
    if (line.empty()) return;
    auto eq = line.rfind('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad valuation entry '" + line + "' (expected Atom=true|false)");
    std::string atom_text = line.substr(0, eq);
    std::string value_text = line.substr(eq + 1);
    while (!value_text.empty() && is_space(value_text.front()))
      value_text.erase(value_text.begin());
    while (!atom_text.empty() && is_space(atom_text.back())) atom_text.pop_back();
    bool value;
    if (value_text == "true" || value_text == "1")
      value = true;
    else if (value_text == "false" || value_text == "0")
      value = false;
    else
      throw std::runtime_error("bad truth value '" + value_text + "' in valuation");
    herbrand::Atom a = th.check_atom(herbrand::parse_ground_atom(atom_text));
    val.assign(std::move(a), value);
  };
  for (const auto& src : sources) {
    if (std::filesystem::exists(src)) {
      std::istringstream in(slurp(src));
      std::string line;
      while (std::getline(in, line)) add_line(line);
    } else {
      std::string cur;
      std::istringstream in(src);
      while (std::getline(in, cur, ',')) add_line(cur);
    }
  }
  return val;
}

herbrand::kam::Program load_program_with_prelude(const std::string& path) {
  return herbrand::kam::with_prelude(herbrand::kam::parse_program(slurp(path)));
}

int cmd_build(const std::string& theory_path, const std::string& strategy,
              std::uint64_t fuel, std::uint32_t max_depth, const std::string& format,
              const std::string& out_path, bool stats) {
  auto th = load_theory(theory_path);
  herbrand::BuildConfig cfg;
  cfg.fuel = fuel;
  cfg.max_depth = max_depth;
  cfg.strategy = strategy == "fair" ? herbrand::Strategy::Fair
                                    : herbrand::Strategy::RelevanceFirst;
  auto result = herbrand::build_tree(*th, cfg);
  if (stats)
    std::cerr << "scanned " << result.stats.scanned << " indices, deepest path "
              << result.stats.deepest << "\n";
  if (!result) {
    std::cerr << "error: " << result.error->message << "\n"
              << "open path: [" << result.error->deepest_open.str() << "]\n";
    return kDomainError;
  }
  emit(format_tree(*result.tree, format), out_path);
  return kOk;
}

int cmd_check(const std::string& theory_path, const std::string& tree_path) {
  auto th = load_theory(theory_path);
  auto tree = herbrand::tree_from_json(*th, slurp(tree_path));
  auto report = herbrand::htree_check(*th, tree);
  if (report) {
    std::cout << "accepted: " << tree.leaf_count() << " leaves, depth "
              << tree.depth() << "\n";
    return kOk;
  }
  std::cout << "rejected: " << report.detail << "\n";
  return kDomainError;
}

int cmd_debug(const std::string& theory_path, const std::string& tree_path,
              const std::vector<std::string>& valuation, const std::string& dflt) {
  auto th = load_theory(theory_path);
  auto tree = herbrand::tree_from_json(*th, slurp(tree_path));
  std::optional<bool> fallback;
  if (dflt == "true") fallback = true;
  if (dflt == "false") fallback = false;
  herbrand::Valuation oracle = parse_valuation(valuation, *th, fallback);
  herbrand::CounterExample cex = herbrand::walk(*th, tree, oracle);
  std::cout << "counter-example: " << cex.str() << "\n";
  if (!herbrand::verify(*th, cex)) {
    std::cerr << "error: counter-example failed verification\n";
    return kDomainError;
  }
  return kOk;
}

int cmd_kam_run(const std::string& program_path, const std::string& entry,
                std::uint64_t fuel, bool trace) {
  using herbrand::kam::Machine;
  Machine m(load_program_with_prelude(program_path));
  m.register_basics();
  if (!m.program().defined(entry)) {
    std::cerr << "error: entry point '" << entry << "' is not defined\n";
    return kUsageError;
  }
  if (auto missing = m.unresolved_references(entry); !missing.empty()) {
    std::cerr << "link error: unresolved reference '" << missing.front() << "'\n";
    return kUsageError;
  }
  auto r = m.run(entry, herbrand::kam::Stack::nil(), fuel,
                 trace ? &std::cout : nullptr);
  switch (r.outcome) {
    case Machine::RunResult::Outcome::Halted:
      std::cout << "halted by '" << r.halt.instruction << "' after " << r.steps
                << " steps";
      if (!r.halt.values.empty()) std::cout << " with " << r.halt.values[0].str();
      std::cout << "\n";
      return kOk;
    case Machine::RunResult::Outcome::Stuck:
      std::cout << "stuck after " << r.steps << " steps: " << r.reason << "\n"
                << "process: " << r.final.str(200) << "\n";
      return kDomainError;
    case Machine::RunResult::Outcome::FuelExhausted:
      std::cout << "fuel exhausted after " << r.steps << " steps\n"
                << "process: " << r.final.str(200) << "\n";
      return kDomainError;
  }
  return kDomainError;
}

int cmd_kam_herbrand(const std::string& theory_path, const std::string& proof,
                     std::uint64_t fuel, const std::string& format,
                     const std::string& out_path, bool trace) {
  auto th = load_theory(theory_path);
  herbrand::kam::Program user;
  if (proof == "builtin:whitecrow")
    user = herbrand::kam::parse_program(herbrand::whitecrow_proof_source());
  else if (proof == "builtin:pseudo")
    user = herbrand::kam::parse_program(herbrand::pseudo_induction_proof_source());
  else
    user = herbrand::kam::parse_program(slurp(proof));
  herbrand::kam::SchedulerMachine sched(user, th);
  auto run = sched.run_herbrand("proof", fuel, trace ? &std::cout : nullptr);
  using Outcome = herbrand::kam::SchedulerMachine::HerbrandRun::Outcome;
  if (run.outcome != Outcome::Tree) {
    std::cerr << "error: " << run.message << "\n";
    return kDomainError;
  }
  std::cerr << "completed in " << run.steps << " steps, froze " << run.frozen_created
            << " processes\n";
  emit(format_tree(*run.tree, format), out_path);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Herbrand trees for contradictory universal theories"};
  app.require_subcommand(1);

  std::string theory_path, tree_path, out_path, program_path, proof;
  std::string strategy = "relevance", format = "text", dflt, entry = "main";
  std::uint64_t fuel = 1000000;
  std::uint32_t max_depth = 64;
  bool trace = false, stats = false;
  std::vector<std::string> valuation;

  auto* build = app.add_subcommand("build", "construct a Herbrand tree for a theory");
  build->add_option("theory", theory_path, "theory file")->required();
  build->add_option("--strategy", strategy, "relevance|fair")
      ->check(CLI::IsMember({"relevance", "fair"}));
  build->add_option("--fuel", fuel, "index-scan budget");
  build->add_option("--max-depth", max_depth, "maximum tree depth");
  build->add_option("--format", format, "json|dot|text")
      ->check(CLI::IsMember({"json", "dot", "text"}));
  build->add_option("-o,--out", out_path, "write the tree to a file");
  build->add_flag("--stats", stats, "print scan statistics to stderr");

  auto* check = app.add_subcommand("check", "check a tree file against a theory");
  check->add_option("theory", theory_path, "theory file")->required();
  check->add_option("tree", tree_path, "tree JSON file")->required();

  auto* debug = app.add_subcommand(
      "debug", "walk a tree against an atom oracle and report the counter-example");
  debug->add_option("theory", theory_path, "theory file")->required();
  debug->add_option("tree", tree_path, "tree JSON file")->required();
  debug->add_option("--valuation", valuation,
                    "valuation file, or inline 'Atom=true,Atom=false' list");
  debug->add_option("--default", dflt, "truth value for atoms not listed")
      ->check(CLI::IsMember({"true", "false"}));

  auto* kam = app.add_subcommand("kam", "Krivine machine commands");
  kam->require_subcommand(1);

  auto* kam_run = kam->add_subcommand("run", "run a lambda-c program");
  kam_run->add_option("program", program_path, "program file")->required();
  kam_run->add_option("--entry", entry, "entry definition (default: main)");
  kam_run->add_option("--fuel", fuel, "step budget");
  kam_run->add_flag("--trace", trace, "print one line per machine step");

  auto* kam_h = kam->add_subcommand(
      "herbrand", "run a contradiction proof on the scheduler machine");
  kam_h->add_option("theory", theory_path, "theory file")->required();
  kam_h->add_option("--proof", proof,
                    "proof program file, builtin:whitecrow or builtin:pseudo")
      ->required();
  kam_h->add_option("--fuel", fuel, "step budget");
  kam_h->add_option("--format", format, "json|dot|text")
      ->check(CLI::IsMember({"json", "dot", "text"}));
  kam_h->add_option("-o,--out", out_path, "write the tree to a file");
  kam_h->add_flag("--trace", trace, "print one line per machine step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (app.got_subcommand(build))
      return cmd_build(theory_path, strategy, fuel, max_depth, format, out_path, stats);
    if (app.got_subcommand(check)) return cmd_check(theory_path, tree_path);
    if (app.got_subcommand(debug))
      return cmd_debug(theory_path, tree_path, valuation, dflt);
    if (kam->got_subcommand(kam_run))
      return cmd_kam_run(program_path, entry, fuel, trace);
    if (kam->got_subcommand(kam_h))
      return cmd_kam_herbrand(theory_path, proof, fuel, format, out_path, trace);
  } catch (const herbrand::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const herbrand::TreeIoError& e) {
    std::cerr << "tree error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}
