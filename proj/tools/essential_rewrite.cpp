#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "essential/engine.hpp"
#include "essential/oracle.hpp"
#include "essential/parallel.hpp"
#include "essential/properties.hpp"
#include "essential/reduction.hpp"
#include "essential/term.hpp"

using namespace essential;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kFuel = 2, kFail = 3, kInconclusive = 4 };

struct Config {
  std::string system = "head";
  std::size_t fuel = 1000;
  std::size_t size = 8;
  std::size_t budget = kDefaultNodeBudget;
  std::size_t depth = kDefaultDepthBudget;
  std::string output = "text";
  std::uint64_t seed = 1;
  int parallel = 0;
  bool no_prelude = false;
  bool closed = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

void load_config(const char* path, Config& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError(std::string("cannot read config file ") + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(std::string(path) + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "system") cfg.system = val;
      else if (key == "fuel") cfg.fuel = std::stoul(val);
      else if (key == "size") cfg.size = std::stoul(val);
      else if (key == "budget") cfg.budget = std::stoul(val);
      else if (key == "depth") cfg.depth = std::stoul(val);
      else if (key == "output") cfg.output = val;
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "parallel") cfg.parallel = std::stoi(val);
      else throw UsageError(std::string(path) + ":" + std::to_string(lineno) + ": unknown key " + key);
    } catch (const std::logic_error&) {
      throw UsageError(std::string(path) + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

const std::map<std::string, std::string>& prelude() {
  static const std::map<std::string, std::string> defs = {
      {"I", "\\x.x"},
      {"K", "\\x.\\y.x"},
      {"S", "\\x.\\y.\\z.x z (y z)"},
      {"Delta", "\\x.x x"},
      {"Omega", "(\\x.x x) (\\x.x x)"},
  };
  return defs;
}

Term read_term(const std::string& text, const Config& cfg) {
  Term t = parse(text);
  if (cfg.no_prelude) return t;
  for (const auto& [name, def] : prelude()) t = substitute(t, name, parse(def));
  return t;
}

bool json_out(const Config& cfg) { return cfg.output == "json"; }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string level_text(Level l, bool ascii) { return ascii ? l.ascii() : l.str(); }

json level_json(Level l) {
  if (l.is_infinite()) return "inf";
  return l.value();
}

// ---------------------------------------------------------------------------

int cmd_parse(const std::string& text, const Config& cfg) {
  Term t = read_term(text, cfg);
  if (json_out(cfg)) {
    emit({{"term", print(t)},
          {"size", t.size()},
          {"value", is_value(t)},
          {"normal", is_normal(t)},
          {"neutral", is_neutral(t)}});
  } else {
    std::cout << print(t) << "\n";
  }
  return kOk;
}

void print_steps(const Trace& tr, bool with_level) {
  std::size_t i = 0;
  for (const StepResult& s : tr.steps) {
    std::cout << "  " << ++i << ". " << to_string(s.step.kind) << " at " << s.step.position.str();
    if (with_level) std::cout << " (level " << s.step.level.str() << ")";
    std::cout << " -> " << print(s.term) << "\n";
  }
}

int cmd_reduce(const std::string& text, const Config& cfg) {
  Term t = read_term(text, cfg);
  Trace tr(t);
  std::string outcome;
  bool exhausted = false;
  if (cfg.system == "beta" || cfg.system == "betav") {
    Base base = cfg.system == "beta" ? Base::Beta : Base::BetaV;
    Term cur = t;
    while (true) {
      Steps next = base_steps(cur, base);
      if (next.empty()) {
        outcome = to_string(Outcome::NormalFormReached);
        break;
      }
      if (tr.size() >= cfg.fuel) {
        outcome = to_string(Outcome::FuelExhausted);
        exhausted = true;
        break;
      }
      cur = next.front().term;
      tr.steps.push_back(std::move(next.front()));
    }
  } else {
    auto sys = parse_system(cfg.system);
    if (!sys) throw UsageError("unknown system " + cfg.system);
    NormalizeResult r = normalize(t, *sys, cfg.fuel);
    tr = std::move(r.trace);
    outcome = to_string(r.outcome);
    exhausted = r.outcome == Outcome::FuelExhausted;
  }
  bool levels = cfg.system == "ll";
  if (json_out(cfg)) {
    json j = to_json(tr);
    j["system"] = cfg.system;
    j["outcome"] = outcome;
    if (!levels) {
      for (auto& s : j["steps"]) s.erase("level");
    }
    emit(j);
  } else {
    std::cout << print(t) << "\n";
    print_steps(tr, levels);
    std::cout << outcome << " after " << tr.size() << (tr.size() == 1 ? " step" : " steps") << ": "
              << print(tr.end()) << "\n";
  }
  return exhausted ? kFuel : kOk;
}

int cmd_factorize(const std::string& file, const Config& cfg) {
  auto sys = parse_system(cfg.system);
  if (!sys) throw UsageError("unknown system " + cfg.system);
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read " + file);
  std::string line;
  int lineno = 0;
  std::optional<Term> start;
  std::vector<Position> positions;
  std::vector<int> lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    if (!start) {
      try {
        start = read_term(l, cfg);
      } catch (const ParseError& e) {
        throw UsageError(file + ":" + std::to_string(lineno) + ": " + e.what());
      }
      continue;
    }
    if (l.rfind("pos", 0) != 0 || (l.size() > 3 && !std::isspace(static_cast<unsigned char>(l[3])))) {
      throw UsageError(file + ":" + std::to_string(lineno) + ": expected 'pos <path>'");
    }
    try {
      positions.push_back(Position::parse(l.substr(3)));
    } catch (const InvalidPosition& e) {
      throw UsageError(file + ":" + std::to_string(lineno) + ": " + e.what());
    }
    lines.push_back(lineno);
  }
  if (!start) throw UsageError(file + ": missing start term");
  Trace tr(*start);
  try {
    tr = make_trace(*start, positions, *sys);
  } catch (const InvalidTrace& e) {
    throw UsageError(file + ":" + std::to_string(lines.at(e.step())) + ": " + e.what());
  }
  Factorization f = factorize(tr, *sys);
  if (json_out(cfg)) {
    json j = to_json(f);
    j["system"] = cfg.system;
    emit(j);
  } else {
    bool levels = *sys == SystemId::LeastLevel;
    std::cout << print(f.essential.start) << "\n";
    std::cout << "essential (" << f.essential.size() << "):\n";
    print_steps(f.essential, levels);
    std::cout << "inessential (" << f.inessential.size() << "):\n";
    print_steps(f.inessential, levels);
    std::cout << "end: " << print(f.inessential.end()) << "\n";
  }
  return kOk;
}

int cmd_level(const std::string& text, const Config& cfg) {
  Term t = read_term(text, cfg);
  Level ll = least_level(t);
  Steps steps = level_indexed_steps(t);
  if (json_out(cfg)) {
    json redexes = json::array();
    for (const StepResult& s : steps) {
      redexes.push_back({{"position", s.step.position.str()},
                         {"level", s.step.level.value()},
                         {"essential", s.step.level == ll},
                         {"term", print(s.term)}});
    }
    emit({{"term", print(t)}, {"least_level", level_json(ll)}, {"redexes", std::move(redexes)}});
  } else {
    std::cout << level_text(ll, false) << "\n";
    for (const StepResult& s : steps) {
      std::cout << "  " << s.step.position.str() << " level " << s.step.level.str()
                << (s.step.level == ll ? " (ll)" : "") << " -> " << print(s.term) << "\n";
    }
  }
  return kOk;
}

int report_exit(const Report& r, const Config& cfg) {
  if (json_out(cfg)) {
    emit(to_json(r));
  } else {
    std::cout << to_string(r.result) << " " << r.property << " " << r.system << " size<=" << r.size_bound
              << " checked " << r.checked_count << "\n";
    if (r.counterexample) std::cout << "  " << *r.counterexample << "\n";
  }
  switch (r.result) {
    case Result::Pass: return kOk;
    case Result::Fail: return kFail;
    case Result::Inconclusive: return kInconclusive;
  }
  return kFail;
}

int cmd_check(const std::string& name, const std::string& flavor_text, std::size_t samples,
              const Config& cfg) {
  CheckOptions opts;
  opts.size_bound = cfg.size;
  opts.fuel = cfg.fuel;
  opts.node_budget = cfg.budget;
  opts.depth_budget = cfg.depth;
  opts.threads = cfg.parallel;
  opts.seed = cfg.seed;
  opts.samples = samples;
  opts.closed_only = cfg.closed;
  auto flavor = parse_flavor(flavor_text);
  if (!flavor) throw UsageError("unknown flavor " + flavor_text);
  if (name == "subst-index") return report_exit(check_subst_index(*flavor, opts), cfg);
  if (name == "subst-level") return report_exit(check_subst_level(opts), cfg);
  if (name == "sequentialization") return report_exit(check_sequentialization(*flavor, opts), cfg);

  auto sys = parse_system(cfg.system);
  if (!sys) throw UsageError("unknown system " + cfg.system);
  if (name == "normalization") return report_exit(check_normalization(*sys, opts), cfg);
  if (name == "factorization") return report_exit(check_factorization(*sys, opts), cfg);
  auto prop = parse_property(name);
  if (!prop) throw UsageError("unknown property " + name);
  if (!applies(*prop, *sys)) throw UsageError(name + " is not stated for " + cfg.system);
  return report_exit(check_property(*prop, *sys, opts), cfg);
}

int cmd_graph(const std::string& text, const Config& cfg) {
  Term t = read_term(text, cfg);
  Base base = Base::Beta;
  if (cfg.system == "betav" || cfg.system == "weak-cbv") base = Base::BetaV;
  ReductionGraph g = explore(t, base, cfg.budget, cfg.depth);
  json j = to_json(g);
  j["weakly_normalizing"] = to_string(weakly_normalizing(g));
  j["strongly_normalizing"] = to_string(strongly_normalizing(g));
  emit(j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  try {
    if (const char* path = std::getenv("ESSENTIAL_REWRITE_CONFIG")) load_config(path, cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Essential and inessential reduction in the lambda calculus", "essential-rewrite"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--system", cfg.system, "head, lo, weak-cbv or ll; reduce also takes beta, betav");
  app.add_option("--fuel", cfg.fuel, "Step limit")->check(CLI::PositiveNumber);
  app.add_option("--size", cfg.size, "Term size bound for check")->check(CLI::PositiveNumber);
  app.add_option("--budget", cfg.budget, "Node budget for graph searches")->check(CLI::PositiveNumber);
  app.add_option("--depth", cfg.depth, "Depth budget for graph searches")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for sampled checks");
  app.add_option("--parallel", cfg.parallel, "Worker threads for check (0 = serial)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--no-prelude", cfg.no_prelude, "Do not expand I, K, S, Delta, Omega");

  std::string term_text;
  std::string file;
  std::string property;
  std::string flavor = "cbn";
  std::size_t samples = 500;

  auto* parse_cmd = app.add_subcommand("parse", "Parse a term and report its shape");
  parse_cmd->add_option("term", term_text)->required();
  auto* print_cmd = app.add_subcommand("print", "Print a term with minimal parentheses");
  print_cmd->add_option("term", term_text)->required();
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce with a strategy and print the trace");
  reduce_cmd->add_option("term", term_text)->required();
  auto* fact_cmd = app.add_subcommand("factorize", "Factorize a step sequence read from a file");
  fact_cmd->add_option("file", file)->required();
  auto* level_cmd = app.add_subcommand("level", "Least level and the level of every redex");
  level_cmd->add_option("term", term_text)->required();
  auto* check_cmd = app.add_subcommand("check", "Run a property check");
  check_cmd->add_option("property", property)->required();
  check_cmd->add_option("--flavor", flavor, "cbn, cbv or leveled");
  check_cmd->add_flag("--closed", cfg.closed, "Only closed terms");
  check_cmd->add_option("--samples", samples, "Samples for randomized checks")->check(CLI::PositiveNumber);
  auto* graph_cmd = app.add_subcommand("graph", "Export the reduction graph as JSON");
  graph_cmd->add_option("term", term_text)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse_cmd) {
      if (!json_out(cfg)) cfg.output = "json";
      return cmd_parse(term_text, cfg);
    }
    if (*print_cmd) return cmd_parse(term_text, cfg);
    if (*reduce_cmd) return cmd_reduce(term_text, cfg);
    if (*fact_cmd) return cmd_factorize(file, cfg);
    if (*level_cmd) return cmd_level(term_text, cfg);
    if (*check_cmd) return cmd_check(property, flavor, samples, cfg);
    if (*graph_cmd) return cmd_graph(term_text, cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
