#include "essential/properties.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <random>
#include <unordered_set>

#include "essential/engine.hpp"

namespace essential {

namespace {

constexpr std::pair<Property, std::string_view> kPropertyNames[] = {
    {Property::Merge, "merge"},
    {Property::Split, "split"},
    {Property::IndexedSplit, "indexed-split"},
    {Property::Persistence, "persistence"},
    {Property::Diamond, "diamond"},
    {Property::Determinism, "determinism"},
    {Property::Fullness, "fullness"},
    {Property::Decomposition, "decomposition"},
    {Property::LLMonotone, "ll-monotone"},
    {Property::LLInvariant, "ll-invariant"},
    {Property::ShapePreservation, "shape-preservation"},
    {Property::LLMeaning, "ll-meaning"},
    {Property::ParallelDiamond, "parallel-diamond"},
};

}  // namespace

std::string_view to_string(Property p) {
  for (const auto& [prop, name] : kPropertyNames) {
    if (prop == p) return name;
  }
  return "?";
}

std::optional<Property> parse_property(std::string_view text) {
  for (const auto& [prop, name] : kPropertyNames) {
    if (name == text) return prop;
  }
  return std::nullopt;
}

bool applies(Property p, SystemId sys) {
  switch (p) {
    case Property::Determinism:
      return sys == SystemId::Head || sys == SystemId::LO;
    case Property::Diamond:
      return sys == SystemId::WeakCbV || sys == SystemId::LeastLevel;
    case Property::Fullness:
      return sys == SystemId::LO || sys == SystemId::LeastLevel;
    case Property::LLMonotone:
    case Property::LLInvariant:
    case Property::ShapePreservation:
    case Property::LLMeaning:
      return sys == SystemId::LeastLevel;
    default:
      return true;
  }
}

std::string_view to_string(Result r) {
  switch (r) {
    case Result::Pass: return "PASS";
    case Result::Fail: return "FAIL";
    case Result::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::optional<Result> parse_result(std::string_view text) {
  if (text == "PASS") return Result::Pass;
  if (text == "FAIL") return Result::Fail;
  if (text == "INCONCLUSIVE") return Result::Inconclusive;
  return std::nullopt;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j = {{"property", r.property},
                      {"system", r.system},
                      {"size_bound", r.size_bound},
                      {"checked_count", r.checked_count},
                      {"result", to_string(r.result)}};
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.property = j.at("property").get<std::string>();
  r.system = j.at("system").get<std::string>();
  r.size_bound = j.at("size_bound").get<std::size_t>();
  r.checked_count = j.at("checked_count").get<std::uint64_t>();
  auto res = parse_result(j.at("result").get<std::string>());
  if (!res) throw std::invalid_argument("unknown result " + j.at("result").dump());
  r.result = *res;
  if (j.contains("counterexample")) r.counterexample = j.at("counterexample").get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

ItemOutcome guarded(const std::function<ItemOutcome(std::size_t)>& check, std::size_t i) {
  try {
    return check(i);
  } catch (const std::exception& e) {
    return ItemOutcome::fail(std::string("exception: ") + e.what());
  }
}

}  // namespace

SweepResult sweep_serial(std::size_t n, const std::function<ItemOutcome(std::size_t)>& check) {
  SweepResult out;
  for (std::size_t i = 0; i < n; ++i) {
    ItemOutcome r = guarded(check, i);
    if (r.result == Result::Fail) {
      return {i + 1, Result::Fail, std::move(r.detail)};
    }
    if (r.result == Result::Inconclusive && out.result == Result::Pass) {
      out.result = Result::Inconclusive;
      out.counterexample = std::move(r.detail);
    }
  }
  out.checked = n;
  return out;
}

SweepResult sweep_parallel(std::size_t n, const std::function<ItemOutcome(std::size_t)>& check,
                           int threads) {
  std::atomic<std::size_t> first_fail{n};
  std::size_t first_unknown = n;
  std::string fail_detail;
  std::string unknown_detail;
  std::mutex mu;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (std::int64_t k = 0; k < count; ++k) {
    auto i = static_cast<std::size_t>(k);
    if (i > first_fail.load(std::memory_order_relaxed)) continue;
    ItemOutcome r = guarded(check, i);
    if (r.result == Result::Pass) continue;
    std::lock_guard<std::mutex> lock(mu);
    if (r.result == Result::Fail && i < first_fail.load()) {
      first_fail.store(i);
      fail_detail = std::move(r.detail);
    } else if (r.result == Result::Inconclusive && i < first_unknown) {
      first_unknown = i;
      unknown_detail = std::move(r.detail);
    }
  }
  if (first_fail.load() < n) return {first_fail.load() + 1, Result::Fail, fail_detail};
  if (first_unknown < n) return {n, Result::Inconclusive, unknown_detail};
  return {n, Result::Pass, std::nullopt};
}

SweepResult sweep(std::size_t n, const std::function<ItemOutcome(std::size_t)>& check, int threads) {
  if (threads <= 0) return sweep_serial(n, check);
  return sweep_parallel(n, check, threads);
}

// ---------------------------------------------------------------------------
// Per-term properties

namespace {

std::string at(const Term& t, const std::string& what) { return print(t) + ": " + what; }

std::unordered_set<Term, TermHash> reducts(const Steps& steps) {
  std::unordered_set<Term, TermHash> out;
  for (const StepResult& s : steps) out.insert(s.term);
  return out;
}

ItemOutcome decomposition(SystemId sys, const Term& t) {
  Steps base = base_steps(t, base_of(sys));
  Steps ess = essential_steps(t, sys);
  Steps iness = inessential_steps(t, sys);
  Steps all;
  all.insert(all.end(), ess.begin(), ess.end());
  all.insert(all.end(), iness.begin(), iness.end());
  std::sort(all.begin(), all.end(), [](const StepResult& a, const StepResult& b) {
    return a.step.position < b.step.position;
  });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].step.position == all[i - 1].step.position) {
      return ItemOutcome::fail(at(t, "step at " + all[i].step.position.str() + " has both kinds"));
    }
  }
  if (all.size() != base.size()) {
    return ItemOutcome::fail(at(t, std::to_string(base.size()) + " base steps but " +
                                       std::to_string(all.size()) + " classified"));
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!(all[i].step.position == base[i].step.position) || !(all[i].term == base[i].term)) {
      return ItemOutcome::fail(at(t, "classified step differs from base step at " +
                                         base[i].step.position.str()));
    }
    if (all[i].step.level != base[i].step.level) {
      return ItemOutcome::fail(at(t, "level mismatch at " + base[i].step.position.str()));
    }
  }
  if (sys == SystemId::LeastLevel) {
    Level ll = least_level(t);
    for (const StepResult& s : all) {
      bool essential = s.step.kind == StepKind::Essential;
      if (essential != (s.step.level == ll)) {
        return ItemOutcome::fail(at(t, "kind of " + s.step.position.str() + " disagrees with its level"));
      }
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome persistence(SystemId sys, const Term& t) {
  if (essential_steps(t, sys).empty()) return ItemOutcome::pass();
  for (const StepResult& s : inessential_steps(t, sys)) {
    if (essential_steps(s.term, sys).empty()) {
      return ItemOutcome::fail(at(t, "inessential step at " + s.step.position.str() + " to " +
                                         print(s.term) + " loses the essential step"));
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome diamond(SystemId sys, const Term& t) {
  Steps ess = essential_steps(t, sys);
  for (std::size_t i = 0; i < ess.size(); ++i) {
    for (std::size_t j = i + 1; j < ess.size(); ++j) {
      if (ess[i].term == ess[j].term) continue;
      auto left = reducts(essential_steps(ess[i].term, sys));
      bool joined = false;
      for (const StepResult& r : essential_steps(ess[j].term, sys)) {
        if (left.count(r.term)) {
          joined = true;
          break;
        }
      }
      if (!joined) {
        return ItemOutcome::fail(at(t, "steps at " + ess[i].step.position.str() + " and " +
                                           ess[j].step.position.str() + " do not join in one step"));
      }
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome determinism(SystemId sys, const Term& t) {
  Steps ess = essential_steps(t, sys);
  if (ess.size() > 1) return ItemOutcome::fail(at(t, std::to_string(ess.size()) + " essential steps"));
  std::optional<Term> direct = sys == SystemId::Head ? head_step(t) : lo_step(t);
  if (direct.has_value() != !ess.empty() || (direct && !(*direct == ess.front().term))) {
    return ItemOutcome::fail(at(t, "deterministic step disagrees with the step list"));
  }
  return ItemOutcome::pass();
}

ItemOutcome fullness(SystemId sys, const Term& t) {
  if (essential_steps(t, sys).empty() != is_normal(t)) {
    return ItemOutcome::fail(at(t, is_normal(t) ? "normal term with an essential step"
                                                : "essential-normal term is not normal"));
  }
  return ItemOutcome::pass();
}

ItemOutcome ll_monotone(const Term& t) {
  Level ll = least_level(t);
  for (const StepResult& s : base_steps(t, Base::Beta)) {
    if (least_level(s.term) < ll) {
      return ItemOutcome::fail(at(t, "step at " + s.step.position.str() + " lowers the least level"));
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome ll_invariant(const Term& t) {
  Level ll = least_level(t);
  for (const StepResult& s : neg_ll_steps(t)) {
    if (least_level(s.term) != ll) {
      return ItemOutcome::fail(at(t, "inessential step at " + s.step.position.str() +
                                         " changes the least level"));
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome shape_preservation(const Term& t) {
  if (t.is_lam()) return ItemOutcome::pass();
  Level ll = least_level(t);
  if (ll.is_infinite() || ll == Level(0)) return ItemOutcome::pass();
  for (const StepResult& s : level_indexed_steps(t)) {
    if (s.step.level == ll && s.term.is_lam()) {
      return ItemOutcome::fail(at(t, "step at " + s.step.position.str() + " yields an abstraction"));
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome ll_meaning(const Term& t) {
  Level lowest;
  for (const StepResult& s : level_indexed_steps(t)) lowest = min(lowest, s.step.level);
  if (lowest != least_level(t)) {
    return ItemOutcome::fail(at(t, "least level " + least_level(t).str() + " but lowest step level " +
                                       lowest.str()));
  }
  return ItemOutcome::pass();
}

ItemOutcome merge_check(SystemId sys, const Term& t, std::size_t cap) {
  for (const ParDerivation& d : all_parallel_steps(t, flavor_of(sys), cap)) {
    if (!is_parallel_inessential(d, sys)) continue;
    for (const StepResult& e : essential_steps(d.target(), sys)) {
      ParDerivation m = merge(d, e, sys);
      if (!(m.source() == t) || !(m.target() == e.term) || m.flavor() != flavor_of(sys)) {
        return ItemOutcome::fail(at(t, "merge with step at " + e.step.position.str() +
                                           " has wrong endpoints"));
      }
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome split_check(SystemId sys, const Term& t, std::size_t cap, bool indexed) {
  for (const ParDerivation& d : all_parallel_steps(t, flavor_of(sys), cap)) {
    SplitResult sr = split(d, sys);
    if (auto p = trace_problem(sr.essential, sys)) return ItemOutcome::fail(at(t, "split trace: " + *p));
    for (const StepResult& s : sr.essential.steps) {
      if (s.step.kind != StepKind::Essential) {
        return ItemOutcome::fail(at(t, "split produced an inessential step"));
      }
    }
    if (!is_parallel_inessential(sr.residual, sys)) {
      return ItemOutcome::fail(at(t, "split residual is not inessential"));
    }
    if (!(sr.residual.source() == sr.essential.end()) || !(sr.residual.target() == d.target())) {
      return ItemOutcome::fail(at(t, "split does not preserve endpoints"));
    }
    if (indexed) {
      for (std::size_t i = 1; i < sr.counts.size(); ++i) {
        if (sr.counts[i] + 1 != sr.counts[i - 1]) {
          return ItemOutcome::fail(at(t, "split iteration took index " + std::to_string(sr.counts[i - 1]) +
                                             " to " + std::to_string(sr.counts[i])));
        }
      }
      if (sys == SystemId::LeastLevel) {
        Level k = sr.residual.level();
        if (!(k.is_infinite() || k > least_level(sr.residual.source()))) {
          return ItemOutcome::fail(at(t, "residual level does not exceed the least level"));
        }
      }
    }
  }
  return ItemOutcome::pass();
}

ItemOutcome parallel_diamond(SystemId sys, const Term& t, std::size_t cap) {
  Flavor f = flavor_of(sys) == Flavor::CbV ? Flavor::CbV : Flavor::CbN;
  Steps one = base_steps(t, base_of(sys));
  for (std::size_t i = 0; i < one.size(); ++i) {
    std::unordered_set<Term, TermHash> left;
    for (const ParDerivation& d : all_parallel_steps(one[i].term, f, cap)) left.insert(d.target());
    for (std::size_t j = i + 1; j < one.size(); ++j) {
      bool joined = false;
      for (const ParDerivation& d : all_parallel_steps(one[j].term, f, cap)) {
        if (left.count(d.target())) {
          joined = true;
          break;
        }
      }
      if (!joined) {
        return ItemOutcome::fail(at(t, "parallel steps do not close the peak at " +
                                           one[i].step.position.str() + " and " +
                                           one[j].step.position.str()));
      }
    }
  }
  return ItemOutcome::pass();
}

EnumSpec spec_for(const CheckOptions& opts) {
  EnumSpec spec;
  spec.max_size = opts.size_bound;
  spec.closed_only = opts.closed_only;
  return spec;
}

}  // namespace

ItemOutcome check_term(Property p, SystemId sys, const Term& t, const CheckOptions& opts) {
  switch (p) {
    case Property::Merge: return merge_check(sys, t, opts.parallel_cap);
    case Property::Split: return split_check(sys, t, opts.parallel_cap, false);
    case Property::IndexedSplit: return split_check(sys, t, opts.parallel_cap, true);
    case Property::Persistence: return persistence(sys, t);
    case Property::Diamond: return diamond(sys, t);
    case Property::Determinism: return determinism(sys, t);
    case Property::Fullness: return fullness(sys, t);
    case Property::Decomposition: return decomposition(sys, t);
    case Property::LLMonotone: return ll_monotone(t);
    case Property::LLInvariant: return ll_invariant(t);
    case Property::ShapePreservation: return shape_preservation(t);
    case Property::LLMeaning: return ll_meaning(t);
    case Property::ParallelDiamond: return parallel_diamond(sys, t, opts.parallel_cap);
  }
  return ItemOutcome::fail("unknown property");
}

Report check_property(Property p, SystemId sys, const CheckOptions& opts) {
  if (!applies(p, sys)) {
    throw std::invalid_argument(std::string(to_string(p)) + " is not stated for " +
                                std::string(to_string(sys)));
  }
  std::vector<Term> terms = enumerate_terms(spec_for(opts));
  SweepResult r = sweep(
      terms.size(), [&](std::size_t i) { return check_term(p, sys, terms[i], opts); }, opts.threads);
  return {std::string(to_string(p)), std::string(to_string(sys)), opts.size_bound, r.checked, r.result,
          r.counterexample};
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct Lengths {
  std::size_t shortest;
  std::size_t longest;
};

// Path lengths from node v to terminal nodes of an acyclic graph.
Lengths lengths_from(const ReductionGraph& g, std::size_t v, std::vector<std::optional<Lengths>>& memo) {
  if (memo[v]) return *memo[v];
  Lengths out{0, 0};
  if (!g.edges[v].empty()) {
    out = {static_cast<std::size_t>(-1), 0};
    for (const GraphEdge& e : g.edges[v]) {
      Lengths l = lengths_from(g, e.to, memo);
      out.shortest = std::min(out.shortest, l.shortest + 1);
      out.longest = std::max(out.longest, l.longest + 1);
    }
  }
  memo[v] = out;
  return out;
}

}  // namespace

ItemOutcome check_term_normalization(SystemId sys, const Term& t, const CheckOptions& opts) {
  ReductionGraph base = explore(t, base_of(sys), opts.node_budget, opts.depth_budget);
  bool certified = false;
  for (const Term& u : base.nodes) {
    if (essential_steps(u, sys).empty()) {
      certified = true;
      break;
    }
  }
  if (!certified) return ItemOutcome::pass();

  ReductionGraph eg = explore_with(
      t, [sys](const Term& u) { return essential_steps(u, sys); }, opts.node_budget, opts.fuel);
  if (strongly_normalizing(eg) == Verdict::No) {
    return ItemOutcome::fail(at(t, "infinite essential sequence"));
  }
  if (eg.truncated) return ItemOutcome::unknown(at(t, "essential graph exceeds the bounds"));

  bool full = sys == SystemId::LO || sys == SystemId::LeastLevel;
  bool closed = free_names(t).empty();
  for (std::size_t i = 0; i < eg.size(); ++i) {
    if (!eg.edges[i].empty()) continue;
    const Term& end = eg.nodes[i];
    if (full && !is_normal(end)) {
      return ItemOutcome::fail(at(t, "essential sequence stops at non-normal " + print(end)));
    }
    if (sys == SystemId::WeakCbV && closed && !is_value(end)) {
      return ItemOutcome::fail(at(t, "weak sequence of a closed term stops at non-value " + print(end)));
    }
  }
  std::vector<std::optional<Lengths>> memo(eg.size());
  Lengths l = lengths_from(eg, 0, memo);
  if (l.shortest != l.longest) {
    return ItemOutcome::fail(at(t, "maximal essential sequences of lengths " + std::to_string(l.shortest) +
                                       " and " + std::to_string(l.longest)));
  }
  if (sys == SystemId::Head || sys == SystemId::LO) {
    NormalizeResult nr = normalize(t, sys, opts.fuel);
    if (nr.outcome == Outcome::FuelExhausted) {
      return ItemOutcome::unknown(at(t, "normalization ran out of fuel"));
    }
  }
  return ItemOutcome::pass();
}

Report check_normalization(SystemId sys, const CheckOptions& opts) {
  std::vector<Term> terms = enumerate_terms(spec_for(opts));
  SweepResult r = sweep(
      terms.size(), [&](std::size_t i) { return check_term_normalization(sys, terms[i], opts); },
      opts.threads);
  return {"normalization", std::string(to_string(sys)), opts.size_bound, r.checked, r.result,
          r.counterexample};
}

// ---------------------------------------------------------------------------
// Randomized checks

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + i + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

const std::vector<std::string> kNames{"x", "y"};

}  // namespace

std::optional<SampledDerivation> sample_derivation(std::uint64_t seed, Flavor flavor,
                                                   std::size_t target_size, std::uint64_t max_index,
                                                   const std::vector<std::string>& names) {
  EnumSpec spec;
  spec.max_size = target_size;
  spec.free_names = names;
  Term t = random_term(seed, target_size, spec);
  std::mt19937_64 rng(mix_seed(seed, 1));
  std::vector<Position> rs = redexes(t, flavor == Flavor::CbV ? Base::BetaV : Base::Beta);
  for (int attempt = 0; attempt < 32; ++attempt) {
    RedexSelection sel;
    for (const Position& p : rs) {
      if (rng() & 1) sel.push_back(p);
    }
    while (true) {
      ParDerivation d = derive(t, sel, flavor);
      if (d.count() <= max_index) return SampledDerivation{t, d};
      if (sel.empty()) break;
      sel.erase(sel.begin() + static_cast<std::ptrdiff_t>(rng() % sel.size()));
    }
  }
  return std::nullopt;
}

Report check_subst_index(Flavor flavor, const CheckOptions& opts) {
  auto check = [&](std::size_t i) -> ItemOutcome {
    std::uint64_t seed = mix_seed(opts.seed, i);
    auto d1 = sample_derivation(seed, flavor, 4 + seed % 6, 5, kNames);
    if (!d1) return ItemOutcome::unknown("no derivation sampled");
    std::optional<SampledDerivation> d2;
    for (std::uint64_t k = 0; k < 64 && !d2; ++k) {
      std::uint64_t s2 = mix_seed(seed, 100 + k);
      auto cand = sample_derivation(s2, flavor, 1 + s2 % 5, 3, kNames);
      if (cand && (flavor != Flavor::CbV || is_value(cand->term))) d2 = cand;
    }
    if (!d2) return ItemOutcome::unknown("no substituend sampled");
    const ParDerivation& a = d1->derivation;
    const ParDerivation& b = d2->derivation;
    ParDerivation r = subst_parallel(a, "x", b);
    std::string what = print(d1->term) + " [x <- " + print(d2->term) + "]";
    if (!(r.source() == substitute(a.source(), "x", b.source()))) {
      return ItemOutcome::fail(what + ": wrong source");
    }
    if (!(r.target() == substitute(a.target(), "x", b.target()))) {
      return ItemOutcome::fail(what + ": wrong target");
    }
    std::uint64_t expect = a.count() + count_occurrences(a.target(), "x") * b.count();
    if (r.count() != expect) {
      return ItemOutcome::fail(what + ": index " + std::to_string(r.count()) + ", expected " +
                               std::to_string(expect));
    }
    ParDerivation again = derive(r.source(), selection(r), flavor);
    if (again.count() != r.count() || !(again.target() == r.target())) {
      return ItemOutcome::fail(what + ": re-derivation disagrees");
    }
    return ItemOutcome::pass();
  };
  SweepResult r = sweep(opts.samples, check, opts.threads);
  return {"subst-index", std::string(to_string(flavor)), 9, r.checked, r.result, r.counterexample};
}

Report check_subst_level(const CheckOptions& opts) {
  auto check = [&](std::size_t i) -> ItemOutcome {
    std::uint64_t seed = mix_seed(opts.seed, i);
    EnumSpec spec;
    Term t = random_term(seed, 4 + seed % 6, spec);
    Term u = random_term(mix_seed(seed, 7), 1 + seed % 4, spec);
    Term tu = substitute(t, "x", u);
    Steps after = level_indexed_steps(tu);
    for (const StepResult& s : level_indexed_steps(t)) {
      Term su = substitute(s.term, "x", u);
      bool found = std::any_of(after.begin(), after.end(), [&](const StepResult& a) {
        return a.step.position == s.step.position && a.step.level == s.step.level && a.term == su;
      });
      if (!found) {
        return ItemOutcome::fail(print(t) + " [x <- " + print(u) + "]: step at " +
                                 s.step.position.str() + " of level " + s.step.level.str() +
                                 " is not preserved");
      }
    }
    return ItemOutcome::pass();
  };
  SweepResult r = sweep(opts.samples, check, opts.threads);
  return {"subst-level", "ll", 9, r.checked, r.result, r.counterexample};
}

Report check_sequentialization(Flavor flavor, const CheckOptions& opts) {
  std::vector<SystemId> systems;
  for (SystemId s : kAllSystems) {
    if (flavor_of(s) == flavor) systems.push_back(s);
  }
  Base base = flavor == Flavor::CbV ? Base::BetaV : Base::Beta;
  auto check = [&](std::size_t i) -> ItemOutcome {
    std::optional<SampledDerivation> sd;
    for (std::uint64_t k = 0; k < 16; ++k) {
      std::uint64_t seed = mix_seed(opts.seed, i * 16 + k);
      auto cand = sample_derivation(seed, flavor, 5 + seed % 6, 6, kNames);
      if (cand && (!sd || cand->derivation.count() > 0)) sd = cand;
      if (sd && sd->derivation.count() > 0) break;
    }
    if (!sd) return ItemOutcome::unknown("no derivation sampled");
    const ParDerivation& d = sd->derivation;
    std::string what = print(d.source()) + " => " + print(d.target()) + " (index " +
                       std::to_string(d.count()) + ")";
    for (SystemId sys : systems) {
      SplitResult sr = split(d, sys);
      for (std::size_t j = 1; j < sr.counts.size(); ++j) {
        if (sr.counts[j] + 1 != sr.counts[j - 1]) {
          return ItemOutcome::fail(what + ": " + std::string(to_string(sys)) +
                                   " split does not lower the index by one");
        }
      }
      if (!is_parallel_inessential(sr.residual, sys) || !(sr.residual.target() == d.target())) {
        return ItemOutcome::fail(what + ": " + std::string(to_string(sys)) + " split residual is wrong");
      }
    }
    std::uint64_t n = d.count();
    if (n == 0) {
      return d.source() == d.target() ? ItemOutcome::pass() : ItemOutcome::fail(what + ": index 0 moved");
    }
    ReductionGraph g = explore(d.source(), base, opts.node_budget, n);
    // A path of at least one step: leave the root first, then n-1 more.
    for (const GraphEdge& e : g.edges[0]) {
      if (path_exists(g, g.nodes[e.to], d.target(), n - 1)) return ItemOutcome::pass();
    }
    if (g.truncated && g.size() >= opts.node_budget) {
      return ItemOutcome::unknown(what + ": graph budget hit");
    }
    return ItemOutcome::fail(what + ": target not reachable in " + std::to_string(n) + " steps");
  };
  SweepResult r = sweep(opts.samples, check, opts.threads);
  return {"sequentialization", std::string(to_string(flavor)), 10, r.checked, r.result,
          r.counterexample};
}

namespace {

struct Sequence {
  std::size_t term;
  std::vector<Position> positions;
};

void sequences_from(const Term& t, Base base, std::size_t term, std::size_t max_len,
                    std::vector<Position>& prefix, const std::function<void(Sequence)>& emit) {
  if (prefix.size() == max_len) return;
  for (StepResult& s : base_steps(t, base)) {
    prefix.push_back(s.step.position);
    emit(Sequence{term, prefix});
    sequences_from(s.term, base, term, max_len, prefix, emit);
    prefix.pop_back();
  }
}

}  // namespace

Report check_factorization(SystemId sys, const CheckOptions& opts, std::size_t max_len,
                           std::size_t max_sequences) {
  std::vector<Term> terms = enumerate_terms(spec_for(opts));
  std::vector<Sequence> sample;
  std::mt19937_64 rng(opts.seed);
  std::uint64_t seen = 0;
  std::vector<Position> prefix;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    sequences_from(terms[i], base_of(sys), i, max_len, prefix, [&](Sequence s) {
      if (sample.size() < max_sequences) {
        sample.push_back(std::move(s));
      } else {
        std::uniform_int_distribution<std::uint64_t> pick(0, seen);
        std::uint64_t j = pick(rng);
        if (j < max_sequences) sample[j] = std::move(s);
      }
      ++seen;
    });
  }
  auto check = [&](std::size_t i) -> ItemOutcome {
    const Sequence& s = sample[i];
    Trace tr = make_trace(terms[s.term], s.positions, sys);
    Factorization f = factorize(tr, sys);
    if (auto p = factorization_problem(f, tr, sys)) {
      std::string path;
      for (const Position& q : s.positions) path += " " + q.str();
      return ItemOutcome::fail(print(terms[s.term]) + " with steps" + path + ": " + *p);
    }
    return ItemOutcome::pass();
  };
  SweepResult r = sweep(sample.size(), check, opts.threads);
  return {"factorization", std::string(to_string(sys)), opts.size_bound, r.checked, r.result,
          r.counterexample};
}

}  // namespace essential
