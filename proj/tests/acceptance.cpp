// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "essential/engine.hpp"
#include "essential/oracle.hpp"
#include "essential/properties.hpp"

using namespace essential;

namespace {

Term T(const std::string& text) {
  Term t = parse(text);
  return substitute(t, "I", parse("\\i.i"));
}

bool contains(const Steps& ss, const Term& t) {
  for (const StepResult& s : ss) {
    if (s.term == t) return true;
  }
  return false;
}

struct Verdicts {
  bool ok = true;
  std::ostringstream notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
  void report(const Report& r, bool strict = true) {
    bool pass = r.result == Result::Pass;
    std::string label = r.property + "/" + r.system + "<=" + std::to_string(r.size_bound);
    require(pass || (!strict && r.result == Result::Inconclusive),
            label + " " + std::string(to_string(r.result)) + " " + r.counterexample.value_or(""));
    notes << " " << label << ":" << r.checked_count;
  }
};

CheckOptions at(std::size_t size, bool closed = false) {
  CheckOptions o;
  o.size_bound = size;
  o.closed_only = closed;
  return o;
}

Verdicts worked_examples() {
  Verdicts o;
  Term i_ii = T("I (I I)");
  Term ii = T("I I");
  Steps h = head_steps(i_ii);
  Steps nh = neg_head_steps(i_ii);
  o.require(contains(h, ii) && contains(nh, ii), "I(II) ->h II and ->~h II");
  o.require(h.size() == 1 && !contains(nh, T("I")) && nh.size() == 1 &&
                !(h[0].step.position == nh[0].step.position),
            "the two steps fire distinct redexes");

  Term start = T("I (x (I I))");
  NormalizeResult head = normalize(start, SystemId::Head, 100);
  o.require(head.outcome == essential::Outcome::EssentialNormal && head.trace.size() == 1 &&
                head.trace.end() == T("x (I I)"),
            "maximal head sequence I(x(II)) ->h x(II)");
  ReductionGraph g = explore(start, Base::Beta);
  auto to_xi = path_exists(g, start, T("x I"), 2);
  o.require(to_xi && to_xi->size() == 2 && !(head.trace.end() == T("x I")), "a beta path reaches xI");

  Term t = T("x (I y)");
  o.require(lo_step(t) == parse("x y"), "x(Iy) ->lo xy");
  Term inst = substitute(t, "x", parse("\\z.z z"));
  Steps lo_inst = lo_steps(inst);
  o.require(lo_inst.size() == 1 && lo_inst[0].step.position.is_root() &&
                !(lo_inst[0].term == substitute(parse("x y"), "x", parse("\\z.z z"))),
            "instance under x <- \\z.zz has a root lo step instead");

  o.require(least_level(parse("x")).is_infinite(), "ll(x) = inf");
  o.require(least_level(T("(\\x.I I) y")) == Level(0), "ll((\\x.II)y) = 0");
  o.require(least_level(T("x (x (I I)) (I I)")) == Level(1), "ll(x(x(II))(II)) = 1");

  Term a = T("(\\x.I I) y");
  o.require(contains(ll_steps(a), T("(\\x.I) y")) && !contains(lo_steps(a), T("(\\x.I) y")),
            "(\\x.II)y ->ll (\\x.I)y but not ->lo");
  Term b = T("x (x (I I)) (I I)");
  Term b_lo = T("x (x I) (I I)");
  o.require(contains(lo_steps(b), b_lo) && contains(neg_ll_steps(b), b_lo) && !contains(ll_steps(b), b_lo),
            "x(x(II))(II) ->lo x(xI)(II) is a ->~ll step");
  o.notes << " 12 example checks";
  return o;
}

Verdicts decomposition() {
  Verdicts o;
  for (bool closed : {false, true}) {
    for (SystemId sys : kAllSystems) o.report(check_property(Property::Decomposition, sys, at(9, closed)));
  }
  return o;
}

Verdicts essential_systems() {
  Verdicts o;
  for (SystemId sys : {SystemId::Head, SystemId::LO}) o.report(check_property(Property::Determinism, sys, at(9)));
  for (SystemId sys : {SystemId::WeakCbV, SystemId::LeastLevel})
    o.report(check_property(Property::Diamond, sys, at(9)));
  for (SystemId sys : kAllSystems) o.report(check_property(Property::Persistence, sys, at(9)));
  for (SystemId sys : {SystemId::LO, SystemId::LeastLevel}) o.report(check_property(Property::Fullness, sys, at(9)));
  for (Property p : {Property::LLMonotone, Property::LLInvariant, Property::ShapePreservation})
    o.report(check_property(p, SystemId::LeastLevel, at(9)));
  return o;
}

Verdicts substitutivity() {
  Verdicts o;
  CheckOptions opts;
  opts.samples = 500;
  for (Flavor f : {Flavor::CbN, Flavor::CbV}) o.report(check_subst_index(f, opts));
  return o;
}

Verdicts factorization() {
  Verdicts o;
  for (SystemId sys : kAllSystems) o.report(check_factorization(sys, at(7), 4, 50000));
  // Wider than required: terms up to size 9.
  for (SystemId sys : kAllSystems) o.report(check_factorization(sys, at(9), 4, 50000));
  return o;
}

Verdicts indexed_split() {
  Verdicts o;
  CheckOptions opts;
  opts.samples = 1000;
  for (Flavor f : {Flavor::CbN, Flavor::CbV}) o.report(check_sequentialization(f, opts));
  return o;
}

Verdicts normalization() {
  Verdicts o;
  for (SystemId sys : {SystemId::LO, SystemId::LeastLevel, SystemId::Head})
    o.report(check_normalization(sys, at(8)));
  o.report(check_normalization(SystemId::WeakCbV, at(10, true)));
  // Wider than required.
  for (SystemId sys : {SystemId::LO, SystemId::LeastLevel, SystemId::Head})
    o.report(check_normalization(sys, at(10)));
  return o;
}

struct Criterion {
  int number;
  const char* title;
  double budget_seconds;
  std::function<Verdicts()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "worked-example regression", 1.0, worked_examples},
      {2, "decomposition suites", 120.0, decomposition},
      {3, "essential-system suites", 600.0, essential_systems},
      {4, "substitutivity index law", 30.0, substitutivity},
      {5, "factorization soundness", 600.0, factorization},
      {6, "indexed split law", 600.0, indexed_split},
      {7, "normalization", 600.0, normalization},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Verdicts o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      o.ok = false;
      o.notes << " [over time budget]";
    }
    if (!o.ok) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)%s\n", o.ok ? "PASS" : "FAIL", c.number, c.title, secs,
                o.notes.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
