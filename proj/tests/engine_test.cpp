#include <gtest/gtest.h>

#include <functional>

#include "essential/engine.hpp"
#include "essential/oracle.hpp"
#include "support.hpp"

namespace essential {
namespace {

using testing::T;

Position P(const std::string& s) { return Position::parse(s); }

std::vector<Term> terms_upto(std::size_t n) {
  EnumSpec spec;
  spec.max_size = n;
  return enumerate_terms(spec);
}

StepResult essential_at(const Term& t, const std::string& pos, SystemId sys) {
  for (const StepResult& s : essential_steps(t, sys)) {
    if (s.step.position == P(pos)) return s;
  }
  throw std::runtime_error("no essential step at " + pos);
}

// Independent check of a factorization: every step re-fired from its
// position, tagged as the system classifies it, essential ones first, and
// the end points agree with the input.
::testing::AssertionResult valid(const Factorization& f, const Trace& in, SystemId sys) {
  if (!(f.essential.start == in.start)) return ::testing::AssertionFailure() << "start moved";
  Term cur = in.start;
  auto replay = [&](const Trace& tr, StepKind want) -> std::optional<std::string> {
    if (!(tr.start == cur)) return "segments do not join";
    for (const StepResult& s : tr.steps) {
      if (classify(cur, s.step.position, sys) != want) return "wrong kind at " + s.step.position.str();
      if (s.step.kind != want) return "wrong tag at " + s.step.position.str();
      Term next = step_at(cur, s.step.position, base_of(sys));
      if (!(next == s.term)) return "wrong reduct at " + s.step.position.str();
      cur = next;
    }
    return std::nullopt;
  };
  if (auto e = replay(f.essential, StepKind::Essential)) return ::testing::AssertionFailure() << *e;
  if (auto e = replay(f.inessential, StepKind::Inessential)) return ::testing::AssertionFailure() << *e;
  if (!(cur == in.end())) return ::testing::AssertionFailure() << "end point differs";
  return ::testing::AssertionSuccess();
}

TEST(Split, Identity) {
  for (SystemId sys : kAllSystems) {
    ParDerivation id = identity(T("I (I I)"), flavor_of(sys));
    SplitResult r = split(id, sys);
    EXPECT_EQ(r.essential.size(), 0u);
    EXPECT_TRUE(r.residual.is_identity());
    EXPECT_FALSE(split_once(id, sys).has_value());
  }
}

TEST(Split, HeadExample) {
  Term t = T("I (x (I I))");
  ParDerivation d = derive(t, {P("root"), P("R.R")}, Flavor::CbN);
  SplitResult r = split(d, SystemId::Head);
  ASSERT_EQ(r.essential.size(), 1u);
  EXPECT_EQ(r.essential.steps[0].term, T("x (I I)"));
  EXPECT_EQ(r.residual.source(), T("x (I I)"));
  EXPECT_EQ(r.residual.target(), T("x I"));
  EXPECT_EQ(selection(r.residual), RedexSelection{P("R")});
  EXPECT_TRUE(is_parallel_inessential(r.residual, SystemId::Head));
  EXPECT_EQ(r.counts, (std::vector<std::uint64_t>{2, 1}));
}

TEST(Split, WeakRootRedexUsesSubstitution) {
  // (λx.x x)(λy.I y): root plus the redex inside the argument.
  Term t = T("(\\x.x x) (\\y.I y)");
  ParDerivation d = derive(t, {P("root"), P("R.B")}, Flavor::CbV);
  ASSERT_EQ(d.count(), 3u);
  SplitResult r = split(d, SystemId::WeakCbV);
  ASSERT_EQ(r.essential.size(), 1u);
  EXPECT_EQ(r.essential.steps[0].step.position, P("root"));
  // n₁ + |x x|_x · n₂ = 0 + 2·1
  EXPECT_EQ(r.residual.count(), 2u);
  EXPECT_EQ(r.residual.source(), T("(\\y.I y) (\\y.I y)"));
  EXPECT_EQ(r.residual.target(), d.target());
}

TEST(Split, LeastLevelAcceptsCbN) {
  Term t = T("x (I I) (I I)");
  ParDerivation d = derive(t, {P("L.R"), P("R")}, Flavor::CbN);
  SplitResult r = split(d, SystemId::LeastLevel);
  EXPECT_EQ(r.essential.size(), 2u);
  EXPECT_EQ(r.residual.flavor(), Flavor::Leveled);
  EXPECT_THROW(split(d, SystemId::WeakCbV), FlavorMismatch);
}

TEST(Split, IndexDropsByOnePerStep) {
  for (SystemId sys : kAllSystems) {
    for (const Term& t : terms_upto(6)) {
      for (const ParDerivation& d : all_parallel_steps(t, flavor_of(sys), 256)) {
        SplitResult r = split(d, sys);
        ASSERT_EQ(r.counts.size(), r.essential.size() + 1);
        ASSERT_EQ(r.counts.front(), d.count());
        for (std::size_t k = 1; k < r.counts.size(); ++k) ASSERT_EQ(r.counts[k] + 1, r.counts[k - 1]);
        ASSERT_EQ(r.counts.back(), r.residual.count());
        Term cur = t;
        for (const StepResult& s : r.essential.steps) {
          ASSERT_EQ(classify(cur, s.step.position, sys), StepKind::Essential);
          cur = s.term;
        }
        ASSERT_EQ(r.residual.source(), cur);
        ASSERT_EQ(r.residual.target(), d.target());
        ASSERT_TRUE(is_parallel_inessential(r.residual, sys));
      }
    }
  }
}

TEST(Merge, IdentityThenStep) {
  Term t = T("I (I I)");
  for (SystemId sys : kAllSystems) {
    if (essential_steps(t, sys).empty()) continue;
    StepResult e = essential_steps(t, sys)[0];
    ParDerivation m = merge(identity(t, flavor_of(sys)), e, sys);
    EXPECT_EQ(m.redex_count(), 1u);
    EXPECT_EQ(m.target(), e.term);
    if (sys == SystemId::LeastLevel) {
      EXPECT_EQ(m.level(), e.step.level);
    } else {
      EXPECT_EQ(m.count(), 1u);
    }
  }
}

TEST(Merge, HeadExample) {
  Term t = T("I (I I)");
  ParDerivation d = derive(t, {P("R")}, Flavor::CbN);
  ASSERT_TRUE(is_parallel_inessential(d, SystemId::Head));
  StepResult e = essential_at(d.target(), "root", SystemId::Head);
  ParDerivation m = merge(d, e, SystemId::Head);
  EXPECT_EQ(m.source(), t);
  EXPECT_EQ(m.target(), T("I"));
}

TEST(Merge, LOWithNonNeutralFunction) {
  Term t = T("(I I) (I y)");
  ParDerivation d = derive(t, {P("R")}, Flavor::CbN);
  ASSERT_TRUE(is_parallel_inessential(d, SystemId::LO));
  StepResult e = essential_at(d.target(), "L", SystemId::LO);
  ParDerivation m = merge(d, e, SystemId::LO);
  EXPECT_EQ(m.source(), t);
  EXPECT_EQ(m.target(), T("I y"));
  EXPECT_EQ(selection(m), (RedexSelection{P("L"), P("R")}));
}

TEST(Merge, Errors) {
  Term t = T("I (I I)");
  ParDerivation ess = derive(t, {P("root")}, Flavor::CbN);
  StepResult e = essential_steps(ess.target(), SystemId::Head)[0];
  EXPECT_THROW(merge(ess, e, SystemId::Head), NotInessential);
  StepResult elsewhere = essential_steps(T("I x"), SystemId::Head)[0];
  EXPECT_THROW(merge(identity(t, Flavor::CbN), elsewhere, SystemId::Head), NotComposable);
  StepResult not_ess = inessential_steps(t, SystemId::Head)[0];
  EXPECT_THROW(merge(identity(t, Flavor::CbN), not_ess, SystemId::Head), NotComposable);
}

TEST(Merge, EndpointsOnSmallTerms) {
  for (SystemId sys : kAllSystems) {
    for (const Term& t : terms_upto(6)) {
      for (const ParDerivation& d : all_parallel_steps(t, flavor_of(sys), 256)) {
        if (!is_parallel_inessential(d, sys)) continue;
        for (const StepResult& e : essential_steps(d.target(), sys)) {
          ParDerivation m = merge(d, e, sys);
          ASSERT_EQ(m.source(), t);
          ASSERT_EQ(m.target(), e.term) << print(t);
          ASSERT_EQ(derive(t, selection(m), m.flavor()).target(), e.term);
        }
      }
    }
  }
}

TEST(Factorize, HeadExample) {
  Term t = T("I (x (I I))");
  Trace in = make_trace(t, {P("R.R"), P("root")}, SystemId::Head);
  ASSERT_EQ(in.steps[0].step.kind, StepKind::Inessential);
  ASSERT_EQ(in.steps[1].step.kind, StepKind::Essential);
  EXPECT_EQ(in.end(), T("x I"));
  Factorization f = factorize(in, SystemId::Head);
  ASSERT_EQ(f.essential.size(), 1u);
  ASSERT_EQ(f.inessential.size(), 1u);
  EXPECT_EQ(f.essential.steps[0].term, T("x (I I)"));
  EXPECT_EQ(f.inessential.steps[0].term, T("x I"));
  EXPECT_TRUE(valid(f, in, SystemId::Head));
  EXPECT_FALSE(factorization_problem(f, in, SystemId::Head).has_value());
}

TEST(Factorize, AlreadyFactorizedAndEmpty) {
  Term t = T("I (x (I I))");
  Trace in = make_trace(t, {P("root"), P("R")}, SystemId::Head);
  Factorization f = factorize(in, SystemId::Head);
  ASSERT_EQ(f.essential.size(), 1u);
  ASSERT_EQ(f.inessential.size(), 1u);
  EXPECT_EQ(f.essential.steps[0].step, in.steps[0].step);
  EXPECT_EQ(f.inessential.steps[0].step, in.steps[1].step);

  Factorization e = factorize(Trace(t), SystemId::Head);
  EXPECT_EQ(e.essential.size(), 0u);
  EXPECT_EQ(e.inessential.size(), 0u);
  EXPECT_EQ(e.inessential.end(), t);
}

TEST(Factorize, AllEssentialInputUnchanged) {
  Term t = T("I (I (I x))");
  NormalizeResult r = normalize(t, SystemId::LO, 10);
  Factorization f = factorize(r.trace, SystemId::LO);
  EXPECT_EQ(f.essential.size(), r.trace.size());
  EXPECT_EQ(f.inessential.size(), 0u);
}

TEST(Factorize, InvalidInput) {
  EXPECT_THROW(make_trace(T("I x"), {P("R")}, SystemId::Head), InvalidTrace);
  try {
    make_trace(T("I (I x)"), {P("R"), P("R")}, SystemId::Head);
    FAIL();
  } catch (const InvalidTrace& e) {
    EXPECT_EQ(e.step(), 1u);
  }
  Trace bad(T("I x"));
  bad.steps.push_back({{P("root"), StepKind::Inessential, Level(0)}, parse("x")});
  EXPECT_TRUE(trace_problem(bad, SystemId::Head).has_value());
  EXPECT_THROW(factorize(bad, SystemId::Head), InvalidTrace);
}

// Every base sequence of length ≤ 3 from terms of size ≤ 6.
TEST(Factorize, ExhaustiveSmallSequences) {
  for (SystemId sys : kAllSystems) {
    std::size_t count = 0;
    for (const Term& t : terms_upto(6)) {
      std::function<void(Trace&)> go = [&](Trace& tr) {
        if (tr.size() > 0) {
          Factorization f = factorize(tr, sys);
          ASSERT_TRUE(valid(f, tr, sys)) << print(tr.start) << " " << to_json(tr).dump();
          ++count;
        }
        if (tr.size() == 3) return;
        for (const StepResult& s : base_steps(tr.end(), base_of(sys))) {
          Trace next = tr;
          Step st = s.step;
          st.kind = *classify(tr.end(), st.position, sys);
          next.steps.push_back({st, s.term});
          go(next);
        }
      };
      Trace start(t);
      go(start);
    }
    EXPECT_GT(count, 100u) << to_string(sys);
  }
}

TEST(Normalize, Examples) {
  NormalizeResult h = normalize(T("I (x (I I))"), SystemId::Head, 100);
  ASSERT_EQ(h.trace.size(), 1u);
  EXPECT_EQ(h.trace.end(), T("x (I I)"));
  EXPECT_EQ(h.outcome, Outcome::EssentialNormal);

  EXPECT_EQ(normalize(T("Omega"), SystemId::LO, 50).outcome, Outcome::FuelExhausted);
  EXPECT_EQ(normalize(T("Omega"), SystemId::LO, 50).trace.size(), 50u);

  NormalizeResult lo = normalize(T("x (I y) (I I)"), SystemId::LO, 100);
  EXPECT_EQ(lo.outcome, Outcome::NormalFormReached);
  EXPECT_EQ(lo.trace.end(), T("x y I"));

  NormalizeResult w = normalize(parse("(\\x.\\y.x) (\\z.z) (\\w.w)"), SystemId::WeakCbV, 100);
  EXPECT_TRUE(is_value(w.trace.end()));
  EXPECT_EQ(w.trace.end(), parse("\\z.z"));
}

TEST(Normalize, HeadIsNotFull) {
  Term t = T("I (x (I I))");
  NormalizeResult h = normalize(t, SystemId::Head, 100);
  EXPECT_FALSE(is_normal(h.trace.end()));
  ReductionGraph g = explore(t, Base::Beta);
  EXPECT_TRUE(path_exists(g, t, T("x I"), 2).has_value());
  EXPECT_NE(h.trace.end(), T("x I"));
}

TEST(Json, FactorizationShape) {
  Term t = T("I (x (I I))");
  Factorization f = factorize(make_trace(t, {P("R.R"), P("root")}, SystemId::Head), SystemId::Head);
  nlohmann::json j = to_json(f);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(j["essential"]["steps"].size(), 1u);
  EXPECT_EQ(j["essential"]["steps"][0]["kind"], "essential");
  EXPECT_EQ(j["inessential"]["steps"][0]["position"], "R");
  EXPECT_EQ(parse(j["inessential"]["end"].get<std::string>()), T("x I"));
}

}  // namespace
}  // namespace essential
