#include <gtest/gtest.h>

#include <map>
#include <set>
#include <variant>

#include "essential/oracle.hpp"
#include "essential/term.hpp"
#include "support.hpp"

namespace essential {
namespace {

using testing::T;

Term lam(const std::string& x, Term b) {
  // Named construction for tests: abstracts the free x of b.
  Term body = b;
  std::function<Term(const Term&, std::uint32_t)> close = [&](const Term& t, std::uint32_t depth) -> Term {
    switch (t.kind()) {
      case Term::Kind::Free: return t.name() == x ? Term::bound(depth) : t;
      case Term::Kind::Bound: return t;
      case Term::Kind::Lam: return Term::lam(t.name(), close(t.body(), depth + 1));
      case Term::Kind::App: return Term::app(close(t.fun(), depth), close(t.arg(), depth));
    }
    return t;
  };
  return Term::lam(x, close(body, 0));
}
Term var(const std::string& x) { return Term::free(x); }
Term app(Term a, Term b) { return Term::app(std::move(a), std::move(b)); }

// Named reference terms with textbook capture-avoiding substitution.
struct Named {
  enum K { V, L, A } k;
  std::string name;
  std::vector<Named> kids;
};

Named to_named(const Term& t, std::vector<std::string>& ctx) {
  switch (t.kind()) {
    case Term::Kind::Free: return {Named::V, t.name(), {}};
    case Term::Kind::Bound: return {Named::V, ctx[ctx.size() - 1 - t.index()], {}};
    case Term::Kind::Lam: {
      std::string v = "v" + std::to_string(ctx.size());
      ctx.push_back(v);
      Named b = to_named(t.body(), ctx);
      ctx.pop_back();
      return {Named::L, v, {b}};
    }
    case Term::Kind::App: {
      Named f = to_named(t.fun(), ctx);
      Named a = to_named(t.arg(), ctx);
      return {Named::A, "", {f, a}};
    }
  }
  return {};
}

void fv(const Named& n, std::set<std::string>& bound, std::set<std::string>& out) {
  if (n.k == Named::V) {
    if (!bound.count(n.name)) out.insert(n.name);
  } else if (n.k == Named::L) {
    bool fresh = bound.insert(n.name).second;
    fv(n.kids[0], bound, out);
    if (fresh) bound.erase(n.name);
  } else {
    fv(n.kids[0], bound, out);
    fv(n.kids[1], bound, out);
  }
}
std::set<std::string> fv(const Named& n) {
  std::set<std::string> b, out;
  fv(n, b, out);
  return out;
}

Named rename(const Named& n, const std::string& from, const std::string& to) {
  if (n.k == Named::V) return n.name == from ? Named{Named::V, to, {}} : n;
  if (n.k == Named::L) {
    if (n.name == from) return n;
    return {Named::L, n.name, {rename(n.kids[0], from, to)}};
  }
  return {Named::A, "", {rename(n.kids[0], from, to), rename(n.kids[1], from, to)}};
}

int fresh_counter = 0;

Named subst(const Named& n, const std::string& x, const Named& s) {
  if (n.k == Named::V) return n.name == x ? s : n;
  if (n.k == Named::A) return {Named::A, "", {subst(n.kids[0], x, s), subst(n.kids[1], x, s)}};
  if (n.name == x) return n;
  std::set<std::string> fs = fv(s);
  if (fs.count(n.name) && fv(n.kids[0]).count(x)) {
    std::string f = "z" + std::to_string(++fresh_counter);
    return {Named::L, f, {subst(rename(n.kids[0], n.name, f), x, s)}};
  }
  return {Named::L, n.name, {subst(n.kids[0], x, s)}};
}

std::string show(const Named& n) {
  if (n.k == Named::V) return n.name;
  if (n.k == Named::L) return "(\\" + n.name + "." + show(n.kids[0]) + ")";
  return "(" + show(n.kids[0]) + " " + show(n.kids[1]) + ")";
}

std::size_t manual_count(const Named& n, const std::string& x) {
  if (n.k == Named::V) return n.name == x ? 1 : 0;
  if (n.k == Named::L) return n.name == x ? 0 : manual_count(n.kids[0], x);
  return manual_count(n.kids[0], x) + manual_count(n.kids[1], x);
}

Named named(const Term& t) {
  std::vector<std::string> ctx;
  return to_named(t, ctx);
}

std::vector<Term> terms_upto(std::size_t n) {
  EnumSpec spec;
  spec.max_size = n;
  return enumerate_terms(spec);
}

TEST(Parse, Examples) {
  EXPECT_EQ(parse("\\x.x"), lam("x", var("x")));
  Term delta = lam("x", app(var("x"), var("x")));
  EXPECT_EQ(parse("(\\x.x x)(\\x.x x)"), app(delta, delta));
  EXPECT_EQ(parse("x y z"), app(app(var("x"), var("y")), var("z")));
  EXPECT_EQ(parse("λx.x"), parse("\\x.x"));
  EXPECT_EQ(parse("x \\y.y"), parse("x (\\y.y)"));
  EXPECT_EQ(parse("\\x.\\y.x y"), lam("x", lam("y", app(var("x"), var("y")))));
}

TEST(Parse, ErrorsCarryOffset) {
  for (std::string bad : {"", "(x", "x)", "\\.x", "\\x x", "x .", "\\x."}) {
    EXPECT_THROW(parse(bad), ParseError) << bad;
  }
  try {
    parse("x (y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Print, Examples) {
  EXPECT_EQ(print(lam("x", var("x"))), "\\x.x");
  EXPECT_EQ(print(app(app(var("x"), var("y")), var("z"))), "x y z");
  EXPECT_EQ(print(app(var("x"), app(var("y"), var("z")))), "x (y z)");
  EXPECT_EQ(print(app(lam("x", var("x")), var("y"))), "(\\x.x) y");
  EXPECT_EQ(print(app(var("y"), lam("x", var("x")))), "y (\\x.x)");
}

TEST(Print, RoundTripsEveryTermUpToSize9) {
  std::size_t n = 0;
  for (const Term& t : terms_upto(9)) {
    ASSERT_TRUE(alpha_eq(parse(print(t)), t)) << print(t);
    ++n;
  }
  EXPECT_EQ(n, 28544u);
}

TEST(Substitute, Examples) {
  Term id_y = lam("y", var("y"));
  EXPECT_EQ(substitute(var("x"), "x", id_y), id_y);

  Term r = substitute(lam("y", var("x")), "x", var("y"));
  EXPECT_FALSE(alpha_eq(r, lam("y", var("y"))));
  EXPECT_EQ(r, Term::lam("y", var("y")));  // the body is the free y
  EXPECT_EQ(print(r), "\\y'.y");

  Term ii = T("I I");
  EXPECT_EQ(substitute(app(var("x"), var("x")), "x", ii), app(ii, ii));
}

TEST(Substitute, MatchesNamedReferenceImplementation) {
  std::vector<Term> ts = terms_upto(6);
  std::vector<Term> ss = terms_upto(4);
  for (const Term& t : ts) {
    Named nt = named(t);
    for (const Term& s : ss) {
      Named expected = subst(nt, "x", named(s));
      ASSERT_EQ(substitute(t, "x", s), parse(show(expected))) << print(t) << " [x<-" << print(s) << "]";
    }
  }
}

TEST(Substitute, OccurrenceArithmetic) {
  std::vector<Term> ts = terms_upto(7);
  std::vector<Term> ss = terms_upto(4);
  for (std::size_t i = 0; i < ts.size(); i += 3) {
    const Term& t = ts[i];
    for (const Term& s : ss) {
      Term r = substitute(t, "x", s);
      if (count_occurrences(t, "x") == 0) {
        ASSERT_EQ(r, t);
      }
      ASSERT_EQ(count_occurrences(r, "y"),
                count_occurrences(t, "y") + count_occurrences(t, "x") * count_occurrences(s, "y"));
      ASSERT_EQ(count_occurrences(r, "x"), count_occurrences(t, "x") * count_occurrences(s, "x"));
    }
  }
}

TEST(CountOccurrences, Examples) {
  EXPECT_EQ(count_occurrences(parse("x x"), "x"), 2u);
  EXPECT_EQ(count_occurrences(parse("\\x.x"), "x"), 0u);
  Term t = parse("x (\\y. x y) x");
  EXPECT_EQ(count_occurrences(t, "x"), 3u);
  EXPECT_EQ(manual_count(named(t), "x"), 3u);
}

TEST(CountOccurrences, AgreesWithManualTraversal) {
  for (const Term& t : terms_upto(8)) {
    Named n = named(t);
    ASSERT_EQ(count_occurrences(t, "x"), manual_count(n, "x"));
    ASSERT_EQ(count_occurrences(t, "y"), manual_count(n, "y"));
    ASSERT_EQ(occurrences(t, "x").size(), manual_count(n, "x"));
  }
}

TEST(AlphaEq, Examples) {
  EXPECT_TRUE(alpha_eq(parse("\\x.x"), parse("\\y.y")));
  EXPECT_FALSE(alpha_eq(parse("\\x.\\y.x"), parse("\\a.\\b.b")));
  EXPECT_FALSE(alpha_eq(parse("x"), parse("y")));
  EXPECT_TRUE(alpha_eq(parse("\\x.\\y.x"), parse("\\a.\\b.a")));
  EXPECT_EQ(parse("\\x.x").hash(), parse("\\q.q").hash());
}

TEST(Classes, ValueNormalNeutral) {
  EXPECT_TRUE(is_value(parse("\\x.x")));
  EXPECT_TRUE(is_value(parse("x")));
  EXPECT_FALSE(is_value(T("I I")));

  Term t = parse("x (\\y.y)");
  EXPECT_TRUE(is_normal(t));
  EXPECT_TRUE(is_neutral(t));
  EXPECT_TRUE(is_normal(parse("\\x.x")));
  EXPECT_FALSE(is_neutral(parse("\\x.x")));
  EXPECT_FALSE(is_normal(parse("(\\x.x) y")));
  EXPECT_FALSE(is_neutral(parse("(\\x.x) y")));
}

bool has_redex(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Lam: return has_redex(t.body());
    case Term::Kind::App: return t.fun().is_lam() || has_redex(t.fun()) || has_redex(t.arg());
    default: return false;
  }
}

TEST(Classes, NormalIffNoRedexAnywhere) {
  for (const Term& t : terms_upto(8)) {
    ASSERT_EQ(is_normal(t), !has_redex(t)) << print(t);
    ASSERT_EQ(is_neutral(t), is_normal(t) && !t.is_lam());
  }
}

TEST(Size, Examples) {
  EXPECT_EQ(size(parse("x")), 1u);
  EXPECT_EQ(size(parse("\\x.x")), 2u);
  // λx.xx has 4 nodes, so Ω has 4 + 4 + 1.
  EXPECT_EQ(size(T("Omega")), 9u);
}

TEST(Positions, ParseAndPrint) {
  EXPECT_TRUE(Position::parse("root").is_root());
  Position p = Position::parse("L.R.B");
  EXPECT_EQ(p.str(), "L.R.B");
  EXPECT_EQ(p.right_moves(), 1u);
  EXPECT_THROW(Position::parse("L.X"), InvalidPosition);
  EXPECT_TRUE(Position::parse("L").is_prefix_of(p));
  EXPECT_LT(Position::parse("L"), Position::parse("L.R"));
  EXPECT_LT(Position::parse("L.R"), Position::parse("R"));
}

TEST(Positions, SubtermAndReplace) {
  Term t = parse("x (\\y.y z)");
  EXPECT_EQ(*subterm_at(t, Position::parse("R.B.R")), parse("z"));
  EXPECT_FALSE(subterm_at(t, Position::parse("L.L")).has_value());
  EXPECT_EQ(replace_at(t, Position::parse("L"), parse("w")), parse("w (\\y.y z)"));
  EXPECT_THROW(replace_at(t, Position::parse("R.L"), parse("w")), InvalidPosition);
}

TEST(DeBruijn, InstantiateAndCount) {
  Term body = parse("\\x.x x").body();  // 0 0
  EXPECT_EQ(debruijn::count_bound(body), 2u);
  EXPECT_EQ(debruijn::instantiate(body, parse("y")), parse("y y"));
  Term k = parse("\\x.\\y.x");
  EXPECT_EQ(debruijn::instantiate(k.body(), parse("z")), parse("\\y.z"));
  EXPECT_EQ(debruijn::shift(Term::bound(0), 2), Term::bound(2));
  EXPECT_EQ(debruijn::shift(Term::bound(0), 2, 1), Term::bound(0));
}

TEST(Invariants, LooseBoundAndFreeNames) {
  for (const Term& t : terms_upto(7)) {
    ASSERT_EQ(t.loose_bound(), 0u);
    std::set<std::string> expected;
    for (std::string x : {"x", "y"}) {
      if (count_occurrences(t, x) > 0) expected.insert(x);
    }
    ASSERT_EQ(free_names(t), expected);
  }
}

}  // namespace
}  // namespace essential
