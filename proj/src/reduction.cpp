#include "essential/reduction.hpp"

#include <algorithm>

namespace essential {

std::string_view to_string(SystemId id) {
  switch (id) {
    case SystemId::Head: return "head";
    case SystemId::WeakCbV: return "weak-cbv";
    case SystemId::LO: return "lo";
    case SystemId::LeastLevel: return "ll";
  }
  return "?";
}

std::string_view to_string(Base base) { return base == Base::Beta ? "beta" : "betav"; }

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Essential: return "essential";
    case StepKind::Inessential: return "inessential";
    case StepKind::Plain: return "plain";
  }
  return "?";
}

std::optional<SystemId> parse_system(std::string_view text) {
  if (text == "head") return SystemId::Head;
  if (text == "weak-cbv" || text == "weak" || text == "cbv") return SystemId::WeakCbV;
  if (text == "lo") return SystemId::LO;
  if (text == "ll" || text == "least-level") return SystemId::LeastLevel;
  return std::nullopt;
}

Base base_of(SystemId id) { return id == SystemId::WeakCbV ? Base::BetaV : Base::Beta; }

// ---------------------------------------------------------------------------
// Base reductions, position based

namespace {

bool contractible(const Term& t, Base base) {
  return t.is_redex() && (base == Base::Beta || is_value(t.arg()));
}

void redexes_rec(const Term& t, Base base, std::vector<Dir>& path, std::vector<Position>& out) {
  switch (t.kind()) {
    case Term::Kind::Free:
    case Term::Kind::Bound:
      return;
    case Term::Kind::Lam:
      path.push_back(Dir::Body);
      redexes_rec(t.body(), base, path, out);
      path.pop_back();
      return;
    case Term::Kind::App:
      if (contractible(t, base)) out.emplace_back(path);
      path.push_back(Dir::Left);
      redexes_rec(t.fun(), base, path, out);
      path.back() = Dir::Right;
      redexes_rec(t.arg(), base, path, out);
      path.pop_back();
      return;
  }
}

}  // namespace

std::vector<Position> redexes(const Term& t, Base base) {
  std::vector<Position> out;
  std::vector<Dir> path;
  redexes_rec(t, base, path, out);
  return out;
}

std::vector<Position> beta_redexes(const Term& t) { return redexes(t, Base::Beta); }
std::vector<Position> betav_redexes(const Term& t) { return redexes(t, Base::BetaV); }

Term step_at(const Term& t, const Position& p, Base base) {
  auto sub = subterm_at(t, p);
  if (!sub) throw InvalidPosition("position " + p.str() + " does not address a subterm");
  if (!contractible(*sub, base)) {
    throw InvalidPosition("no " + std::string(to_string(base)) + "-redex at position " + p.str());
  }
  return replace_at(t, p, debruijn::instantiate(sub->fun().body(), sub->arg()));
}

Steps base_steps(const Term& t, Base base) {
  Steps out;
  for (Position& p : redexes(t, base)) {
    Term r = step_at(t, p, base);
    Level lvl(p.right_moves());
    out.push_back({Step{std::move(p), StepKind::Plain, lvl}, std::move(r)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule-based generators. Each works on the subterm it is given and returns
// positions relative to it; the caller rebuilds the context.

namespace {

struct Local {
  Position pos;
  Term term;
  Level level;
};
using Locals = std::vector<Local>;

enum class Side { Body, Fun, Arg };

void lift(const Term& parent, Locals&& in, Side side, Locals& out) {
  for (Local& l : in) {
    switch (side) {
      case Side::Body:
        out.push_back({l.pos.prefixed(Dir::Body), Term::lam(parent.name(), std::move(l.term)), l.level});
        break;
      case Side::Fun:
        out.push_back({l.pos.prefixed(Dir::Left), Term::app(std::move(l.term), parent.arg()), l.level});
        break;
      case Side::Arg:
        out.push_back({l.pos.prefixed(Dir::Right), Term::app(parent.fun(), std::move(l.term)), l.level + 1});
        break;
    }
  }
}

Local root_contraction(const Term& t) {
  return {Position(), debruijn::instantiate(t.fun().body(), t.arg()), Level(0)};
}

// Compatible closure of the base rule, written as inference rules.
Locals any_base(const Term& t, Base base) {
  Locals out;
  switch (t.kind()) {
    case Term::Kind::Free:
    case Term::Kind::Bound:
      break;
    case Term::Kind::Lam:
      lift(t, any_base(t.body(), base), Side::Body, out);
      break;
    case Term::Kind::App:
      if (contractible(t, base)) out.push_back(root_contraction(t));
      lift(t, any_base(t.fun(), base), Side::Fun, out);
      lift(t, any_base(t.arg(), base), Side::Arg, out);
      break;
  }
  return out;
}

Locals head_rules(const Term& t) {
  Locals out;
  if (t.is_lam()) {
    lift(t, head_rules(t.body()), Side::Body, out);
  } else if (t.is_app()) {
    if (t.fun().is_lam()) {
      out.push_back(root_contraction(t));
    } else {
      lift(t, head_rules(t.fun()), Side::Fun, out);
    }
  }
  return out;
}

Locals neg_head_rules(const Term& t) {
  Locals out;
  if (t.is_lam()) {
    lift(t, neg_head_rules(t.body()), Side::Body, out);
  } else if (t.is_app()) {
    if (t.fun().is_lam()) {
      // (λx.t)s with t →β t'
      Locals inner;
      lift(t.fun(), any_base(t.fun().body(), Base::Beta), Side::Body, inner);
      lift(t, std::move(inner), Side::Fun, out);
    }
    lift(t, any_base(t.arg(), Base::Beta), Side::Arg, out);
    lift(t, neg_head_rules(t.fun()), Side::Fun, out);
  }
  return out;
}

Locals weak_rules(const Term& t) {
  Locals out;
  if (!t.is_app()) return out;
  if (contractible(t, Base::BetaV)) out.push_back(root_contraction(t));
  lift(t, weak_rules(t.fun()), Side::Fun, out);
  lift(t, weak_rules(t.arg()), Side::Arg, out);
  return out;
}

Locals neg_weak_rules(const Term& t) {
  Locals out;
  if (t.is_lam()) {
    lift(t, any_base(t.body(), Base::BetaV), Side::Body, out);
  } else if (t.is_app()) {
    lift(t, neg_weak_rules(t.fun()), Side::Fun, out);
    lift(t, neg_weak_rules(t.arg()), Side::Arg, out);
  }
  return out;
}

Locals lo_rules(const Term& t) {
  Locals out;
  if (t.is_lam()) {
    lift(t, lo_rules(t.body()), Side::Body, out);
  } else if (t.is_app()) {
    if (t.fun().is_lam()) {
      out.push_back(root_contraction(t));
    } else {
      lift(t, lo_rules(t.fun()), Side::Fun, out);
    }
    if (t.fun().is_neutral()) lift(t, lo_rules(t.arg()), Side::Arg, out);
  }
  return out;
}

Locals neg_lo_rules(const Term& t) {
  Locals out;
  if (t.is_lam()) {
    lift(t, neg_lo_rules(t.body()), Side::Body, out);
  } else if (t.is_app()) {
    if (t.fun().is_lam()) {
      Locals inner;
      lift(t.fun(), any_base(t.fun().body(), Base::Beta), Side::Body, inner);
      lift(t, std::move(inner), Side::Fun, out);
    }
    if (!t.fun().is_neutral()) lift(t, any_base(t.arg(), Base::Beta), Side::Arg, out);
    lift(t, neg_lo_rules(t.fun()), Side::Fun, out);
    lift(t, neg_lo_rules(t.arg()), Side::Arg, out);
  }
  return out;
}

Steps finish(Locals&& in, StepKind kind) {
  std::sort(in.begin(), in.end(), [](const Local& a, const Local& b) { return a.pos < b.pos; });
  in.erase(std::unique(in.begin(), in.end(),
                       [](const Local& a, const Local& b) { return a.pos == b.pos; }),
           in.end());
  Steps out;
  out.reserve(in.size());
  for (Local& l : in) out.push_back({Step{std::move(l.pos), kind, l.level}, std::move(l.term)});
  return out;
}

}  // namespace

std::optional<Term> head_step(const Term& t) {
  Locals l = head_rules(t);
  if (l.empty()) return std::nullopt;
  return l.front().term;
}

Steps head_steps(const Term& t) { return finish(head_rules(t), StepKind::Essential); }
Steps neg_head_steps(const Term& t) { return finish(neg_head_rules(t), StepKind::Inessential); }

Steps weak_cbv_steps(const Term& t) { return finish(weak_rules(t), StepKind::Essential); }
Steps neg_weak_steps(const Term& t) { return finish(neg_weak_rules(t), StepKind::Inessential); }

std::optional<Term> lo_step(const Term& t) {
  Locals l = lo_rules(t);
  if (l.empty()) return std::nullopt;
  return l.front().term;
}

Steps lo_steps(const Term& t) { return finish(lo_rules(t), StepKind::Essential); }
Steps neg_lo_steps(const Term& t) { return finish(neg_lo_rules(t), StepKind::Inessential); }

Level least_level(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Free:
    case Term::Kind::Bound:
      return Level::infinity();
    case Term::Kind::Lam:
      return least_level(t.body());
    case Term::Kind::App:
      if (t.fun().is_lam()) return Level(0);
      return min(least_level(t.fun()), least_level(t.arg()) + 1);
  }
  return Level::infinity();
}

Steps level_indexed_steps(const Term& t) {
  return finish(any_base(t, Base::Beta), StepKind::Plain);
}

Steps ll_steps(const Term& t) {
  Level ll = least_level(t);
  Steps out;
  for (StepResult& s : level_indexed_steps(t)) {
    if (s.step.level == ll) {
      s.step.kind = StepKind::Essential;
      out.push_back(std::move(s));
    }
  }
  return out;
}

Steps neg_ll_steps(const Term& t) {
  Level ll = least_level(t);
  Steps out;
  for (StepResult& s : level_indexed_steps(t)) {
    if (s.step.level > ll) {
      s.step.kind = StepKind::Inessential;
      out.push_back(std::move(s));
    }
  }
  return out;
}

Steps essential_steps(const Term& t, SystemId sys) {
  switch (sys) {
    case SystemId::Head: return head_steps(t);
    case SystemId::WeakCbV: return weak_cbv_steps(t);
    case SystemId::LO: return lo_steps(t);
    case SystemId::LeastLevel: return ll_steps(t);
  }
  return {};
}

Steps inessential_steps(const Term& t, SystemId sys) {
  switch (sys) {
    case SystemId::Head: return neg_head_steps(t);
    case SystemId::WeakCbV: return neg_weak_steps(t);
    case SystemId::LO: return neg_lo_steps(t);
    case SystemId::LeastLevel: return neg_ll_steps(t);
  }
  return {};
}

std::optional<StepKind> classify(const Term& t, const Position& p, SystemId sys) {
  auto sub = subterm_at(t, p);
  if (!sub || !contractible(*sub, base_of(sys))) return std::nullopt;
  for (const StepResult& s : essential_steps(t, sys)) {
    if (s.step.position == p) return StepKind::Essential;
  }
  for (const StepResult& s : inessential_steps(t, sys)) {
    if (s.step.position == p) return StepKind::Inessential;
  }
  return std::nullopt;
}

}  // namespace essential
