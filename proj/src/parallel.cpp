#include "essential/parallel.hpp"

#include <algorithm>
#include <set>

namespace essential {

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::CbN: return "cbn";
    case Flavor::CbV: return "cbv";
    case Flavor::Leveled: return "leveled";
  }
  return "?";
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Var: return "var";
    case Rule::Abs: return "abs";
    case Rule::App: return "app";
    case Rule::Beta: return "beta";
  }
  return "?";
}

std::optional<Flavor> parse_flavor(std::string_view text) {
  if (text == "cbn") return Flavor::CbN;
  if (text == "cbv") return Flavor::CbV;
  if (text == "leveled" || text == "level") return Flavor::Leveled;
  return std::nullopt;
}

Flavor flavor_of(SystemId sys) {
  switch (sys) {
    case SystemId::Head:
    case SystemId::LO:
      return Flavor::CbN;
    case SystemId::WeakCbV:
      return Flavor::CbV;
    case SystemId::LeastLevel:
      return Flavor::Leveled;
  }
  return Flavor::CbN;
}

// ---------------------------------------------------------------------------
// Node construction

ParDerivation ParDerivation::var(Flavor f, const Term& t) {
  if (!t.is_var()) throw std::invalid_argument("variable rule applied to " + print(t));
  return ParDerivation(std::make_shared<Node>(Node{f, Rule::Var, t, t, 0, Level(), 0, "", {}}));
}

ParDerivation ParDerivation::abs(const std::string& hint, ParDerivation body) {
  auto n = std::make_shared<Node>(Node{body.flavor(), Rule::Abs, Term::lam(hint, body.source()),
                                       Term::lam(hint, body.target()), body.count(), body.level(),
                                       body.redex_count(), hint, {}});
  n->children.push_back(std::move(body));
  return ParDerivation(std::move(n));
}

ParDerivation ParDerivation::app(ParDerivation fun, ParDerivation arg) {
  if (fun.flavor() != arg.flavor()) throw FlavorMismatch("application of mixed flavors");
  auto n = std::make_shared<Node>(Node{fun.flavor(), Rule::App, Term::app(fun.source(), arg.source()),
                                       Term::app(fun.target(), arg.target()),
                                       fun.count() + arg.count(), min(fun.level(), arg.level() + 1),
                                       fun.redex_count() + arg.redex_count(), "", {}});
  n->children.push_back(std::move(fun));
  n->children.push_back(std::move(arg));
  return ParDerivation(std::move(n));
}

ParDerivation ParDerivation::beta(const std::string& hint, ParDerivation body, ParDerivation arg) {
  if (body.flavor() != arg.flavor()) throw FlavorMismatch("contraction of mixed flavors");
  if (body.flavor() == Flavor::CbV && !is_value(arg.source())) {
    throw CbvNonValue("cbv contraction with non-value argument " + print(arg.source()));
  }
  std::uint64_t occ = debruijn::count_bound(body.target());
  auto n = std::make_shared<Node>(
      Node{body.flavor(), Rule::Beta, Term::app(Term::lam(hint, body.source()), arg.source()),
           debruijn::instantiate(body.target(), arg.target()),
           body.count() + occ * arg.count() + 1, Level(0),
           body.redex_count() + arg.redex_count() + 1, hint, {}});
  n->children.push_back(std::move(body));
  n->children.push_back(std::move(arg));
  return ParDerivation(std::move(n));
}

std::uint64_t ParDerivation::index() const {
  if (flavor() == Flavor::Leveled) return level().value();
  return count();
}

// ---------------------------------------------------------------------------
// Selections

namespace {

ParDerivation derive_rec(const Term& t, Flavor f, const std::set<Position>& sel,
                         std::vector<Dir>& path) {
  switch (t.kind()) {
    case Term::Kind::Free:
    case Term::Kind::Bound:
      return ParDerivation::var(f, t);
    case Term::Kind::Lam: {
      path.push_back(Dir::Body);
      ParDerivation b = derive_rec(t.body(), f, sel, path);
      path.pop_back();
      return ParDerivation::abs(t.name(), std::move(b));
    }
    case Term::Kind::App:
      break;
  }
  bool contract = sel.count(Position(path)) > 0;
  if (contract) {
    path.push_back(Dir::Left);
    path.push_back(Dir::Body);
    ParDerivation b = derive_rec(t.fun().body(), f, sel, path);
    path.pop_back();
    path.back() = Dir::Right;
    ParDerivation a = derive_rec(t.arg(), f, sel, path);
    path.pop_back();
    return ParDerivation::beta(t.fun().name(), std::move(b), std::move(a));
  }
  path.push_back(Dir::Left);
  ParDerivation l = derive_rec(t.fun(), f, sel, path);
  path.back() = Dir::Right;
  ParDerivation r = derive_rec(t.arg(), f, sel, path);
  path.pop_back();
  return ParDerivation::app(std::move(l), std::move(r));
}

void selection_rec(const ParDerivation& d, std::vector<Dir>& path, RedexSelection& out) {
  switch (d.rule()) {
    case Rule::Var:
      return;
    case Rule::Abs:
      path.push_back(Dir::Body);
      selection_rec(d.child(0), path, out);
      path.pop_back();
      return;
    case Rule::App:
      path.push_back(Dir::Left);
      selection_rec(d.child(0), path, out);
      path.back() = Dir::Right;
      selection_rec(d.child(1), path, out);
      path.pop_back();
      return;
    case Rule::Beta:
      out.emplace_back(path);
      path.push_back(Dir::Left);
      path.push_back(Dir::Body);
      selection_rec(d.child(0), path, out);
      path.pop_back();
      path.back() = Dir::Right;
      selection_rec(d.child(1), path, out);
      path.pop_back();
      return;
  }
}

}  // namespace

ParDerivation derive(const Term& t, const RedexSelection& sel, Flavor flavor) {
  std::set<Position> chosen;
  for (const Position& p : sel) {
    auto sub = subterm_at(t, p);
    if (!sub || !sub->is_redex()) {
      throw InvalidSelection("position " + p.str() + " is not a redex of " + print(t));
    }
    if (flavor == Flavor::CbV && !is_value(sub->arg())) {
      throw CbvNonValue("redex at " + p.str() + " has a non-value argument");
    }
    chosen.insert(p);
  }
  std::vector<Dir> path;
  return derive_rec(t, flavor, chosen, path);
}

ParDerivation identity(const Term& t, Flavor flavor) { return derive(t, {}, flavor); }

RedexSelection selection(const ParDerivation& d) {
  RedexSelection out;
  std::vector<Dir> path;
  selection_rec(d, path, out);
  return out;
}

ParDerivation reflavor(const ParDerivation& d, Flavor flavor) {
  if (d.flavor() == flavor) return d;
  return derive(d.source(), selection(d), flavor);
}

std::vector<ParDerivation> all_parallel_steps(const Term& t, Flavor flavor, std::size_t cap) {
  std::vector<Position> rs = redexes(t, flavor == Flavor::CbV ? Base::BetaV : Base::Beta);
  std::size_t total = rs.size() >= 63 ? cap : std::min(cap, std::size_t{1} << rs.size());
  std::vector<ParDerivation> out;
  out.reserve(total);
  for (std::size_t mask = 0; mask < total; ++mask) {
    RedexSelection sel;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (mask >> i & 1) sel.push_back(rs[i]);
    }
    out.push_back(derive(t, sel, flavor));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution on derivations

namespace {

ParDerivation shift_rec(const ParDerivation& d, std::uint32_t by, std::uint32_t cutoff) {
  if (d.source().loose_bound() <= cutoff) return d;
  switch (d.rule()) {
    case Rule::Var:
      return ParDerivation::var(d.flavor(), debruijn::shift(d.source(), by, cutoff));
    case Rule::Abs:
      return ParDerivation::abs(d.hint(), shift_rec(d.child(0), by, cutoff + 1));
    case Rule::App:
      return ParDerivation::app(shift_rec(d.child(0), by, cutoff), shift_rec(d.child(1), by, cutoff));
    case Rule::Beta:
      return ParDerivation::beta(d.hint(), shift_rec(d.child(0), by, cutoff + 1),
                                 shift_rec(d.child(1), by, cutoff));
  }
  return d;
}

// Either a free name or the bound index equal to the current depth.
struct Target {
  const std::string* name;
  const ParDerivation* with;
};

ParDerivation subst_rec(const ParDerivation& d, const Target& tg, std::uint32_t depth) {
  if (!tg.name && d.source().loose_bound() <= depth) return d;
  switch (d.rule()) {
    case Rule::Var: {
      const Term& v = d.source();
      if (tg.name) {
        if (v.kind() == Term::Kind::Free && v.name() == *tg.name) return shift_rec(*tg.with, depth, 0);
        return d;
      }
      if (v.index() == depth) return shift_rec(*tg.with, depth, 0);
      if (v.index() > depth) return ParDerivation::var(d.flavor(), Term::bound(v.index() - 1));
      return d;
    }
    case Rule::Abs:
      return ParDerivation::abs(d.hint(), subst_rec(d.child(0), tg, depth + 1));
    case Rule::App:
      return ParDerivation::app(subst_rec(d.child(0), tg, depth), subst_rec(d.child(1), tg, depth));
    case Rule::Beta:
      return ParDerivation::beta(d.hint(), subst_rec(d.child(0), tg, depth + 1),
                                 subst_rec(d.child(1), tg, depth));
  }
  return d;
}

}  // namespace

ParDerivation subst_parallel(const ParDerivation& d1, const std::string& x, const ParDerivation& d2) {
  if (d1.flavor() != d2.flavor()) throw FlavorMismatch("substitution of mixed flavors");
  if (d1.flavor() == Flavor::CbV && !is_value(d2.source())) {
    throw CbvNonValue("cbv substitution of non-value " + print(d2.source()));
  }
  return subst_rec(d1, Target{&x, &d2}, 0);
}

ParDerivation instantiate_derivation(const ParDerivation& body, const ParDerivation& arg) {
  if (body.flavor() != arg.flavor()) throw FlavorMismatch("instantiation of mixed flavors");
  return subst_rec(body, Target{nullptr, &arg}, 0);
}

namespace {

ParDerivation plug_rec(const Term& c, const std::vector<Dir>& path, std::size_t i,
                       const ParDerivation& d) {
  if (i == path.size()) {
    if (!(c == d.source())) throw InvalidPosition("derivation source does not match the context");
    return d;
  }
  switch (path[i]) {
    case Dir::Body:
      if (!c.is_lam()) break;
      return ParDerivation::abs(c.name(), plug_rec(c.body(), path, i + 1, d));
    case Dir::Left:
      if (!c.is_app()) break;
      return ParDerivation::app(plug_rec(c.fun(), path, i + 1, d), identity(c.arg(), d.flavor()));
    case Dir::Right:
      if (!c.is_app()) break;
      return ParDerivation::app(identity(c.fun(), d.flavor()), plug_rec(c.arg(), path, i + 1, d));
  }
  throw InvalidPosition("position " + Position(path).str() + " does not address a subterm");
}

bool head_inessential(const ParDerivation& d) {
  switch (d.rule()) {
    case Rule::Var: return true;
    case Rule::Abs: return head_inessential(d.child(0));
    case Rule::App:
      if (d.child(0).source().is_lam()) return true;
      return head_inessential(d.child(0));
    case Rule::Beta: return false;
  }
  return false;
}

bool weak_inessential(const ParDerivation& d) {
  switch (d.rule()) {
    case Rule::Var:
    case Rule::Abs:
      return true;
    case Rule::App:
      return weak_inessential(d.child(0)) && weak_inessential(d.child(1));
    case Rule::Beta:
      return false;
  }
  return false;
}

bool lo_inessential(const ParDerivation& d) {
  switch (d.rule()) {
    case Rule::Var: return true;
    case Rule::Abs: return lo_inessential(d.child(0));
    case Rule::App: {
      const Term& f = d.child(0).source();
      if (f.is_lam()) return true;
      if (!f.is_neutral()) return lo_inessential(d.child(0));
      return lo_inessential(d.child(1));
    }
    case Rule::Beta: return false;
  }
  return false;
}

}  // namespace

ParDerivation plug(const Term& c, const Position& p, const ParDerivation& d) {
  return plug_rec(c, p.path, 0, d);
}

bool is_parallel_inessential(const ParDerivation& d, SystemId sys) {
  if (d.flavor() != flavor_of(sys)) {
    throw FlavorMismatch(std::string(to_string(d.flavor())) + " derivation checked against " +
                         std::string(to_string(sys)));
  }
  switch (sys) {
    case SystemId::Head: return head_inessential(d);
    case SystemId::WeakCbV: return weak_inessential(d);
    case SystemId::LO: return lo_inessential(d);
    case SystemId::LeastLevel:
      return d.level().is_infinite() || d.level() > least_level(d.source());
  }
  return false;
}

Level parallel_level(const ParDerivation& d) {
  if (d.flavor() != Flavor::Leveled) throw FlavorMismatch("level of a non-leveled derivation");
  return d.level();
}

nlohmann::json to_json(const ParDerivation& d) {
  nlohmann::json j;
  j["rule"] = to_string(d.rule());
  j["flavor"] = to_string(d.flavor());
  j["source"] = print(d.source());
  j["target"] = print(d.target());
  if (d.flavor() == Flavor::Leveled) {
    if (d.level().is_infinite()) {
      j["index"] = "inf";
    } else {
      j["index"] = d.level().value();
    }
  } else {
    j["index"] = d.count();
  }
  if (d.rule() != Rule::Var) {
    nlohmann::json kids = nlohmann::json::array();
    std::size_t n = d.rule() == Rule::Abs ? 1 : 2;
    for (std::size_t i = 0; i < n; ++i) kids.push_back(to_json(d.child(i)));
    j["children"] = std::move(kids);
  }
  return j;
}

}  // namespace essential
