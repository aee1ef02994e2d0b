#include "essential/term.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace essential {

struct Term::Node {
  Kind kind;
  std::uint32_t index = 0;
  std::string name;
  std::optional<Term> a;  // Lam body, App function
  std::optional<Term> b;  // App argument
  std::size_t size = 1;
  std::size_t hash = 0;
  std::uint32_t loose = 0;
  bool normal = true;
  bool neutral = true;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::free(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Free;
  n->hash = mix(0x51, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::bound(std::uint32_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bound;
  n->index = index;
  n->loose = index + 1;
  n->hash = mix(0xb0, index);
  return Term(std::move(n));
}

Term Term::lam(std::string hint, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->name = std::move(hint);
  n->size = 1 + body.size();
  n->hash = mix(0x1a, body.hash());
  n->loose = body.loose_bound() > 0 ? body.loose_bound() - 1 : 0;
  n->normal = body.is_normal();
  n->neutral = false;
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->size = 1 + fun.size() + arg.size();
  n->hash = mix(mix(0xa9, fun.hash()), arg.hash());
  n->loose = std::max(fun.loose_bound(), arg.loose_bound());
  n->neutral = fun.is_neutral() && arg.is_normal();
  n->normal = n->neutral;
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
bool Term::is_redex() const { return node_->kind == Kind::App && node_->a->is_lam(); }
const std::string& Term::name() const { return node_->name; }
std::uint32_t Term::index() const { return node_->index; }
const Term& Term::body() const {
  assert(is_lam());
  return *node_->a;
}
const Term& Term::fun() const {
  assert(is_app());
  return *node_->a;
}
const Term& Term::arg() const {
  assert(is_app());
  return *node_->b;
}
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }
std::uint32_t Term::loose_bound() const { return node_->loose; }
bool Term::is_normal() const { return node_->normal; }
bool Term::is_neutral() const { return node_->neutral; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Free:
      return a.name() == b.name();
    case Term::Kind::Bound:
      return a.index() == b.index();
    case Term::Kind::Lam:
      return a.body() == b.body();
    case Term::Kind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
  return false;
}

bool alpha_eq(const Term& a, const Term& b) { return a == b; }

// ---------------------------------------------------------------------------
// Positions

Position Position::child(Dir d) const {
  Position p = *this;
  p.path.push_back(d);
  return p;
}

Position Position::prefixed(Dir d) const {
  Position p;
  p.path.reserve(path.size() + 1);
  p.path.push_back(d);
  p.path.insert(p.path.end(), path.begin(), path.end());
  return p;
}

std::uint32_t Position::right_moves() const {
  return static_cast<std::uint32_t>(std::count(path.begin(), path.end(), Dir::Right));
}

bool Position::is_prefix_of(const Position& other) const {
  return path.size() <= other.path.size() &&
         std::equal(path.begin(), path.end(), other.path.begin());
}

std::string Position::str() const {
  if (path.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    switch (path[i]) {
      case Dir::Body: out += 'B'; break;
      case Dir::Left: out += 'L'; break;
      case Dir::Right: out += 'R'; break;
    }
  }
  return out;
}

Position Position::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  Position p;
  if (text.empty() || text == "root") return p;
  std::size_t i = 0;
  while (i < text.size()) {
    switch (text[i]) {
      case 'B': p.path.push_back(Dir::Body); break;
      case 'L': p.path.push_back(Dir::Left); break;
      case 'R': p.path.push_back(Dir::Right); break;
      default:
        throw InvalidPosition("bad direction '" + std::string(1, text[i]) + "' in position \"" +
                              std::string(text) + "\"");
    }
    ++i;
    if (i < text.size()) {
      if (text[i] != '.') {
        throw InvalidPosition("expected '.' in position \"" + std::string(text) + "\"");
      }
      ++i;
      if (i == text.size()) throw InvalidPosition("trailing '.' in position");
    }
  }
  return p;
}

std::optional<Term> subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (Dir d : p.path) {
    switch (d) {
      case Dir::Body:
        if (!cur->is_lam()) return std::nullopt;
        cur = &cur->body();
        break;
      case Dir::Left:
        if (!cur->is_app()) return std::nullopt;
        cur = &cur->fun();
        break;
      case Dir::Right:
        if (!cur->is_app()) return std::nullopt;
        cur = &cur->arg();
        break;
    }
  }
  return *cur;
}

namespace {

Term replace_rec(const Term& t, const std::vector<Dir>& path, std::size_t i, const Term& r) {
  if (i == path.size()) return r;
  switch (path[i]) {
    case Dir::Body:
      if (!t.is_lam()) break;
      return Term::lam(t.name(), replace_rec(t.body(), path, i + 1, r));
    case Dir::Left:
      if (!t.is_app()) break;
      return Term::app(replace_rec(t.fun(), path, i + 1, r), t.arg());
    case Dir::Right:
      if (!t.is_app()) break;
      return Term::app(t.fun(), replace_rec(t.arg(), path, i + 1, r));
  }
  throw InvalidPosition("position " + Position(path).str() + " does not address a subterm");
}

}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& replacement) {
  return replace_rec(t, p.path, 0, replacement);
}

// ---------------------------------------------------------------------------
// De Bruijn plumbing

namespace debruijn {

Term shift(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0 || t.loose_bound() <= cutoff) return t;
  switch (t.kind()) {
    case Term::Kind::Free:
      return t;
    case Term::Kind::Bound:
      return t.index() >= cutoff ? Term::bound(t.index() + by) : t;
    case Term::Kind::Lam:
      return Term::lam(t.name(), shift(t.body(), by, cutoff + 1));
    case Term::Kind::App:
      return Term::app(shift(t.fun(), by, cutoff), shift(t.arg(), by, cutoff));
  }
  return t;
}

namespace {

Term instantiate_rec(const Term& t, std::uint32_t depth, const Term& arg) {
  if (t.loose_bound() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Free:
      return t;
    case Term::Kind::Bound:
      if (t.index() == depth) return shift(arg, depth);
      return t.index() > depth ? Term::bound(t.index() - 1) : t;
    case Term::Kind::Lam:
      return Term::lam(t.name(), instantiate_rec(t.body(), depth + 1, arg));
    case Term::Kind::App:
      return Term::app(instantiate_rec(t.fun(), depth, arg), instantiate_rec(t.arg(), depth, arg));
  }
  return t;
}

std::size_t count_bound_rec(const Term& t, std::uint32_t depth) {
  if (t.loose_bound() <= depth) return 0;
  switch (t.kind()) {
    case Term::Kind::Free:
      return 0;
    case Term::Kind::Bound:
      return t.index() == depth ? 1 : 0;
    case Term::Kind::Lam:
      return count_bound_rec(t.body(), depth + 1);
    case Term::Kind::App:
      return count_bound_rec(t.fun(), depth) + count_bound_rec(t.arg(), depth);
  }
  return 0;
}

}  // namespace

Term instantiate(const Term& body, const Term& arg) { return instantiate_rec(body, 0, arg); }

std::size_t count_bound(const Term& body) { return count_bound_rec(body, 0); }

}  // namespace debruijn

// ---------------------------------------------------------------------------
// Free variables

namespace {

Term substitute_rec(const Term& t, const std::string& x, const Term& s, std::uint32_t depth) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return t.name() == x ? debruijn::shift(s, depth) : t;
    case Term::Kind::Bound:
      return t;
    case Term::Kind::Lam: {
      Term body = substitute_rec(t.body(), x, s, depth + 1);
      return body.same_node(t.body()) ? t : Term::lam(t.name(), std::move(body));
    }
    case Term::Kind::App: {
      Term f = substitute_rec(t.fun(), x, s, depth);
      Term a = substitute_rec(t.arg(), x, s, depth);
      if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

void free_names_rec(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Free: out.insert(t.name()); break;
    case Term::Kind::Bound: break;
    case Term::Kind::Lam: free_names_rec(t.body(), out); break;
    case Term::Kind::App:
      free_names_rec(t.fun(), out);
      free_names_rec(t.arg(), out);
      break;
  }
}

void occurrences_rec(const Term& t, const std::string& x, std::vector<Dir>& path,
                     std::vector<Position>& out) {
  switch (t.kind()) {
    case Term::Kind::Free:
      if (t.name() == x) out.emplace_back(path);
      break;
    case Term::Kind::Bound:
      break;
    case Term::Kind::Lam:
      path.push_back(Dir::Body);
      occurrences_rec(t.body(), x, path, out);
      path.pop_back();
      break;
    case Term::Kind::App:
      path.push_back(Dir::Left);
      occurrences_rec(t.fun(), x, path, out);
      path.back() = Dir::Right;
      occurrences_rec(t.arg(), x, path, out);
      path.pop_back();
      break;
  }
}

}  // namespace

Term substitute(const Term& t, const std::string& x, const Term& s) {
  return substitute_rec(t, x, s, 0);
}

std::size_t count_occurrences(const Term& t, const std::string& x) {
  switch (t.kind()) {
    case Term::Kind::Free: return t.name() == x ? 1 : 0;
    case Term::Kind::Bound: return 0;
    case Term::Kind::Lam: return count_occurrences(t.body(), x);
    case Term::Kind::App: return count_occurrences(t.fun(), x) + count_occurrences(t.arg(), x);
  }
  return 0;
}

bool is_value(const Term& t) { return t.kind() != Term::Kind::App; }

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  free_names_rec(t, out);
  return out;
}

std::vector<Position> occurrences(const Term& t, const std::string& x) {
  std::vector<Position> out;
  std::vector<Dir> path;
  occurrences_rec(t, x, path, out);
  return out;
}

}  // namespace essential
