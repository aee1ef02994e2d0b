#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace essential {

/// Immutable λ-term.
///
/// Bound variables are de Bruijn indices and free variables are names, so
/// alpha-equivalence is structural equality and substitution never captures.
/// Abstractions keep the binder name they were written with as a printing
/// hint; the hint takes no part in equality or hashing.
class Term {
 public:
  enum class Kind : std::uint8_t { Free, Bound, Lam, App };

  static Term free(std::string name);
  static Term bound(std::uint32_t index);
  static Term lam(std::string hint, Term body);
  static Term app(Term fun, Term arg);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Free || kind() == Kind::Bound; }
  bool is_lam() const { return kind() == Kind::Lam; }
  bool is_app() const { return kind() == Kind::App; }
  // An application whose function is an abstraction.
  bool is_redex() const;

  // Free: the variable name. Lam: the binder hint.
  const std::string& name() const;
  std::uint32_t index() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;

  // Node count: variables count 1, Lam 1 + body, App 1 + fun + arg.
  std::size_t size() const;
  std::size_t hash() const;
  // One past the largest loose de Bruijn index; 0 iff locally closed.
  std::uint32_t loose_bound() const;
  // No β-redex anywhere in the term.
  bool is_normal() const;
  // Normal and not an abstraction.
  bool is_neutral() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

enum class Dir : std::uint8_t { Body, Left, Right };

/// Path from the root of a term to one of its subterms. Ordering is
/// lexicographic with a prefix first, which is the leftmost-outermost
/// (pre-order) traversal order.
struct Position {
  std::vector<Dir> path;

  Position() = default;
  explicit Position(std::vector<Dir> p) : path(std::move(p)) {}

  bool is_root() const { return path.empty(); }
  Position child(Dir d) const;
  Position prefixed(Dir d) const;
  // Number of app-right moves along the path.
  std::uint32_t right_moves() const;
  bool is_prefix_of(const Position& other) const;

  // "root" or a dot-separated string of B|L|R.
  std::string str() const;
  static Position parse(std::string_view text);

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

class InvalidPosition : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Grammar:
//   term  := lam | app
//   lam   := ("\" | "λ") IDENT "." term
//   app   := atom+ [lam]
//   atom  := IDENT | "(" term ")"
//   IDENT := [a-zA-Z][a-zA-Z0-9']*
Term parse(std::string_view text);

// Minimal-parentheses rendering. Binders are renamed with primes only when
// the written hint would capture a variable of the body.
std::string print(const Term& t);

bool alpha_eq(const Term& a, const Term& b);

// Capture-avoiding substitution of s for the free variable x in t.
Term substitute(const Term& t, const std::string& x, const Term& s);

// Number of free occurrences of x in t.
std::size_t count_occurrences(const Term& t, const std::string& x);

bool is_value(const Term& t);
inline bool is_normal(const Term& t) { return t.is_normal(); }
inline bool is_neutral(const Term& t) { return t.is_neutral(); }
inline std::size_t size(const Term& t) { return t.size(); }

std::set<std::string> free_names(const Term& t);

std::optional<Term> subterm_at(const Term& t, const Position& p);
// Replaces the subterm at p. Throws InvalidPosition if p leaves the term.
Term replace_at(const Term& t, const Position& p, const Term& replacement);

// Positions of the free occurrences of x in t, in pre-order.
std::vector<Position> occurrences(const Term& t, const std::string& x);

namespace debruijn {

// Adds `by` to every bound index >= cutoff.
Term shift(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0);

// Contracts (λ.body) arg: replaces index 0 of body with arg and lowers the
// remaining loose indices of body by one.
Term instantiate(const Term& body, const Term& arg);

// Number of occurrences of the variable bound by an abstraction whose body is
// `body`, i.e. |body|_x for λx.body.
std::size_t count_bound(const Term& body);

}  // namespace debruijn

}  // namespace essential
