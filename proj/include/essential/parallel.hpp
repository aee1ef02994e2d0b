#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "essential/level.hpp"
#include "essential/reduction.hpp"
#include "essential/term.hpp"

namespace essential {

// CbN and CbV count a sequentialization length; Leveled tracks the least
// level of a contracted redex.
enum class Flavor { CbN, CbV, Leveled };
enum class Rule { Var, Abs, App, Beta };

std::string_view to_string(Flavor f);
std::string_view to_string(Rule r);
std::optional<Flavor> parse_flavor(std::string_view text);

// Flavor whose parallel steps the system's inessential relation lives in.
Flavor flavor_of(SystemId sys);

class InvalidSelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CbvNonValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FlavorMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivation tree of an indexed parallel step source ⇒ target.
///
/// Both the counting index and the level index are kept on every node; the
/// flavor says which one is the index of the derivation. Children:
///   Abs   child(0) = body
///   App   child(0) = function, child(1) = argument
///   Beta  child(0) = body of the contracted abstraction (one loose index),
///         child(1) = argument
class ParDerivation {
 public:
  static ParDerivation var(Flavor f, const Term& t);
  static ParDerivation abs(const std::string& hint, ParDerivation body);
  static ParDerivation app(ParDerivation fun, ParDerivation arg);
  // Throws CbvNonValue for a CbV derivation whose argument source is not a value.
  static ParDerivation beta(const std::string& hint, ParDerivation body, ParDerivation arg);

  Flavor flavor() const { return node_->flavor; }
  Rule rule() const { return node_->rule; }
  const Term& source() const { return node_->source; }
  const Term& target() const { return node_->target; }
  // n + m on applications, n + |t'|_x·m + 1 on contractions.
  std::uint64_t count() const { return node_->count; }
  // min{k, h+1} on applications, 0 on contractions, ∞ on variables.
  Level level() const { return node_->level; }
  // Number of contracted redexes.
  std::size_t redex_count() const { return node_->redexes; }
  const ParDerivation& child(std::size_t i) const { return node_->children.at(i); }
  const std::string& hint() const { return node_->hint; }

  // Same as count() for CbN/CbV; level as a number (∞ → max) for Leveled.
  std::uint64_t index() const;
  bool is_identity() const { return node_->redexes == 0; }

 private:
  struct Node {
    Flavor flavor;
    Rule rule;
    Term source;
    Term target;
    std::uint64_t count = 0;
    Level level;
    std::size_t redexes = 0;
    std::string hint;
    std::vector<ParDerivation> children;
  };
  explicit ParDerivation(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Set of redex positions of the source term contracted together.
using RedexSelection = std::vector<Position>;

// Builds the derivation contracting exactly the selected redexes. Throws
// InvalidSelection when a position is not a redex, CbvNonValue when a CbV
// selection picks a redex whose argument is not a value.
ParDerivation derive(const Term& t, const RedexSelection& sel, Flavor flavor);

ParDerivation identity(const Term& t, Flavor flavor);

// Contracted positions in pre-order.
RedexSelection selection(const ParDerivation& d);

// Same tree read in another flavor. Throws CbvNonValue when moving to CbV
// would contract a non-value argument.
ParDerivation reflavor(const ParDerivation& d, Flavor flavor);

inline constexpr std::size_t kDefaultParallelCap = std::size_t{1} << 14;

// One derivation per subset of the source's redexes (βv-redexes for CbV),
// in subset-bitmask order, at most `cap` of them.
std::vector<ParDerivation> all_parallel_steps(const Term& t, Flavor flavor,
                                              std::size_t cap = kDefaultParallelCap);

// d1 : t ⇒ t', d2 : s ⇒ s'  gives  t[x←s] ⇒ t'[x←s'].
// Throws FlavorMismatch if the flavors differ, CbvNonValue if CbV and s is
// not a value.
ParDerivation subst_parallel(const ParDerivation& d1, const std::string& x,
                             const ParDerivation& d2);

// body : b ⇒ b' where b has a loose index 0, arg : a ⇒ a'. Gives the
// derivation b[0←a] ⇒ b'[0←a'].
ParDerivation instantiate_derivation(const ParDerivation& body, const ParDerivation& arg);

// Lifts d : t ⇒ t' to live at position p of the context c, where the
// subterm of c at p is t. Every enclosing node is a congruence.
ParDerivation plug(const Term& c, const Position& p, const ParDerivation& d);

// Throws FlavorMismatch unless d's flavor is flavor_of(sys).
bool is_parallel_inessential(const ParDerivation& d, SystemId sys);

// Throws FlavorMismatch unless d is Leveled.
Level parallel_level(const ParDerivation& d);

nlohmann::json to_json(const ParDerivation& d);

}  // namespace essential
