#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "essential/level.hpp"
#include "essential/term.hpp"

namespace essential {

enum class SystemId { Head, WeakCbV, LO, LeastLevel };
enum class Base { Beta, BetaV };
enum class StepKind { Essential, Inessential, Plain };

inline constexpr SystemId kAllSystems[] = {SystemId::Head, SystemId::WeakCbV, SystemId::LO,
                                           SystemId::LeastLevel};

std::string_view to_string(SystemId id);
std::string_view to_string(Base base);
std::string_view to_string(StepKind kind);
// Accepts the CLI spellings: head, weak-cbv, lo, ll.
std::optional<SystemId> parse_system(std::string_view text);

// Head, LO and LeastLevel live over β; WeakCbV over βv.
Base base_of(SystemId id);

/// One reduction step: the contracted redex, how the system classifies it,
/// and the level of the redex (number of enclosing arguments).
struct Step {
  Position position;
  StepKind kind = StepKind::Plain;
  Level level;

  friend bool operator==(const Step&, const Step&) = default;
};

struct StepResult {
  Step step;
  Term term;
};

using Steps = std::vector<StepResult>;

// Redex positions in leftmost-outermost order.
std::vector<Position> beta_redexes(const Term& t);
std::vector<Position> betav_redexes(const Term& t);
std::vector<Position> redexes(const Term& t, Base base);

// Contracts the redex at p. Throws InvalidPosition unless p is a redex of
// the given base reduction.
Term step_at(const Term& t, const Position& p, Base base);

// Every base step, tagged Plain, computed from the redex list.
Steps base_steps(const Term& t, Base base);

// Head reduction and its inessential partner.
std::optional<Term> head_step(const Term& t);
Steps head_steps(const Term& t);
Steps neg_head_steps(const Term& t);

// Weak call-by-value reduction; never under an abstraction.
Steps weak_cbv_steps(const Term& t);
Steps neg_weak_steps(const Term& t);

// Leftmost-outermost reduction.
std::optional<Term> lo_step(const Term& t);
Steps lo_steps(const Term& t);
Steps neg_lo_steps(const Term& t);

// Least reduction level: ∞ on variables, 0 on a redex, otherwise the minimum
// of the function's level and one more than the argument's.
Level least_level(const Term& t);
// Every β step with its level: 0 at the root, unchanged under λ and to the
// left of an application, one more to the right.
Steps level_indexed_steps(const Term& t);
Steps ll_steps(const Term& t);
Steps neg_ll_steps(const Term& t);

Steps essential_steps(const Term& t, SystemId sys);
Steps inessential_steps(const Term& t, SystemId sys);

// Kind of the base step at p under sys, or nullopt when p is not a redex of
// the system's base reduction.
std::optional<StepKind> classify(const Term& t, const Position& p, SystemId sys);

}  // namespace essential
