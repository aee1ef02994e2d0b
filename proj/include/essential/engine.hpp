#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "essential/parallel.hpp"
#include "essential/reduction.hpp"
#include "essential/term.hpp"

namespace essential {

class NotInessential : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotComposable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidTrace : public std::runtime_error {
 public:
  InvalidTrace(const std::string& message, std::size_t step)
      : std::runtime_error(message), step_(step) {}
  // Zero-based index of the offending step.
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// A base reduction split into essential and inessential steps, with its
/// parallel flavor and parallel-inessential recognizer.
struct EssentialSystem {
  SystemId id;
  Base base;
  Flavor flavor;

  static EssentialSystem of(SystemId id);

  Steps base_steps(const Term& t) const { return essential::base_steps(t, base); }
  Steps essential(const Term& t) const { return essential_steps(t, id); }
  Steps inessential(const Term& t) const { return inessential_steps(t, id); }
  bool parallel_inessential(const ParDerivation& d) const { return is_parallel_inessential(d, id); }
};

struct Trace {
  Term start;
  Steps steps;

  explicit Trace(Term s) : start(std::move(s)) {}
  const Term& end() const { return steps.empty() ? start : steps.back().term; }
  std::size_t size() const { return steps.size(); }
};

struct Factorization {
  Trace essential;
  Trace inessential;
};

struct SplitResult {
  Trace essential;
  ParDerivation residual;
  // Index of the derivation before each iteration, then of the residual.
  std::vector<std::uint64_t> counts;
};

// Repeats the indexed split until the derivation is parallel-inessential.
// The counting index drops by exactly one per essential step. LeastLevel
// also accepts a CbN derivation and reads it as Leveled.
SplitResult split(const ParDerivation& d, SystemId sys);

// One iteration: the essential step and the derivation left over. nullopt
// when d is already parallel-inessential.
std::optional<std::pair<StepResult, ParDerivation>> split_once(const ParDerivation& d, SystemId sys);

// d : t ⇒¬e u followed by the essential step u →e s gives t ⇒ s.
ParDerivation merge(const ParDerivation& d, const StepResult& e, SystemId sys);

// Builds a trace from positions, classifying each step. Throws InvalidTrace.
Trace make_trace(const Term& start, const std::vector<Position>& positions, SystemId sys);

// Rearranges a base sequence into essential steps followed by inessential
// ones with the same endpoints. Throws InvalidTrace on a malformed input.
Factorization factorize(const Trace& tr, SystemId sys);

// Step sequence realizing a parallel-inessential derivation, innermost
// redexes first and left to right.
Steps expand(const ParDerivation& d, SystemId sys);

enum class Outcome { NormalFormReached, EssentialNormal, FuelExhausted };
std::string_view to_string(Outcome o);

struct NormalizeResult {
  Trace trace;
  Outcome outcome;
};

// Follows the first essential step until none is left or fuel runs out.
NormalizeResult normalize(const Term& t, SystemId sys, std::size_t fuel);

// Checks that the trace is a base sequence with correct kind tags.
std::optional<std::string> trace_problem(const Trace& tr, SystemId sys);
// Checks the prefix/suffix shape and that the endpoints match the original.
std::optional<std::string> factorization_problem(const Factorization& f, const Trace& original,
                                                 SystemId sys);

nlohmann::json to_json(const Trace& tr);
nlohmann::json to_json(const Factorization& f);

}  // namespace essential
