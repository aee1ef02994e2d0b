#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "essential/oracle.hpp"
#include "essential/parallel.hpp"
#include "essential/reduction.hpp"

namespace essential {

enum class Property {
  Merge,
  Split,
  IndexedSplit,
  Persistence,
  Diamond,
  Determinism,
  Fullness,
  Decomposition,
  LLMonotone,
  LLInvariant,
  ShapePreservation,
  LLMeaning,
  ParallelDiamond,
};

std::string_view to_string(Property p);
std::optional<Property> parse_property(std::string_view text);
// Whether the property is stated for the system at all.
bool applies(Property p, SystemId sys);

enum class Result { Pass, Fail, Inconclusive };
std::string_view to_string(Result r);
std::optional<Result> parse_result(std::string_view text);

struct Report {
  std::string property;
  std::string system;
  std::size_t size_bound = 0;
  std::uint64_t checked_count = 0;
  Result result = Result::Pass;
  std::optional<std::string> counterexample;

  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::json to_json(const Report& r);
// Throws nlohmann::json::exception on a malformed report.
Report report_from_json(const nlohmann::json& j);

struct CheckOptions {
  std::size_t size_bound = 8;
  std::size_t fuel = 1000;
  std::size_t node_budget = kDefaultNodeBudget;
  std::size_t depth_budget = kDefaultDepthBudget;
  // Parallel steps tried per term by the merge and split checks.
  std::size_t parallel_cap = 1024;
  bool closed_only = false;
  // 0 runs the serial reference loop; otherwise the OpenMP kernel with that
  // many threads.
  int threads = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
};

/// Outcome of checking one item.
struct ItemOutcome {
  Result result = Result::Pass;
  std::string detail;

  static ItemOutcome pass() { return {}; }
  static ItemOutcome fail(std::string d) { return {Result::Fail, std::move(d)}; }
  static ItemOutcome unknown(std::string d) { return {Result::Inconclusive, std::move(d)}; }
};

struct SweepResult {
  std::uint64_t checked = 0;
  Result result = Result::Pass;
  std::optional<std::string> counterexample;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

// Checks items 0..n-1 in order and stops at the first failure. Reports the
// first failure, else the first inconclusive item.
SweepResult sweep_serial(std::size_t n, const std::function<ItemOutcome(std::size_t)>& check);
// Same result as sweep_serial, items spread over OpenMP threads.
SweepResult sweep_parallel(std::size_t n, const std::function<ItemOutcome(std::size_t)>& check,
                           int threads);
SweepResult sweep(std::size_t n, const std::function<ItemOutcome(std::size_t)>& check, int threads);

// Per-term checks; exposed for tests.
ItemOutcome check_term(Property p, SystemId sys, const Term& t, const CheckOptions& opts);
ItemOutcome check_term_normalization(SystemId sys, const Term& t, const CheckOptions& opts);

// Exhaustive over every term up to opts.size_bound. Throws
// std::invalid_argument when the property is not stated for sys.
Report check_property(Property p, SystemId sys, const CheckOptions& opts);

// Essential normalization over every term up to opts.size_bound. A term is
// examined when its base graph holds an essential-normal term; then the
// essential graph must be finite and acyclic, its terminal terms normal
// (full systems) or values (closed weak CbV), and for the diamond systems
// every maximal sequence has the same length.
Report check_normalization(SystemId sys, const CheckOptions& opts);

// Substitution of derivations: k = n + |t'|_x·m on opts.samples random
// pairs, with the result re-derived from its own selection.
Report check_subst_index(Flavor flavor, const CheckOptions& opts);

// t →β:k s implies t[x←u] →β:k s[x←u], on random instances.
Report check_subst_level(const CheckOptions& opts);

// Random derivations with index ≤ 6: every split iteration lowers the index
// by one and the target is reachable in at most index-many base steps.
Report check_sequentialization(Flavor flavor, const CheckOptions& opts);

// Every base sequence of length ≤ max_len from terms up to opts.size_bound,
// sampled down to max_sequences, factorizes soundly.
Report check_factorization(SystemId sys, const CheckOptions& opts, std::size_t max_len = 4,
                           std::size_t max_sequences = 50000);

// Random derivation drawn by the sampling checks; exposed for tests.
struct SampledDerivation {
  Term term;
  ParDerivation derivation;
};
std::optional<SampledDerivation> sample_derivation(std::uint64_t seed, Flavor flavor,
                                                   std::size_t target_size,
                                                   std::uint64_t max_index,
                                                   const std::vector<std::string>& names);

}  // namespace essential
