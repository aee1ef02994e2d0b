#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "essential/engine.hpp"
#include "essential/reduction.hpp"
#include "essential/term.hpp"

namespace essential {

struct EnumSpec {
  std::size_t max_size = 1;
  std::vector<std::string> free_names{"x", "y"};
  bool closed_only = false;
};

// Every term of size ≤ max_size up to alpha, by size and then in a fixed
// constructor order. Binders are hinted a, b, c, ... by depth.
std::vector<Term> enumerate_terms(const EnumSpec& spec);

// Terms of exactly the given size.
std::vector<Term> terms_of_size(std::size_t size, const EnumSpec& spec);

// Number of terms of exactly the given size (as a double, it grows fast).
double count_terms(std::size_t size, const EnumSpec& spec);

// Uniform among the terms of the target size; falls back to size ± 1 when
// there is none.
Term random_term(std::uint64_t seed, std::size_t target_size, const EnumSpec& spec);

inline constexpr std::size_t kDefaultNodeBudget = 20000;
inline constexpr std::size_t kDefaultDepthBudget = 64;

using Stepper = std::function<Steps(const Term&)>;

struct GraphEdge {
  Step step;
  std::size_t to;
};

/// Breadth-first reduction graph. Node 0 is the start term.
struct ReductionGraph {
  std::vector<Term> nodes;
  std::vector<std::vector<GraphEdge>> edges;
  std::vector<std::size_t> depth;
  // Whether the successors of the node were recorded.
  std::vector<bool> expanded;
  bool truncated = false;

  std::optional<std::size_t> find(const Term& t) const;
  std::size_t size() const { return nodes.size(); }
  // Expanded and without successors.
  bool is_terminal(std::size_t i) const { return expanded[i] && edges[i].empty(); }

  std::unordered_map<Term, std::size_t, TermHash> ids;
};

ReductionGraph explore(const Term& t, Base base, std::size_t node_budget = kDefaultNodeBudget,
                       std::size_t depth_budget = kDefaultDepthBudget);
// Same search over an arbitrary one-step relation.
ReductionGraph explore_with(const Term& t, const Stepper& step, std::size_t node_budget,
                            std::size_t depth_budget);

enum class Verdict { Yes, No, Unknown };
std::string_view to_string(Verdict v);

// Yes when a terminal node is present, No only on an untruncated graph.
Verdict weakly_normalizing(const ReductionGraph& g);
// No on a cycle, Yes on an untruncated acyclic graph.
Verdict strongly_normalizing(const ReductionGraph& g);

// Shortest path of at most max_len edges.
std::optional<Trace> path_exists(const ReductionGraph& g, const Term& from, const Term& to,
                                 std::size_t max_len);

nlohmann::json to_json(const ReductionGraph& g);

}  // namespace essential
