#include "essential/oracle.hpp"

#include <deque>
#include <map>
#include <random>

namespace essential {

namespace {

std::string hint_for_depth(std::size_t depth) {
  std::string h(1, static_cast<char>('a' + depth % 26));
  if (depth >= 26) h += std::to_string(depth / 26);
  return h;
}

class Enumerator {
 public:
  explicit Enumerator(const EnumSpec& spec) : spec_(spec) {}

  // Terms of size n whose loose indices are below m.
  const std::vector<Term>& terms(std::size_t n, std::uint32_t m) {
    auto key = std::make_pair(n, m);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (n == 1) {
      if (!spec_.closed_only) {
        for (const std::string& x : spec_.free_names) out.push_back(Term::free(x));
      }
      for (std::uint32_t i = 0; i < m; ++i) out.push_back(Term::bound(i));
    } else if (n > 1) {
      for (const Term& b : terms(n - 1, m + 1)) out.push_back(Term::lam(hint_for_depth(m), b));
      for (std::size_t i = 1; i + 2 <= n; ++i) {
        const std::vector<Term>& fs = terms(i, m);
        const std::vector<Term>& as = terms(n - 1 - i, m);
        for (const Term& f : fs) {
          for (const Term& a : as) out.push_back(Term::app(f, a));
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const EnumSpec& spec_;
  std::map<std::pair<std::size_t, std::uint32_t>, std::vector<Term>> memo_;
};

class Counter {
 public:
  explicit Counter(const EnumSpec& spec) : spec_(spec) {}

  double count(std::size_t n, std::uint32_t m) {
    if (n == 0) return 0;
    auto key = std::make_pair(n, m);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double c = 0;
    if (n == 1) {
      c = static_cast<double>(m) + (spec_.closed_only ? 0.0 : static_cast<double>(spec_.free_names.size()));
    } else {
      c = count(n - 1, m + 1);
      for (std::size_t i = 1; i + 2 <= n; ++i) c += count(i, m) * count(n - 1 - i, m);
    }
    memo_[key] = c;
    return c;
  }

  Term sample(std::size_t n, std::uint32_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, count(n, m));
    double r = u(rng);
    if (n == 1) {
      std::size_t nf = spec_.closed_only ? 0 : spec_.free_names.size();
      auto k = static_cast<std::size_t>(r);
      if (k >= nf + m) k = nf + m - 1;
      if (k < nf) return Term::free(spec_.free_names[k]);
      return Term::bound(static_cast<std::uint32_t>(k - nf));
    }
    double lam = count(n - 1, m + 1);
    if (r < lam) return Term::lam(hint_for_depth(m), sample(n - 1, m + 1, rng));
    r -= lam;
    std::size_t last = 0;
    for (std::size_t i = 1; i + 2 <= n; ++i) {
      double w = count(i, m) * count(n - 1 - i, m);
      if (w <= 0) continue;
      last = i;
      if (r < w) return Term::app(sample(i, m, rng), sample(n - 1 - i, m, rng));
      r -= w;
    }
    // Rounding fell off the end.
    if (last == 0) return Term::lam(hint_for_depth(m), sample(n - 1, m + 1, rng));
    return Term::app(sample(last, m, rng), sample(n - 1 - last, m, rng));
  }

 private:
  const EnumSpec& spec_;
  std::map<std::pair<std::size_t, std::uint32_t>, double> memo_;
};

}  // namespace

std::vector<Term> terms_of_size(std::size_t size, const EnumSpec& spec) {
  Enumerator e(spec);
  return e.terms(size, 0);
}

std::vector<Term> enumerate_terms(const EnumSpec& spec) {
  Enumerator e(spec);
  std::vector<Term> out;
  for (std::size_t n = 1; n <= spec.max_size; ++n) {
    const std::vector<Term>& ts = e.terms(n, 0);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

double count_terms(std::size_t size, const EnumSpec& spec) { return Counter(spec).count(size, 0); }

Term random_term(std::uint64_t seed, std::size_t target_size, const EnumSpec& spec) {
  if (target_size == 0) throw std::invalid_argument("target size must be positive");
  Counter c(spec);
  std::size_t n = target_size;
  if (c.count(n, 0) <= 0) n = target_size + 1;
  if (c.count(n, 0) <= 0 && target_size > 1) n = target_size - 1;
  if (c.count(n, 0) <= 0) throw std::invalid_argument("no term near the requested size");
  std::mt19937_64 rng(seed);
  return c.sample(n, 0, rng);
}

// ---------------------------------------------------------------------------
// Graphs

std::optional<std::size_t> ReductionGraph::find(const Term& t) const {
  auto it = ids.find(t);
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

ReductionGraph explore_with(const Term& t, const Stepper& step, std::size_t node_budget,
                            std::size_t depth_budget) {
  if (node_budget == 0 || depth_budget == 0) throw std::invalid_argument("budgets must be positive");
  ReductionGraph g;
  auto add = [&g](const Term& u, std::size_t d) {
    g.ids.emplace(u, g.nodes.size());
    g.nodes.push_back(u);
    g.edges.emplace_back();
    g.depth.push_back(d);
    g.expanded.push_back(false);
  };
  add(t, 0);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    Steps succ = step(g.nodes[i]);
    if (succ.empty()) {
      g.expanded[i] = true;
      continue;
    }
    if (g.depth[i] >= depth_budget) {
      g.truncated = true;
      continue;
    }
    std::vector<GraphEdge> out;
    bool overflow = false;
    for (StepResult& s : succ) {
      auto it = g.ids.find(s.term);
      if (it != g.ids.end()) {
        out.push_back({std::move(s.step), it->second});
        continue;
      }
      if (g.nodes.size() >= node_budget) {
        overflow = true;
        break;
      }
      std::size_t id = g.nodes.size();
      add(s.term, g.depth[i] + 1);
      out.push_back({std::move(s.step), id});
    }
    if (overflow) {
      g.truncated = true;
      break;
    }
    g.edges[i] = std::move(out);
    g.expanded[i] = true;
  }
  return g;
}

ReductionGraph explore(const Term& t, Base base, std::size_t node_budget, std::size_t depth_budget) {
  return explore_with(
      t, [base](const Term& u) { return base_steps(u, base); }, node_budget, depth_budget);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

Verdict weakly_normalizing(const ReductionGraph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_terminal(i)) return Verdict::Yes;
  }
  return g.truncated ? Verdict::Unknown : Verdict::No;
}

Verdict strongly_normalizing(const ReductionGraph& g) {
  // Iterative three-colour search for a cycle among recorded edges.
  enum Colour : std::uint8_t { White, Grey, Black };
  std::vector<Colour> colour(g.size(), White);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < g.size(); ++root) {
    if (colour[root] != White) continue;
    stack.push_back({root, 0});
    colour[root] = Grey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < g.edges[v].size()) {
        std::size_t w = g.edges[v][next++].to;
        if (colour[w] == Grey) return Verdict::No;
        if (colour[w] == White) {
          colour[w] = Grey;
          stack.push_back({w, 0});
        }
      } else {
        colour[v] = Black;
        stack.pop_back();
      }
    }
  }
  return g.truncated ? Verdict::Unknown : Verdict::Yes;
}

std::optional<Trace> path_exists(const ReductionGraph& g, const Term& from, const Term& to,
                                 std::size_t max_len) {
  auto s = g.find(from);
  auto t = g.find(to);
  if (!s || !t) return std::nullopt;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.size(), kNone);
  std::vector<std::pair<std::size_t, std::size_t>> parent(g.size(), {kNone, kNone});
  std::deque<std::size_t> queue{*s};
  dist[*s] = 0;
  while (!queue.empty() && dist[*t] == kNone) {
    std::size_t v = queue.front();
    queue.pop_front();
    if (dist[v] == max_len) continue;
    for (std::size_t e = 0; e < g.edges[v].size(); ++e) {
      std::size_t w = g.edges[v][e].to;
      if (dist[w] != kNone) continue;
      dist[w] = dist[v] + 1;
      parent[w] = {v, e};
      queue.push_back(w);
    }
  }
  if (dist[*t] == kNone) return std::nullopt;
  std::vector<StepResult> rev;
  for (std::size_t v = *t; v != *s; v = parent[v].first) {
    const GraphEdge& e = g.edges[parent[v].first][parent[v].second];
    rev.push_back({e.step, g.nodes[v]});
  }
  Trace tr(g.nodes[*s]);
  tr.steps.assign(rev.rbegin(), rev.rend());
  return tr;
}

nlohmann::json to_json(const ReductionGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    nodes.push_back(print(g.nodes[i]));
    for (const GraphEdge& e : g.edges[i]) {
      edges.push_back({{"from", print(g.nodes[i])},
                       {"to", print(g.nodes[e.to])},
                       {"position", e.step.position.str()}});
    }
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"truncated", g.truncated}};
}

}  // namespace essential
