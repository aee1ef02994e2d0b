#include "essential/engine.hpp"

#include <algorithm>

namespace essential {

EssentialSystem EssentialSystem::of(SystemId id) { return {id, base_of(id), flavor_of(id)}; }

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::NormalFormReached: return "normal-form";
    case Outcome::EssentialNormal: return "essential-normal";
    case Outcome::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Split

namespace {

using Found = std::optional<std::pair<Position, ParDerivation>>;

Found split_rec(const ParDerivation& d, SystemId sys);

Found at_root(const ParDerivation& d) {
  return std::make_pair(Position(), instantiate_derivation(d.child(0), d.child(1)));
}

Found in_body(const ParDerivation& d, SystemId sys) {
  Found r = split_rec(d.child(0), sys);
  if (!r) return r;
  return std::make_pair(r->first.prefixed(Dir::Body), ParDerivation::abs(d.hint(), r->second));
}

Found in_fun(const ParDerivation& d, SystemId sys) {
  Found r = split_rec(d.child(0), sys);
  if (!r) return r;
  return std::make_pair(r->first.prefixed(Dir::Left), ParDerivation::app(r->second, d.child(1)));
}

Found in_arg(const ParDerivation& d, SystemId sys) {
  Found r = split_rec(d.child(1), sys);
  if (!r) return r;
  return std::make_pair(r->first.prefixed(Dir::Right), ParDerivation::app(d.child(0), r->second));
}

Found split_rec(const ParDerivation& d, SystemId sys) {
  if (d.rule() == Rule::Var) return std::nullopt;
  switch (sys) {
    case SystemId::Head:
      switch (d.rule()) {
        case Rule::Beta: return at_root(d);
        case Rule::Abs: return in_body(d, sys);
        case Rule::App:
          if (d.child(0).source().is_lam()) return std::nullopt;
          return in_fun(d, sys);
        default: return std::nullopt;
      }
    case SystemId::WeakCbV:
      switch (d.rule()) {
        case Rule::Beta: return at_root(d);
        case Rule::App: {
          Found r = in_fun(d, sys);
          return r ? r : in_arg(d, sys);
        }
        default: return std::nullopt;
      }
    case SystemId::LO:
      switch (d.rule()) {
        case Rule::Beta: return at_root(d);
        case Rule::Abs: return in_body(d, sys);
        case Rule::App: {
          const Term& f = d.child(0).source();
          if (f.is_lam()) return std::nullopt;
          return f.is_neutral() ? in_arg(d, sys) : in_fun(d, sys);
        }
        default: return std::nullopt;
      }
    case SystemId::LeastLevel: {
      if (d.level().is_infinite() || d.level() > least_level(d.source())) return std::nullopt;
      switch (d.rule()) {
        case Rule::Beta: return at_root(d);
        case Rule::Abs: return in_body(d, sys);
        case Rule::App:
          return d.child(0).level() == d.level() ? in_fun(d, sys) : in_arg(d, sys);
        default: return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

ParDerivation prepare(const ParDerivation& d, SystemId sys) {
  Flavor want = flavor_of(sys);
  if (d.flavor() == want) return d;
  if (sys == SystemId::LeastLevel && d.flavor() == Flavor::CbN) return reflavor(d, want);
  throw FlavorMismatch(std::string(to_string(d.flavor())) + " derivation split by " +
                       std::string(to_string(sys)));
}

}  // namespace

std::optional<std::pair<StepResult, ParDerivation>> split_once(const ParDerivation& d, SystemId sys) {
  ParDerivation cur = prepare(d, sys);
  if (is_parallel_inessential(cur, sys)) return std::nullopt;
  Found r = split_rec(cur, sys);
  if (!r) throw std::logic_error("split found no essential redex in " + print(cur.source()));
  Level lvl(r->first.right_moves());
  StepResult step{Step{r->first, StepKind::Essential, lvl}, r->second.source()};
  return std::make_pair(std::move(step), std::move(r->second));
}

SplitResult split(const ParDerivation& d, SystemId sys) {
  ParDerivation cur = prepare(d, sys);
  SplitResult out{Trace(cur.source()), cur, {cur.count()}};
  while (auto r = split_once(cur, sys)) {
    out.essential.steps.push_back(std::move(r->first));
    cur = std::move(r->second);
    out.counts.push_back(cur.count());
  }
  out.residual = cur;
  return out;
}

// ---------------------------------------------------------------------------
// Merge

namespace {

ParDerivation merge_walk(const ParDerivation& d, const std::vector<Dir>& path, std::size_t i) {
  if (d.rule() == Rule::Beta) {
    throw std::logic_error("essential redex created by an inessential contraction");
  }
  if (i == path.size()) {
    if (d.rule() != Rule::App || d.child(0).rule() != Rule::Abs) {
      throw std::logic_error("merge reached a node that is not a redex");
    }
    const ParDerivation& lam = d.child(0);
    return ParDerivation::beta(lam.hint(), lam.child(0), d.child(1));
  }
  switch (d.rule()) {
    case Rule::Abs:
      if (path[i] == Dir::Body) return ParDerivation::abs(d.hint(), merge_walk(d.child(0), path, i + 1));
      break;
    case Rule::App:
      if (path[i] == Dir::Left) return ParDerivation::app(merge_walk(d.child(0), path, i + 1), d.child(1));
      if (path[i] == Dir::Right) return ParDerivation::app(d.child(0), merge_walk(d.child(1), path, i + 1));
      break;
    default:
      break;
  }
  throw std::logic_error("merge path leaves the derivation");
}

}  // namespace

ParDerivation merge(const ParDerivation& d, const StepResult& e, SystemId sys) {
  if (!is_parallel_inessential(d, sys)) {
    throw NotInessential("derivation from " + print(d.source()) + " is not parallel-inessential");
  }
  const Term& mid = d.target();
  auto sub = subterm_at(mid, e.step.position);
  if (!sub || !sub->is_redex()) {
    throw NotComposable("no redex at " + e.step.position.str() + " in " + print(mid));
  }
  if (!(step_at(mid, e.step.position, base_of(sys)) == e.term) ||
      classify(mid, e.step.position, sys) != StepKind::Essential) {
    throw NotComposable("step at " + e.step.position.str() + " is not an essential step of " +
                        print(mid));
  }
  return merge_walk(d, e.step.position.path, 0);
}

// ---------------------------------------------------------------------------
// Traces

namespace {

void check_trace(const Trace& tr, SystemId sys) {
  Base base = base_of(sys);
  Term cur = tr.start;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const StepResult& s = tr.steps[i];
    auto kind = classify(cur, s.step.position, sys);
    if (!kind) {
      throw InvalidTrace("step " + std::to_string(i + 1) + ": no " + std::string(to_string(base)) +
                             "-redex at " + s.step.position.str() + " in " + print(cur),
                         i);
    }
    if (!(step_at(cur, s.step.position, base) == s.term)) {
      throw InvalidTrace("step " + std::to_string(i + 1) + ": wrong reduct", i);
    }
    if (s.step.kind != *kind) {
      throw InvalidTrace("step " + std::to_string(i + 1) + ": tagged " +
                             std::string(to_string(s.step.kind)) + " but is " +
                             std::string(to_string(*kind)),
                         i);
    }
    if (s.step.level != Level(s.step.position.right_moves())) {
      throw InvalidTrace("step " + std::to_string(i + 1) + ": wrong level", i);
    }
    cur = s.term;
  }
}

void post_order(const ParDerivation& d, std::vector<Dir>& path, std::vector<Position>& out) {
  switch (d.rule()) {
    case Rule::Var:
      return;
    case Rule::Abs:
      path.push_back(Dir::Body);
      post_order(d.child(0), path, out);
      path.pop_back();
      return;
    case Rule::App:
      path.push_back(Dir::Left);
      post_order(d.child(0), path, out);
      path.back() = Dir::Right;
      post_order(d.child(1), path, out);
      path.pop_back();
      return;
    case Rule::Beta:
      path.push_back(Dir::Left);
      path.push_back(Dir::Body);
      post_order(d.child(0), path, out);
      path.pop_back();
      path.back() = Dir::Right;
      post_order(d.child(1), path, out);
      path.pop_back();
      out.emplace_back(path);
      return;
  }
}

}  // namespace

Trace make_trace(const Term& start, const std::vector<Position>& positions, SystemId sys) {
  Base base = base_of(sys);
  Trace tr(start);
  Term cur = start;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Position& p = positions[i];
    auto kind = classify(cur, p, sys);
    if (!kind) {
      throw InvalidTrace("step " + std::to_string(i + 1) + ": no " + std::string(to_string(base)) +
                             "-redex at " + p.str() + " in " + print(cur),
                         i);
    }
    Term next = step_at(cur, p, base);
    tr.steps.push_back({Step{p, *kind, Level(p.right_moves())}, next});
    cur = std::move(next);
  }
  return tr;
}

std::optional<std::string> trace_problem(const Trace& tr, SystemId sys) {
  try {
    check_trace(tr, sys);
  } catch (const InvalidTrace& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

Steps expand(const ParDerivation& d, SystemId sys) {
  std::vector<Position> order;
  std::vector<Dir> path;
  post_order(d, path, order);
  Base base = base_of(sys);
  Steps out;
  Term cur = d.source();
  for (Position& p : order) {
    auto kind = classify(cur, p, sys);
    if (kind != StepKind::Inessential) {
      throw std::logic_error("expansion step at " + p.str() + " in " + print(cur) +
                             " is not inessential");
    }
    Term next = step_at(cur, p, base);
    Level lvl(p.right_moves());
    out.push_back({Step{std::move(p), StepKind::Inessential, lvl}, next});
    cur = std::move(next);
  }
  if (!(cur == d.target())) throw std::logic_error("expansion missed the derivation target");
  return out;
}

Factorization factorize(const Trace& tr, SystemId sys) {
  check_trace(tr, sys);
  Flavor flavor = flavor_of(sys);

  // Suffix already in shape: essential steps, then inessential derivations.
  std::vector<StepResult> ess;
  std::vector<ParDerivation> iness;
  for (std::size_t i = tr.steps.size(); i-- > 0;) {
    const StepResult& s = tr.steps[i];
    if (s.step.kind == StepKind::Essential) {
      ess.insert(ess.begin(), s);
      continue;
    }
    const Term& src = i == 0 ? tr.start : tr.steps[i - 1].term;
    ParDerivation d = derive(src, {s.step.position}, flavor);
    std::vector<StepResult> moved;
    for (const StepResult& e : ess) {
      SplitResult sr = split(merge(d, e, sys), sys);
      for (StepResult& m : sr.essential.steps) moved.push_back(std::move(m));
      d = sr.residual;
    }
    ess = std::move(moved);
    iness.insert(iness.begin(), d);
  }

  Factorization f{Trace(tr.start), Trace(tr.start)};
  f.essential.steps = std::move(ess);
  f.inessential.start = f.essential.end();
  for (const ParDerivation& d : iness) {
    if (d.is_identity()) continue;
    if (!(d.source() == f.inessential.end())) {
      throw std::logic_error("inessential residuals do not compose");
    }
    for (StepResult& s : expand(d, sys)) f.inessential.steps.push_back(std::move(s));
  }
  return f;
}

std::optional<std::string> factorization_problem(const Factorization& f, const Trace& original,
                                                 SystemId sys) {
  if (!(f.essential.start == original.start)) return "essential part starts elsewhere";
  if (!(f.inessential.start == f.essential.end())) return "parts do not meet";
  if (!(f.inessential.end() == original.end())) return "endpoint differs from the input";
  for (const StepResult& s : f.essential.steps) {
    if (s.step.kind != StepKind::Essential) return "inessential step in the essential part";
  }
  for (const StepResult& s : f.inessential.steps) {
    if (s.step.kind != StepKind::Inessential) return "essential step in the inessential part";
  }
  if (auto p = trace_problem(f.essential, sys)) return "essential part: " + *p;
  if (auto p = trace_problem(f.inessential, sys)) return "inessential part: " + *p;
  return std::nullopt;
}

NormalizeResult normalize(const Term& t, SystemId sys, std::size_t fuel) {
  NormalizeResult r{Trace(t), Outcome::FuelExhausted};
  Term cur = t;
  while (true) {
    Steps next = essential_steps(cur, sys);
    if (next.empty()) {
      r.outcome = is_normal(cur) ? Outcome::NormalFormReached : Outcome::EssentialNormal;
      return r;
    }
    if (r.trace.size() >= fuel) {
      r.outcome = Outcome::FuelExhausted;
      return r;
    }
    cur = next.front().term;
    r.trace.steps.push_back(std::move(next.front()));
  }
}

nlohmann::json to_json(const Trace& tr) {
  nlohmann::json steps = nlohmann::json::array();
  for (const StepResult& s : tr.steps) {
    steps.push_back({{"position", s.step.position.str()},
                     {"kind", to_string(s.step.kind)},
                     {"level", s.step.level.value()},
                     {"term", print(s.term)}});
  }
  return {{"start", print(tr.start)}, {"steps", std::move(steps)}, {"end", print(tr.end())}};
}

nlohmann::json to_json(const Factorization& f) {
  return {{"essential", to_json(f.essential)}, {"inessential", to_json(f.inessential)}};
}

}  // namespace essential
