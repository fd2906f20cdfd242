#pragma once

// Interval branch-and-bound: MINIMIZE (constrained global optimization) and
// SOLVE (constraint satisfaction) over boxes, with three-valued constraint
// inclusion functions.
//
// MINIMIZE keeps a priority queue ordered by the objective lower bound
// (FIFO among ties), prunes constraint-negative children and children whose
// lower bound exceeds the incumbent upper bound, and accepts boxes whose
// width meets the tolerance. Children with a +inf lower bound are pruned
// outright: no finite value exists on them, and waiting for a finite
// incumbent would force the search to tile regions the objective has already
// excluded.
//
// The incumbent upper bound only ever comes from sources that certify a
// feasible value: boxes whose constraint verdict is positive, and caller-
// supplied feasible-point refinements evaluated at acceptance. Tightening it
// from every surviving box's objective upper bound would poison the bound
// whenever inclusion overestimation lets an infeasible box through the
// constraint filter (routine for equality constraints), and the search would
// then prune the true minimizer.
//
// SOLVE accepts a box once it is fine enough and no constraint can rule it
// out; constraint-positive boxes are accepted at any size. The accepted set
// is therefore an outer cover of the solution set, which is the completeness
// contract the queries need. Everything is deterministic: fixed tie-breaking,
// no randomized traversal.

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "wost/box.hpp"
#include "wost/expr.hpp"
#include "wost/interval.hpp"

namespace wost {

enum class ThreeValued : uint8_t { negative, unknown, positive };

inline ThreeValued conj3(ThreeValued a, ThreeValued b) {
  if (a == ThreeValued::negative || b == ThreeValued::negative) return ThreeValued::negative;
  if (a == ThreeValued::positive && b == ThreeValued::positive) return ThreeValued::positive;
  return ThreeValued::unknown;
}

struct ConstraintInclusion {
  // positive: holds on all of Y; negative: fails on all of Y; else unknown.
  std::function<ThreeValued(const Box&)> verdict;
  // Whether a tolerance-sized box may be accepted by SOLVE. Defaults to
  // "verdict is not negative", the outer-cover rule; equality constraints can
  // never certify positive on a box of positive width, so this is what makes
  // SOLVE return the enclosure of a zero set.
  std::function<bool(const Box&)> accepting;

  ThreeValued operator()(const Box& b) const { return verdict(b); }
  bool accepts(const Box& b) const { return accepting ? accepting(b) : verdict(b) != ThreeValued::negative; }
};

struct ObjectiveInclusion {
  std::function<Interval(const Box&)> box_eval;
  std::function<double(const Vec&)> point_eval;  // optional incumbent refinement

  Interval operator()(const Box& b) const { return box_eval(b); }
};

// width(Y) <= tolerance. Monotone: sub-boxes of accepted boxes are accepted.
struct Acceptance {
  double tolerance = 1e-4;
  bool operator()(const Box& b) const { return b.width() <= tolerance; }
};

struct SearchStats {
  uint64_t boxes_explored = 0;
  uint64_t boxes_pruned_constraint = 0;
  uint64_t boxes_pruned_bound = 0;
  uint64_t boxes_pruned_infinite = 0;  // objective lower bound was +inf
  uint64_t boxes_accepted = 0;
};

enum class BoxEvent : uint8_t { explored, accepted, pruned_constraint, pruned_bound, inserted };

using TraceFn = std::function<void(BoxEvent, const Box&, double)>;

// Certified feasible point near a box plus its objective value; used to
// tighten the incumbent upper bound at acceptance time.
using FeasibleRefineFn = std::function<std::optional<std::pair<Vec, double>>(const Box&)>;

struct MinimizeOptions {
  uint64_t max_boxes = 1'000'000;
  bool bound_pruning = true;  // disabled only by the pruning-soundness tests
  // Post-pass: re-split each accepted box this many levels and take the min
  // of the surviving children's objective lower bounds. Tightens the reported
  // lower bound roughly 2x per level without changing the search.
  int lower_refine_levels = 0;
  // Early stop: once a certified incumbent exists and the least remaining
  // lower bound satisfies this predicate against it, [lb, UB] is already the
  // answer at the caller's precision and the remaining frontier is dropped.
  // Essential when the argmin set has positive measure (symmetric queries),
  // where width-acceptance would have to tile it.
  std::function<bool(double lb, double ub)> stop_predicate;
  FeasibleRefineFn refine;
  TraceFn trace;
};

struct MinimizeResult {
  bool feasible = false;
  bool converged = true;
  Interval minimum_bound = Interval::empty();  // [best lower bound, incumbent UB]
  std::vector<Box> accepted_boxes;
  Vec representative_point;  // midpoint of the accepted box with least lower bound
  SearchStats stats;
};

struct SolveOptions {
  uint64_t max_boxes = 1'000'000;
  TraceFn trace;
  // Streaming acceptance sink; when set, accepted boxes are not stored.
  std::function<void(const Box&)> on_accept;
};

struct SolveResult {
  bool converged = true;
  std::vector<Box> accepted_boxes;
  SearchStats stats;
};

namespace detail {

struct QueueEntry {
  double lb;
  uint64_t seq;
  Box box;
};

struct QueueOrder {
  // std::priority_queue pops the *greatest*; invert so the least lower bound
  // pops first, FIFO among equal bounds.
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;
    return a.seq > b.seq;
  }
};

inline double refined_box_lower(const std::function<Interval(const Box&)>& obj,
                                const std::function<ThreeValued(const Box&)>& con, const Box& b,
                                int levels) {
  if (con(b) == ThreeValued::negative) return kInf;
  if (levels == 0 || !(b.width() > 0.0)) {
    Interval g = obj(b);
    return g.is_empty() ? kInf : g.lo;
  }
  auto [l, r] = subdivide(b);
  return std::min(refined_box_lower(obj, con, l, levels - 1),
                  refined_box_lower(obj, con, r, levels - 1));
}

}  // namespace detail

inline MinimizeResult minimize(const ObjectiveInclusion& obj, const ConstraintInclusion& con,
                               const Acceptance& acc, const Box& X,
                               const MinimizeOptions& opts = {}) {
  MinimizeResult res;
  res.representative_point = Vec::zero(X.n);

  std::priority_queue<detail::QueueEntry, std::vector<detail::QueueEntry>, detail::QueueOrder> queue;
  uint64_t seq = 0;
  double upper = kInf;
  double best_accepted_lb = kInf;
  bool have_accepted = false;
  bool have_witness = false;
  bool gap_stopped = false;
  double frontier_lb = kInf;
  Vec witness = Vec::zero(X.n);

  auto try_refine = [&](const Box& b) {
    if (!opts.refine) return;
    if (auto p = opts.refine(b)) {
      if (p->second < upper) {
        upper = p->second;
        witness = p->first;
        have_witness = true;
      }
    }
  };

  {
    ThreeValued v0 = con(X);
    if (v0 == ThreeValued::negative) {
      res.stats.boxes_pruned_constraint++;
      if (opts.trace) opts.trace(BoxEvent::pruned_constraint, X, kInf);
      res.feasible = false;
      return res;
    }
    Interval g0 = obj(X);
    queue.push({g0.lo, seq++, X});
    if (v0 == ThreeValued::positive) upper = std::min(upper, g0.hi);
    if (opts.trace) opts.trace(BoxEvent::inserted, X, g0.lo);
  }

  while (!queue.empty()) {
    if (res.stats.boxes_explored >= opts.max_boxes) {
      res.converged = false;
      break;
    }
    detail::QueueEntry entry = queue.top();
    queue.pop();
    res.stats.boxes_explored++;
    if (opts.trace) opts.trace(BoxEvent::explored, entry.box, entry.lb);

    if (opts.stop_predicate && upper < kInf && opts.stop_predicate(entry.lb, upper)) {
      gap_stopped = true;
      frontier_lb = entry.lb;
      break;
    }
    // Keep an incumbent flowing before anything reaches acceptance width.
    if (opts.refine &&
        (upper == kInf ? res.stats.boxes_explored % 8 == 1 : res.stats.boxes_explored % 128 == 1))
      try_refine(entry.box);

    if (acc(entry.box)) {
      if (!have_accepted) {
        have_accepted = true;
        best_accepted_lb = entry.lb;  // queue order: first accepted has the least lb
        res.representative_point = entry.box.mid();
      }
      res.stats.boxes_accepted++;
      res.accepted_boxes.push_back(entry.box);
      if (opts.trace) opts.trace(BoxEvent::accepted, entry.box, entry.lb);
      try_refine(entry.box);
      continue;
    }

    auto [left, right] = subdivide(entry.box);
    for (const Box& child : {left, right}) {
      ThreeValued verdict = con(child);
      if (verdict == ThreeValued::negative) {
        res.stats.boxes_pruned_constraint++;
        if (opts.trace) opts.trace(BoxEvent::pruned_constraint, child, kInf);
        continue;
      }
      Interval g = obj(child);
      if (g.is_empty() || g.lo == kInf) {
        res.stats.boxes_pruned_infinite++;
        res.stats.boxes_pruned_bound++;
        if (opts.trace) opts.trace(BoxEvent::pruned_bound, child, kInf);
        continue;
      }
      if (opts.bound_pruning && g.lo > upper) {
        res.stats.boxes_pruned_bound++;
        if (opts.trace) opts.trace(BoxEvent::pruned_bound, child, g.lo);
        continue;
      }
      queue.push({g.lo, seq++, child});
      if (verdict == ThreeValued::positive) upper = std::min(upper, g.hi);
      if (opts.trace) opts.trace(BoxEvent::inserted, child, g.lo);
    }
  }

  res.feasible = have_accepted || (gap_stopped && have_witness);
  if (!res.converged && !queue.empty())
    best_accepted_lb = std::min(best_accepted_lb, queue.top().lb);
  if (have_accepted && res.converged && !gap_stopped && opts.lower_refine_levels > 0) {
    int levels = opts.lower_refine_levels;
    while (levels > 0 && (res.accepted_boxes.size() << levels) > 400'000) --levels;
    if (levels > 0) {
      double lo = kInf;
      for (const Box& b : res.accepted_boxes)
        lo = std::min(lo, detail::refined_box_lower(obj.box_eval, con.verdict, b, levels));
      if (std::isfinite(lo)) best_accepted_lb = std::max(best_accepted_lb, lo);
    }
  }
  if (gap_stopped) {
    double lo = std::min(frontier_lb, best_accepted_lb);
    res.minimum_bound = Interval(lo, std::max(upper, lo));
    if (!have_accepted && have_witness) res.representative_point = witness;
  } else if (have_accepted || !res.converged) {
    double lo = best_accepted_lb;
    double hi = std::max(upper, lo);  // upper < lo would mean an unsound incumbent
    res.minimum_bound = Interval(lo, hi);
  }
  return res;
}

inline SolveResult solve(const ConstraintInclusion& con, const Acceptance& acc, const Box& X,
                         const SolveOptions& opts = {}) {
  SolveResult res;
  std::deque<Box> work;
  work.push_back(X);

  auto accept = [&](const Box& b) {
    res.stats.boxes_accepted++;
    if (opts.trace) opts.trace(BoxEvent::accepted, b, 0.0);
    if (opts.on_accept)
      opts.on_accept(b);
    else
      res.accepted_boxes.push_back(b);
  };

  while (!work.empty()) {
    if (res.stats.boxes_explored >= opts.max_boxes) {
      res.converged = false;
      break;
    }
    Box y = work.front();
    work.pop_front();
    res.stats.boxes_explored++;
    if (opts.trace) opts.trace(BoxEvent::explored, y, 0.0);

    ThreeValued verdict = con(y);
    if (verdict == ThreeValued::negative) {
      res.stats.boxes_pruned_constraint++;
      if (opts.trace) opts.trace(BoxEvent::pruned_constraint, y, 0.0);
      continue;
    }
    if (verdict == ThreeValued::positive) {
      accept(y);
      continue;
    }
    if (acc(y)) {
      if (con.accepts(y)) {
        accept(y);
      } else {
        res.stats.boxes_pruned_constraint++;
        if (opts.trace) opts.trace(BoxEvent::pruned_constraint, y, 0.0);
      }
      continue;
    }
    auto [left, right] = subdivide(y);
    if (opts.trace) {
      opts.trace(BoxEvent::inserted, left, 0.0);
      opts.trace(BoxEvent::inserted, right, 0.0);
    }
    work.push_back(left);
    work.push_back(right);
  }
  return res;
}

// --- constraint combinators --------------------------------------------------

// f(z) = 0. Negative iff 0 is excluded from the box enclosure; never positive
// on a box of positive width. The natural extension decides the cheap
// far-away case; boxes it cannot exclude get a second look through the
// mean-value form.
inline ConstraintInclusion eq_zero(const ImplicitField& f) {
  ConstraintInclusion c;
  c.verdict = [f](const Box& b) {
    Interval v = f.eval(b);
    if (v.is_empty() || !v.contains_zero()) return ThreeValued::negative;
    if (v.lo == 0.0 && v.hi == 0.0) return ThreeValued::positive;
    if (b.width() > 0.0 && !tight_eval(f, b).contains_zero()) return ThreeValued::negative;
    return ThreeValued::unknown;
  };
  return c;
}

// Same three-valued rule for an arbitrary box-to-interval enclosure.
inline ConstraintInclusion eq_zero_of(std::function<Interval(const Box&)> fn) {
  ConstraintInclusion c;
  c.verdict = [fn = std::move(fn)](const Box& b) {
    Interval v = fn(b);
    if (v.is_empty() || !v.contains_zero()) return ThreeValued::negative;
    if (v.lo == 0.0 && v.hi == 0.0) return ThreeValued::positive;
    return ThreeValued::unknown;
  };
  return c;
}

// ||z - center|| <= radius.
inline ConstraintInclusion ball(const Vec& center, double radius) {
  ConstraintInclusion c;
  c.verdict = [center, radius](const Box& b) {
    Interval r = iv_norm(b, center);
    if (r.hi <= radius) return ThreeValued::positive;
    if (r.lo > radius) return ThreeValued::negative;
    return ThreeValued::unknown;
  };
  return c;
}

inline ConstraintInclusion ball(const Vec& center, const Interval& radius) {
  ConstraintInclusion c;
  c.verdict = [center, radius](const Box& b) {
    Interval r = iv_norm(b, center);
    if (r.hi <= radius.lo) return ThreeValued::positive;
    if (r.lo > radius.hi) return ThreeValued::negative;
    return ThreeValued::unknown;
  };
  return c;
}

// sign * g(z) >= 0.
inline ConstraintInclusion halfspace_dot(const ImplicitField& g, int sign) {
  ConstraintInclusion c;
  c.verdict = [g, sign](const Box& b) {
    Interval v = g.eval(b);
    if (sign < 0) v = -v;
    if (v.lo >= 0.0) return ThreeValued::positive;
    if (v.hi < 0.0) return ThreeValued::negative;
    return ThreeValued::unknown;
  };
  return c;
}

inline ConstraintInclusion conj(std::vector<ConstraintInclusion> parts) {
  ConstraintInclusion c;
  auto shared = std::make_shared<std::vector<ConstraintInclusion>>(std::move(parts));
  c.verdict = [shared](const Box& b) {
    ThreeValued v = ThreeValued::positive;
    for (const auto& p : *shared) {
      v = conj3(v, p.verdict(b));
      if (v == ThreeValued::negative) break;
    }
    return v;
  };
  c.accepting = [shared](const Box& b) {
    for (const auto& p : *shared)
      if (!p.accepts(b)) return false;
    return true;
  };
  return c;
}

}  // namespace wost
