#pragma once

// Dense-grid reference semantics used only by the tests. Deliberately naive.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlreach/formula.hpp"
#include "stlreach/reach.hpp"
#include "stlreach/time_signal.hpp"

namespace oracle {

using stlreach::BoolInterval;

// values[i] holds on the cell [t0 + i·dt, t0 + (i+1)·dt).
struct GridSignal {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<BoolInterval> values;

    std::size_t size() const noexcept { return values.size(); }
    // Unknown past the end (horizon padding).
    BoolInterval at(std::size_t i) const { return i < values.size() ? values[i] : BoolInterval::Unknown; }
};

using Env = std::map<std::string, GridSignal>;

// Pointwise recursive evaluation of every operator kind, derived ones included. Temporal bounds
// must be integer multiples of dt. Throws stlreach::UsageError on grid mismatches.
GridSignal grid_eval(const stlreach::Formula& f, const Env& env);

// Samples s at the cell midpoints t0 + (i + 1/2)·dt, i < n.
GridSignal sample(const stlreach::IntervalSignal& s, double dt, std::size_t n);

// Classical verdict at t = 0 for one sampled trace: each predicate is evaluated pointwise at the
// samples (closed regions) and the grid semantics is applied with the sample spacing as dt.
// nullopt when the trace is too short to decide.
std::optional<bool> containment_verdict(const stlreach::Trajectory& traj, const stlreach::Formula& f,
                                        const stlreach::PredicateTable& preds, double dt);

}  // namespace oracle
