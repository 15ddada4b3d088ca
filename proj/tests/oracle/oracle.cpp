#include "oracle.hpp"

#include <cmath>

#include "stlreach/error.hpp"

namespace oracle {

using stlreach::Formula;
using K = Formula::Kind;

namespace {

BoolInterval b_not(BoolInterval v) {
    switch (v) {
        case BoolInterval::True:
            return BoolInterval::False;
        case BoolInterval::False:
            return BoolInterval::True;
        default:
            return v;
    }
}

BoolInterval b_or(BoolInterval x, BoolInterval y) {
    if (x == BoolInterval::True || y == BoolInterval::True) {
        return BoolInterval::True;
    }
    if (x == BoolInterval::False && y == BoolInterval::False) {
        return BoolInterval::False;
    }
    return BoolInterval::Unknown;
}

BoolInterval b_and(BoolInterval x, BoolInterval y) { return b_not(b_or(b_not(x), b_not(y))); }

std::size_t steps(double bound, double dt) {
    const double k = bound / dt;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, k)) {
        throw stlreach::UsageError("oracle: temporal bound is not a multiple of dt");
    }
    return static_cast<std::size_t>(r);
}

// Three-valued until at cell i, cases taken literally:
//   1 if some t' in [t+a, t+b] has φ2 = 1 and φ1 = 1 on all of [t, t'];
//   0 if every t' in [t+a, t+b] has φ2 = 0 or some t'' in [t, t'] with φ1 = 0;
//   unknown otherwise.
BoolInterval until_at(const GridSignal& s1, const GridSignal& s2, std::size_t i, std::size_t ka, std::size_t kb) {
    bool some_true = false;
    bool all_false = true;
    bool left_all_true = true;   // φ1 = 1 on [i, j]
    bool left_some_false = false;  // φ1 = 0 somewhere on [i, j]
    for (std::size_t j = i; j <= i + kb; ++j) {
        const BoolInterval l = s1.at(j);
        left_all_true = left_all_true && l == BoolInterval::True;
        left_some_false = left_some_false || l == BoolInterval::False;
        if (j < i + ka) {
            continue;
        }
        const BoolInterval r = s2.at(j);
        if (r == BoolInterval::True && left_all_true) {
            some_true = true;
        }
        if (!(r == BoolInterval::False || left_some_false)) {
            all_false = false;
        }
    }
    if (some_true) {
        return BoolInterval::True;
    }
    return all_false ? BoolInterval::False : BoolInterval::Unknown;
}

// Finally over [a, b] directly: ∃ cell with 1 → 1; all 0 → 0.
BoolInterval finally_at(const GridSignal& s, std::size_t i, std::size_t ka, std::size_t kb) {
    bool all_false = true;
    for (std::size_t j = i + ka; j <= i + kb; ++j) {
        const BoolInterval v = s.at(j);
        if (v == BoolInterval::True) {
            return BoolInterval::True;
        }
        all_false = all_false && v == BoolInterval::False;
    }
    return all_false ? BoolInterval::False : BoolInterval::Unknown;
}

BoolInterval globally_at(const GridSignal& s, std::size_t i, std::size_t ka, std::size_t kb) {
    bool all_true = true;
    for (std::size_t j = i + ka; j <= i + kb; ++j) {
        const BoolInterval v = s.at(j);
        if (v == BoolInterval::False) {
            return BoolInterval::False;
        }
        all_true = all_true && v == BoolInterval::True;
    }
    return all_true ? BoolInterval::True : BoolInterval::Unknown;
}

const GridSignal& any_signal(const Env& env) {
    if (env.empty()) {
        throw stlreach::UsageError("oracle: empty environment");
    }
    const GridSignal& first = env.begin()->second;
    for (const auto& [name, s] : env) {
        if (s.t0 != first.t0 || s.dt != first.dt || s.size() != first.size()) {
            throw stlreach::UsageError("oracle: environment signals do not share a grid");
        }
    }
    return first;
}

GridSignal eval(const Formula& f, const Env& env, const GridSignal& shape) {
    GridSignal out{shape.t0, shape.dt, std::vector<BoolInterval>(shape.size())};
    const std::size_t n = shape.size();
    switch (f.kind) {
        case K::Tautology:
            std::fill(out.values.begin(), out.values.end(), BoolInterval::True);
            return out;
        case K::Pred: {
            auto it = env.find(f.name);
            if (it == env.end()) {
                throw stlreach::BindingError("oracle: unknown predicate " + f.name);
            }
            return it->second;
        }
        case K::Not: {
            const GridSignal a = eval(f.args[0], env, shape);
            for (std::size_t i = 0; i < n; ++i) {
                out.values[i] = b_not(a.values[i]);
            }
            return out;
        }
        case K::Or:
        case K::And:
        case K::Implies: {
            const GridSignal a = eval(f.args[0], env, shape);
            const GridSignal b = eval(f.args[1], env, shape);
            for (std::size_t i = 0; i < n; ++i) {
                const BoolInterval x = a.values[i];
                const BoolInterval y = b.values[i];
                out.values[i] = f.kind == K::Or ? b_or(x, y) : f.kind == K::And ? b_and(x, y) : b_or(b_not(x), y);
            }
            return out;
        }
        case K::Until: {
            const GridSignal a = eval(f.args[0], env, shape);
            const GridSignal b = eval(f.args[1], env, shape);
            const std::size_t ka = steps(f.lo, shape.dt);
            const std::size_t kb = steps(f.hi, shape.dt);
            for (std::size_t i = 0; i < n; ++i) {
                out.values[i] = until_at(a, b, i, ka, kb);
            }
            return out;
        }
        case K::Finally:
        case K::Globally: {
            const GridSignal a = eval(f.args[0], env, shape);
            const std::size_t ka = steps(f.lo, shape.dt);
            const std::size_t kb = steps(f.hi, shape.dt);
            for (std::size_t i = 0; i < n; ++i) {
                out.values[i] = f.kind == K::Finally ? finally_at(a, i, ka, kb) : globally_at(a, i, ka, kb);
            }
            return out;
        }
    }
    return out;
}

}  // namespace

// Predicates are unknown past their data while T stays true, so the environment is padded far
// enough for every window reachable from the first n cells before evaluating.
GridSignal grid_eval(const Formula& f, const Env& env) {
    const GridSignal& shape = any_signal(env);
    const std::size_t n = shape.size();
    const std::size_t extra = static_cast<std::size_t>(std::ceil(stlreach::minimal_horizon(f) / shape.dt)) + 1;
    Env padded = env;
    for (auto& [name, s] : padded) {
        s.values.resize(n + extra, BoolInterval::Unknown);
    }
    GridSignal out = eval(f, padded, padded.begin()->second);
    out.values.resize(n);
    return out;
}

GridSignal sample(const stlreach::IntervalSignal& s, double dt, std::size_t n) {
    GridSignal g{0.0, dt, {}};
    g.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.values.push_back(s.value_at((static_cast<double>(i) + 0.5) * dt));
    }
    return g;
}

std::optional<bool> containment_verdict(const stlreach::Trajectory& traj, const Formula& f,
                                        const stlreach::PredicateTable& preds, double dt) {
    Env env;
    for (const auto& [name, p] : preds) {
        GridSignal g{0.0, dt, {}};
        g.values.reserve(traj.states.size());
        for (const auto& x : traj.states) {
            bool inside = p.region.contains(x);
            if (p.polarity == stlreach::Polarity::Exclusion) {
                inside = !inside;
            }
            g.values.push_back(inside ? BoolInterval::True : BoolInterval::False);
        }
        env.emplace(name, std::move(g));
    }
    const GridSignal r = grid_eval(f, env);
    if (r.values.empty() || r.values[0] == BoolInterval::Unknown) {
        return std::nullopt;
    }
    return r.values[0] == BoolInterval::True;
}

}  // namespace oracle
