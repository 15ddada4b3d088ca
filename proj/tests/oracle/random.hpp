#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stlreach/formula.hpp"
#include "stlreach/time_signal.hpp"

namespace oracle {

// Breakpoints on multiples of `quantum`, at most max_pieces pieces before canonicalization.
// Unknown pieces get 1-2 markers from [0, 5].
inline stlreach::IntervalSignal random_signal(std::mt19937& rng, double domain, int max_pieces, double quantum) {
    using stlreach::BoolInterval;
    const int cells = static_cast<int>(domain / quantum);
    std::uniform_int_distribution<int> npieces(1, max_pieces);
    std::uniform_int_distribution<int> cut(1, cells - 1);
    std::uniform_int_distribution<int> value(0, 2);
    std::uniform_int_distribution<int> marker(0, 5);
    std::vector<int> cuts{0, cells};
    const int n = npieces(rng);
    for (int i = 1; i < n; ++i) {
        cuts.push_back(cut(rng));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<stlreach::SignalPiece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        stlreach::SignalPiece p;
        p.span = {cuts[i] * quantum, cuts[i + 1] * quantum};
        const int v = value(rng);
        p.value = v == 0 ? BoolInterval::False : v == 1 ? BoolInterval::True : BoolInterval::Unknown;
        if (p.value == BoolInterval::Unknown) {
            p.markers.insert(marker(rng));
            if (value(rng) == 0) {
                p.markers.insert(marker(rng));
            }
        }
        pieces.push_back(std::move(p));
    }
    return stlreach::IntervalSignal(std::move(pieces));
}

// Random formula over the given atoms using every operator kind. Temporal bounds are multiples of
// `quantum` with hi <= max_bound.
inline stlreach::Formula random_formula(std::mt19937& rng, const std::vector<std::string>& atoms, int depth,
                                        double quantum, int max_bound_steps) {
    using stlreach::Formula;
    std::uniform_int_distribution<std::size_t> pick_atom(0, atoms.size() - 1);
    if (depth == 0) {
        return std::uniform_int_distribution<int>(0, 9)(rng) == 0 ? Formula::tautology()
                                                                 : Formula::pred(atoms[pick_atom(rng)]);
    }
    std::uniform_int_distribution<int> op(0, 8);
    std::uniform_int_distribution<int> bound(0, max_bound_steps);
    auto sub = [&] { return random_formula(rng, atoms, depth - 1, quantum, max_bound_steps); };
    auto bounds = [&] {
        int x = bound(rng);
        int y = bound(rng);
        if (x > y) {
            std::swap(x, y);
        }
        return std::pair{x * quantum, y * quantum};
    };
    switch (op(rng)) {
        case 0:
            return Formula::pred(atoms[pick_atom(rng)]);
        case 1:
            return Formula::negation(sub());
        case 2:
            return Formula::disjunction(sub(), sub());
        case 3:
            return Formula::conjunction(sub(), sub());
        case 4:
            return Formula::implication(sub(), sub());
        case 5: {
            auto [lo, hi] = bounds();
            return Formula::until(lo, hi, sub(), sub());
        }
        case 6: {
            auto [lo, hi] = bounds();
            return Formula::finally(lo, hi, sub());
        }
        default: {
            auto [lo, hi] = bounds();
            return Formula::globally(lo, hi, sub());
        }
    }
}

}  // namespace oracle
