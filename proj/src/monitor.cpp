#include "stlreach/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stlreach/error.hpp"

namespace stlreach {

IntervalSignal eval_predicate(const Tube& tube, const Predicate& p) {
    if (p.region.size() != tube.dim()) {
        std::ostringstream msg;
        msg << "predicate '" << p.name << "' has dimension " << p.region.size() << " but the tube has " << tube.dim();
        throw UsageError(msg.str());
    }
    std::vector<SignalPiece> pieces;
    pieces.reserve(tube.segments.size());
    for (const TubeSegment& s : tube.segments) {
        BoolInterval v;
        if (box_interior_subset(s.enclosure, p.region)) {
            v = BoolInterval::True;
        } else if (!box_intersects(s.enclosure, p.region)) {
            v = BoolInterval::False;
        } else {
            v = BoolInterval::Unknown;
        }
        if (p.polarity == Polarity::Exclusion) {
            v = bool_not(v);
        }
        if (!pieces.empty() && pieces.back().value == v) {
            pieces.back().span.end = s.span.end;
            if (v == BoolInterval::Unknown) {
                pieces.back().markers.insert(s.index);
            }
            continue;
        }
        SignalPiece piece{s.span, v, {}};
        if (v == BoolInterval::Unknown) {
            piece.markers.insert(s.index);
        }
        pieces.push_back(std::move(piece));
    }
    return IntervalSignal(std::move(pieces));
}

namespace {

MarkerSet markers_over(const IntervalSignal& s, const TimeInterval& range) {
    MarkerSet m;
    for (const SignalPiece& p : s.pieces()) {
        if (!intersect(p.span, range).is_empty()) {
            m.merge(p.markers);
        }
    }
    return m;
}

}  // namespace

IntervalSignal until_signal(const IntervalSignal& s1, const IntervalSignal& s2, double a, double b) {
    if (!(0.0 <= a && a <= b)) {
        std::ostringstream msg;
        msg << "until_signal: bound [" << a << ", " << b << "] must satisfy 0 <= a <= b";
        throw UsageError(msg.str());
    }
    if (s1.domain_end() != s2.domain_end()) {
        throw UsageError("until_signal: operand domains differ");
    }
    const double domain = s1.domain_end();
    if (domain == 0.0) {
        return {};
    }
    const double padded = domain + b;
    const IntervalSignal p1 = pad_to(s1, padded);
    const IntervalSignal p2 = pad_to(s2, padded);
    const Decomposition d1 = decompose(p1);
    const Decomposition d2 = decompose(p2);

    IntervalSignal result = IntervalSignal::constant(padded, BoolInterval::False);
    auto add = [&](const UnitarySignal& left, const UnitarySignal& right, UnitaryKind kind, MarkerSet markers) {
        const TimeInterval both = intersect(left.span, right.span);
        const auto shifted = back_shift(both, a, b);
        if (!shifted) {
            return;
        }
        const TimeInterval span = intersect(*shifted, left.span);
        if (span.is_empty()) {
            return;
        }
        result = signal_or(result, to_signal({span, kind, std::move(markers)}, padded));
    };
    for (const auto& c1 : d1.certain) {
        for (const auto& c2 : d2.certain) {
            add(c1, c2, UnitaryKind::Certain, {});
        }
    }
    auto uncertain_pairs = [&](const std::vector<UnitarySignal>& rights) {
        // Pairs are split along the pieces of the φ2 run. Values are unchanged (the back-shift
        // distributes over the split), but each stretch only collects the markers of φ1 on
        // [span.start, both.end) and of its own φ2 piece; run-wide unions would drag in unrelated
        // markers, padding in particular.
        for (const auto& r1 : d1.relaxed) {
            for (const auto& c2 : rights) {
                for (const SignalPiece& piece : p2.pieces()) {
                    const TimeInterval sub = intersect(piece.span, c2.span);
                    if (sub.is_empty()) {
                        continue;
                    }
                    const TimeInterval both = intersect(r1.span, sub);
                    const auto shifted = back_shift(both, a, b);
                    if (!shifted) {
                        continue;
                    }
                    const TimeInterval span = intersect(*shifted, r1.span);
                    if (span.is_empty()) {
                        continue;
                    }
                    MarkerSet m = markers_over(p1, {span.start, both.end});
                    m.merge(piece.markers);
                    // Both operands certain where it matters: already covered by the certain family.
                    if (m.empty()) {
                        continue;
                    }
                    add(r1, {sub, c2.kind, piece.markers}, UnitaryKind::Uncertain, std::move(m));
                }
            }
        }
    };
    uncertain_pairs(d2.certain);
    uncertain_pairs(d2.uncertain);
    return truncate(result, domain);
}

namespace {

using LeafFn = std::function<IntervalSignal(const Formula&)>;

SatisfactionTree evaluate(const Formula& f, double need, const LeafFn& leaf, double base_end) {
    using K = Formula::Kind;
    SatisfactionTree node;
    node.formula = f;
    auto common = [](IntervalSignal& x, IntervalSignal& y) {
        const double d = std::min(x.domain_end(), y.domain_end());
        x = truncate(x, d);
        y = truncate(y, d);
    };
    switch (f.kind) {
        case K::Tautology:
            node.signal = IntervalSignal::constant(std::max(need, base_end), BoolInterval::True);
            break;
        case K::Pred: {
            IntervalSignal s = leaf(f);
            if (s.domain_end() < need) {
                s = pad_to(s, need);
            }
            node.signal = std::move(s);
            break;
        }
        case K::Not:
            node.children.push_back(evaluate(f.args[0], need, leaf, base_end));
            node.signal = signal_not(node.children[0].signal);
            break;
        case K::Or: {
            node.children.push_back(evaluate(f.args[0], need, leaf, base_end));
            node.children.push_back(evaluate(f.args[1], need, leaf, base_end));
            IntervalSignal x = node.children[0].signal;
            IntervalSignal y = node.children[1].signal;
            common(x, y);
            node.signal = signal_or(x, y);
            break;
        }
        case K::Until: {
            node.children.push_back(evaluate(f.args[0], need + f.hi, leaf, base_end));
            node.children.push_back(evaluate(f.args[1], need + f.hi, leaf, base_end));
            IntervalSignal x = node.children[0].signal;
            IntervalSignal y = node.children[1].signal;
            common(x, y);
            node.signal = until_signal(x, y, f.lo, f.hi);
            break;
        }
        default:
            throw UsageError("eval_formula: derived operator survived rewriting");
    }
    return node;
}

SatisfactionTree evaluate_root(const Formula& f, double horizon, const LeafFn& leaf, double base_end) {
    if (!(horizon > 0.0)) {
        throw UsageError("eval_formula: horizon must be positive");
    }
    const Formula core = is_core(f) ? f : rewrite_derived(f);
    SatisfactionTree tree = evaluate(core, horizon, leaf, base_end);
    tree.signal = truncate(tree.signal, horizon);
    return tree;
}

}  // namespace

SatisfactionTree eval_formula(const Tube& tube, const Formula& f, const PredicateTable& predicates, double horizon) {
    bind_predicates(f, predicates);
    std::map<std::string, IntervalSignal, std::less<>> cache;
    LeafFn leaf = [&](const Formula& g) {
        auto it = cache.find(g.name);
        if (it == cache.end()) {
            it = cache.emplace(g.name, eval_predicate(tube, predicates.find(g.name)->second)).first;
        }
        return it->second;
    };
    return evaluate_root(f, horizon, leaf, tube.final_time);
}

SatisfactionTree eval_formula(const std::map<std::string, IntervalSignal, std::less<>>& signals, const Formula& f,
                              double horizon) {
    double base = 0.0;
    for (const auto& [name, s] : signals) {
        base = std::max(base, s.domain_end());
    }
    LeafFn leaf = [&](const Formula& g) {
        auto it = signals.find(g.name);
        if (it == signals.end()) {
            std::ostringstream msg;
            msg << "unknown predicate '" << g.name << "' at " << g.pos.line << ":" << g.pos.column;
            throw BindingError(msg.str());
        }
        return it->second;
    };
    return evaluate_root(f, horizon, leaf, base);
}

void StopCriterion::validate() const {
    if (!(min_segment_width > 0.0) || max_iterations < 1 || !(max_final_time > 0.0)) {
        throw UsageError("stop criterion: min_segment_width, max_iterations and max_final_time must be positive");
    }
}

TrackerResult uncertainty_tracker(const SatisfactionTree& tree, const StopCriterion& stop, const Tube& tube,
                                  TimeInterval target) {
    TrackerResult out;
    for (const SignalPiece& p : tree.signal.pieces()) {
        if (p.value != BoolInterval::Unknown) {
            continue;
        }
        const bool hit = target.start == target.end ? p.span.contains(target.start)
                                                    : !intersect(p.span, target).is_empty();
        if (!hit) {
            continue;
        }
        for (int id : p.markers) {
            if (id >= 0 && static_cast<std::size_t>(id) < tube.segments.size() &&
                tube.segments[static_cast<std::size_t>(id)].span.length() < stop.min_segment_width) {
                out.pruned = true;
                continue;
            }
            out.marks.insert(id);
        }
    }
    return out;
}

std::string_view to_string(VerifyStatus s) noexcept {
    switch (s) {
        case VerifyStatus::Conclusive:
            return "conclusive";
        case VerifyStatus::StoppedByCriterion:
            return "stopped_by_criterion";
        case VerifyStatus::HorizonCapped:
            return "horizon_capped";
    }
    return "stopped_by_criterion";
}

VerificationResult adaptive_verify(const SystemModel& model, const IntervalBox& y0, const Formula& f,
                                   const PredicateTable& predicates, const StopCriterion& stop,
                                   const StepControl& ctrl, const VerifyOptions& options) {
    stop.validate();
    ctrl.validate();
    bind_predicates(f, predicates);
    const Formula core = rewrite_derived(f);
    const double hf = minimal_horizon(core);
    const double t_init = options.initial_final_time > 0.0 ? options.initial_final_time : hf + ctrl.extension_h;
    double window_end = options.window_end > 0.0 ? options.window_end : t_init - hf;
    if (!(window_end > 0.0)) {
        window_end = t_init;
    }
    const TimeInterval window{0.0, window_end};
    const TimeInterval target = options.mode == VerifyMode::Monitor ? window : TimeInterval{0.0, 0.0};

    VerificationResult result;
    result.window = window;
    Tube tube = compute_tube_init(model, y0, t_init, ctrl);
    result.initial_tube = tube;

    int iteration = 0;
    for (;;) {
        const SatisfactionTree tree = eval_formula(tube, core, predicates, tube.final_time);
        const IntervalSignal& root = tree.signal;
        ++iteration;
        const TrackerResult track = uncertainty_tracker(tree, stop, tube, target);

        IterationRecord rec;
        rec.iteration = iteration;
        rec.value = root.value_at(0.0);
        rec.uncertain_duration = root.duration(BoolInterval::Unknown, window.start, window.end);
        rec.final_time = tube.final_time;
        rec.segments = tube.segments.size();
        rec.marks = track.marks;
        result.history.push_back(rec);
        if (iteration == 1) {
            result.initial_signal = root;
        }
        result.verdict.signal = root;
        result.verdict.value = rec.value;
        result.verdict.markers = root.piece_at(0.0).markers;
        result.verdict.iterations = iteration;
        result.final_tube = tube;
        result.window_markers = {};
        for (const SignalPiece& p : root.pieces()) {
            if (p.value == BoolInterval::Unknown && !intersect(p.span, window).is_empty()) {
                result.window_markers.merge(p.markers);
            }
        }

        if (track.marks.empty()) {
            const bool unresolved = options.mode == VerifyMode::Monitor
                                        ? root.duration(BoolInterval::Unknown, window.start, window.end) > 0.0
                                        : rec.value == BoolInterval::Unknown;
            result.verdict.status = unresolved ? VerifyStatus::StoppedByCriterion : VerifyStatus::Conclusive;
            break;
        }
        if (iteration >= stop.max_iterations) {
            result.verdict.status = VerifyStatus::StoppedByCriterion;
            break;
        }
        bool progress = false;
        try {
            if (!track.marks.non_negative().empty()) {
                tube = bisect_and_contract(model, tube, track.marks, ctrl);
                progress = true;
            }
            if (track.marks.has_negative()) {
                const double extended = tube.final_time + ctrl.extension_h;
                if (extended <= stop.max_final_time) {
                    tube = complete_tube(model, tube, extended, ctrl);
                    progress = true;
                }
            }
        } catch (const IntegrationStalled& e) {
            result.verdict.status = VerifyStatus::StoppedByCriterion;
            throw VerificationStalled(e, result);
        }
        if (!progress) {
            result.verdict.status = VerifyStatus::HorizonCapped;
            break;
        }
    }
    return result;
}

}  // namespace stlreach
