#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stlreach/formula.hpp"
#include "stlreach/reach.hpp"
#include "stlreach/time_signal.hpp"

namespace stlreach {

// One node per (core) formula node, with its satisfaction signal.
struct SatisfactionTree {
    Formula formula;
    IntervalSignal signal;
    std::vector<SatisfactionTree> children;
};

// Per segment: True if the enclosure lies in the interior of the region, False if it does not
// touch the (closed) region, Unknown{j} otherwise; Exclusion swaps True and False. Consecutive
// Unknown segments merge into one piece carrying all their indices.
IntervalSignal eval_predicate(const Tube& tube, const Predicate& p);

// φ1 U[a,b] φ2 from the unitary decompositions of both operands. Inputs are padded internally
// by b with Unknown{-1}; the result has the input domain.
IntervalSignal until_signal(const IntervalSignal& s1, const IntervalSignal& s2, double a, double b);

// Bottom-up evaluation. Derived operators are rewritten first. Every child is evaluated far enough
// for its parent (temporal operators add their upper bound) and padded with Unknown{-1} where the
// tube is too short; the root is truncated to [0, horizon).
SatisfactionTree eval_formula(const Tube& tube, const Formula& f, const PredicateTable& predicates, double horizon);
// Same over given predicate signals instead of a tube. T spans max(horizon, longest input).
SatisfactionTree eval_formula(const std::map<std::string, IntervalSignal, std::less<>>& signals, const Formula& f,
                              double horizon);

struct StopCriterion {
    double min_segment_width = 1e-3;
    int max_iterations = 20;
    double max_final_time = 1e9;

    void validate() const;  // throws UsageError
};

struct TrackerResult {
    MarkerSet marks;
    bool pruned = false;  // some index was dropped for being narrower than min_segment_width
};

// Markers of the root's Unknown pieces meeting the target: the piece at target.start when the
// target is a single instant (start == end), otherwise every piece overlapping [start, end).
TrackerResult uncertainty_tracker(const SatisfactionTree& tree, const StopCriterion& stop, const Tube& tube,
                                  TimeInterval target);

enum class VerifyStatus { Conclusive, StoppedByCriterion, HorizonCapped };
std::string_view to_string(VerifyStatus s) noexcept;

enum class VerifyMode { Verdict, Monitor };

struct Verdict {
    BoolInterval value = BoolInterval::Unknown;  // root at t = 0
    IntervalSignal signal;
    MarkerSet markers;  // residual markers at t = 0
    int iterations = 0;
    VerifyStatus status = VerifyStatus::StoppedByCriterion;
};

struct VerifyOptions {
    VerifyMode mode = VerifyMode::Verdict;
    // Length of the first tube. 0 selects minimal_horizon(f) + extension_h.
    double initial_final_time = 0.0;
    // Monitor window [0, window_end). 0 selects initial_final_time - minimal_horizon(f).
    double window_end = 0.0;
};

struct IterationRecord {
    int iteration = 0;
    BoolInterval value = BoolInterval::Unknown;
    double uncertain_duration = 0.0;  // Unknown length of the root on the report window
    double final_time = 0.0;
    std::size_t segments = 0;
    MarkerSet marks;
};

struct VerificationResult {
    Verdict verdict;
    TimeInterval window;  // report window; the tracker target in monitor mode
    MarkerSet window_markers;
    Tube initial_tube;
    Tube final_tube;
    IntervalSignal initial_signal;
    std::vector<IterationRecord> history;
};

// Integration stalled inside the loop; carries the iterations completed so far.
class VerificationStalled : public IntegrationStalled {
public:
    VerificationStalled(const IntegrationStalled& cause, VerificationResult partial)
        : IntegrationStalled(cause.what(), cause.partial_tube()), partial_(std::move(partial)) {}
    const VerificationResult& partial_result() const noexcept { return partial_; }

private:
    VerificationResult partial_;
};

// Adaptive refinement loop: evaluate, track, bisect marked segments, extend on -1, repeat.
VerificationResult adaptive_verify(const SystemModel& model, const IntervalBox& y0, const Formula& f,
                                   const PredicateTable& predicates, const StopCriterion& stop,
                                   const StepControl& ctrl, const VerifyOptions& options = {});

}  // namespace stlreach
