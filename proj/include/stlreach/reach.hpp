#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stlreach/error.hpp"
#include "stlreach/interval.hpp"
#include "stlreach/system.hpp"
#include "stlreach/time_signal.hpp"

namespace stlreach {

struct StepControl {
    int order = 3;         // degree of the Taylor polynomial; the remainder term has degree order+1
    int refine_order = 3;  // order used by bisect_and_contract
    double h_init = 0.05;
    double h_min = 1e-6;
    double h_max = 0.5;
    double lte_tol = 1e-4;
    double growth = 1.5;
    double extension_h = 0.5;  // horizon extension used by the adaptive loop

    void validate() const;  // throws UsageError
};

// Reachable set at one time instant: {u + A r : r ∈ coeffs} ∩ box, A nearly orthogonal.
struct ReachSet {
    std::vector<double> center;
    std::vector<std::vector<double>> basis;  // basis[i][j], row-major
    IntervalBox coeffs;
    IntervalBox box;

    static ReachSet from_box(const IntervalBox& b);
    std::size_t dim() const noexcept { return box.size(); }
};

struct TubeSegment {
    int index = 0;
    TimeInterval span;
    IntervalBox enclosure;  // valid over the closed span
    IntervalBox endpoint;   // enclosure at span.end
    ReachSet end_state;     // set representation behind endpoint; seeds the next segment

    friend bool operator==(const TubeSegment& a, const TubeSegment& b) {
        return a.index == b.index && a.span == b.span && a.enclosure == b.enclosure && a.endpoint == b.endpoint;
    }
};

struct Tube {
    IntervalBox initial_box;
    std::vector<TubeSegment> segments;
    double final_time = 0.0;
    double next_step = 0.0;  // step proposal for continuing past final_time
    // First step that had to be shortened to land on final_time, as (start, unshortened proposal).
    // complete_tube redoes the stretch from there so chained extensions match a single one.
    double clip_start = -1.0;
    double clip_step = 0.0;

    std::size_t dim() const noexcept { return initial_box.size(); }
    // Segment with the given index (indices are consecutive from 0). Throws UsageError.
    const TubeSegment& segment(int index) const;
    // Segments whose closed span contains t.
    std::vector<const TubeSegment*> segments_at(double t) const;
};

// Step-size underflow. Carries everything computed before the failure.
class IntegrationStalled : public Error {
public:
    IntegrationStalled(const std::string& msg, Tube partial) : Error(msg), partial_(std::move(partial)) {}
    const Tube& partial_tube() const noexcept { return partial_; }

private:
    Tube partial_;
};

// A priori enclosure over [0, h]: returns B with start + [0,h]·f(B, W) ⊆ B.
// Throws StepTooLarge after 20 inflation rounds, EvaluationError on rhs singularities.
IntervalBox picard_box(const SystemModel& model, const IntervalBox& start, const Interval& h);
IntervalBox picard_box(const SystemModel& model, const IntervalBox& start, double h);

struct StepResult {
    IntervalBox enclosure;
    IntervalBox endpoint;
    double error_width = 0.0;  // max component width of the Taylor remainder
};

struct SetStepResult {
    IntervalBox enclosure;
    ReachSet end;
    double error_width = 0.0;
};

StepResult integrate_step(const SystemModel& model, const IntervalBox& start, double h, int order = 3);
// One validated step from t0 to t1 with h enclosed as the exact interval t1 - t0.
SetStepResult integrate_set(const SystemModel& model, const ReachSet& start, double t0, double t1, int order);

Tube compute_tube_init(const SystemModel& model, const IntervalBox& y0, double final_time, const StepControl& ctrl);
// Bisects every targeted segment (negative ids are ignored), contracts against the parent
// enclosures and re-propagates downstream while endpoints keep shrinking. Re-indexes.
Tube bisect_and_contract(const SystemModel& model, const Tube& tube, const MarkerSet& targets,
                         const StepControl& ctrl);
Tube complete_tube(const SystemModel& model, const Tube& tube, double new_final_time, const StepControl& ctrl);

// Piecewise-constant disturbance: values[k] applies on [k·period, (k+1)·period); the last value
// persists.
struct PiecewiseDisturbance {
    double period = 1.0;
    std::vector<std::vector<double>> values;

    std::vector<double> at(double t) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

// Non-validated RK4 with internal step at most 1e-3, sampled every dt up to final_time.
Trajectory sample_trajectory(const SystemModel& model, std::span<const double> y0, const PiecewiseDisturbance& w,
                             double dt, double final_time);

// Every sample inside every segment whose closed span contains its time (up to tol).
bool tube_contains(const Tube& tube, const Trajectory& traj, double tol = 1e-9);

// Structural checks: contiguous tiling of [0, final_time), consecutive indices, endpoint ⊆ enclosure.
bool tube_well_formed(const Tube& tube);

}  // namespace stlreach
