#pragma once

#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <vector>

#include "stlreach/bool_interval.hpp"

namespace stlreach {

// Half-open time interval [start, end) in seconds.
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;

    bool is_empty() const noexcept { return !(start < end); }
    double length() const noexcept { return is_empty() ? 0.0 : end - start; }
    bool contains(double t) const noexcept { return start <= t && t < end; }

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

TimeInterval intersect(const TimeInterval& a, const TimeInterval& b) noexcept;

// [m - b, n - a) ∩ [0, ∞); nullopt when empty. Throws UsageError unless 0 <= a <= b.
std::optional<TimeInterval> back_shift(const TimeInterval& i, double a, double b);

std::ostream& operator<<(std::ostream& os, const TimeInterval& i);

// Sorted set of tube segment indices blamed for an unknown stretch. Negative values are
// the horizon sentinel: unknowns introduced by padding a too-short signal.
class MarkerSet {
public:
    static constexpr int kHorizon = -1;

    MarkerSet() = default;
    MarkerSet(std::initializer_list<int> ids);

    static MarkerSet horizon() { return MarkerSet{kHorizon}; }

    void insert(int id);
    void merge(const MarkerSet& other);

    bool empty() const noexcept { return ids_.empty(); }
    std::size_t size() const noexcept { return ids_.size(); }
    bool contains(int id) const noexcept;
    bool has_negative() const noexcept { return !ids_.empty() && ids_.front() < 0; }
    MarkerSet non_negative() const;

    auto begin() const noexcept { return ids_.begin(); }
    auto end() const noexcept { return ids_.end(); }
    const std::vector<int>& ids() const noexcept { return ids_; }

    friend bool operator==(const MarkerSet&, const MarkerSet&) = default;

private:
    std::vector<int> ids_;
};

MarkerSet set_union(const MarkerSet& a, const MarkerSet& b);
std::ostream& operator<<(std::ostream& os, const MarkerSet& m);

struct SignalPiece {
    TimeInterval span;
    BoolInterval value = BoolInterval::False;
    MarkerSet markers;

    friend bool operator==(const SignalPiece&, const SignalPiece&) = default;
};

// Piecewise-constant BoolInterval signal on [0, domain_end). Always canonical: pieces tile
// the domain, adjacent pieces differ in value or markers, Unknown pieces carry markers and
// crisp pieces carry none.
class IntervalSignal {
public:
    IntervalSignal() = default;
    // Validates the tiling and marker invariants (UsageError), then canonicalizes.
    explicit IntervalSignal(std::vector<SignalPiece> pieces);

    static IntervalSignal constant(double end, BoolInterval value, MarkerSet markers = {});

    double domain_end() const noexcept { return pieces_.empty() ? 0.0 : pieces_.back().span.end; }
    const std::vector<SignalPiece>& pieces() const noexcept { return pieces_; }

    // Throws UsageError when t is outside [0, domain_end).
    const SignalPiece& piece_at(double t) const;
    BoolInterval value_at(double t) const { return piece_at(t).value; }

    // Total length of the pieces with the given value inside [from, to).
    double duration(BoolInterval value, double from, double to) const;

    friend bool operator==(const IntervalSignal&, const IntervalSignal&) = default;

private:
    std::vector<SignalPiece> pieces_;
};

std::ostream& operator<<(std::ostream& os, const IntervalSignal& s);

enum class UnitaryKind {
    Certain,    // True on span, False elsewhere
    Uncertain,  // Unknown on span, False elsewhere
    Relaxed,    // True or Unknown on span; used for the left operand of Until
};

struct UnitarySignal {
    TimeInterval span;
    UnitaryKind kind = UnitaryKind::Certain;
    MarkerSet markers;

    friend bool operator==(const UnitarySignal&, const UnitarySignal&) = default;
};

struct Decomposition {
    std::vector<UnitarySignal> certain;    // maximal True runs
    std::vector<UnitarySignal> uncertain;  // maximal Unknown runs, markers unioned over the run
    std::vector<UnitarySignal> relaxed;    // maximal non-False runs, markers unioned over the run
};

Decomposition decompose(const IntervalSignal& s);

// The unitary signal as a full signal over [0, domain_end). Relaxed spans become Unknown.
IntervalSignal to_signal(const UnitarySignal& u, double domain_end);

// Pointwise ∨ on the common refinement. Marker rule per piece: an Unknown result keeps the
// markers of the Unknown side(s); True/False results carry none.
IntervalSignal signal_or(const IntervalSignal& a, const IntervalSignal& b);
// Pointwise ¬; Unknown pieces keep their markers.
IntervalSignal signal_not(const IntervalSignal& a);
// ¬(¬a ∨ ¬b).
IntervalSignal signal_and(const IntervalSignal& a, const IntervalSignal& b);

// Appends Unknown{-1} on [domain_end, new_end). Throws UsageError if new_end < domain_end.
IntervalSignal pad_to(const IntervalSignal& s, double new_end);
// Restricts to [0, new_end). Throws UsageError if new_end > domain_end.
IntervalSignal truncate(const IntervalSignal& s, double new_end);

}  // namespace stlreach
