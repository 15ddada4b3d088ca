#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace stlreach {

// Rounded scalar operations. Each pair brackets the exact real result; results that are
// exactly representable stay exact (error-free transformations, no FPU mode switching).
namespace rounding {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
}  // namespace rounding

// Closed real interval [lo, hi]. The empty interval is represented as lo = +inf, hi = -inf.
class Interval {
public:
    constexpr Interval() noexcept = default;
    constexpr Interval(double v) noexcept : lo_(v), hi_(v) {}  // NOLINT(google-explicit-constructor)
    Interval(double lo, double hi);

    static constexpr Interval empty() noexcept {
        Interval r;
        r.lo_ = std::numeric_limits<double>::infinity();
        r.hi_ = -std::numeric_limits<double>::infinity();
        return r;
    }
    static constexpr Interval entire() noexcept {
        Interval r;
        r.lo_ = -std::numeric_limits<double>::infinity();
        r.hi_ = std::numeric_limits<double>::infinity();
        return r;
    }

    constexpr double lo() const noexcept { return lo_; }
    constexpr double hi() const noexcept { return hi_; }
    constexpr bool is_empty() const noexcept { return !(lo_ <= hi_); }
    constexpr bool is_point() const noexcept { return lo_ == hi_; }

    double width() const;  // upper bound of hi - lo; 0 for empty
    double mid() const;
    double rad() const;  // upper bound on max distance from mid()
    double mag() const;  // max |x|

    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains_zero() const noexcept { return contains(0.0); }

    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
    Interval& operator*=(const Interval& o);
    Interval& operator/=(const Interval& o);

    friend bool operator==(const Interval& a, const Interval& b) noexcept {
        return (a.is_empty() && b.is_empty()) || (a.lo_ == b.lo_ && a.hi_ == b.hi_);
    }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws EvaluationError when the divisor contains zero.
Interval operator/(const Interval& a, const Interval& b);

Interval sqr(const Interval& x);
Interval pown(const Interval& x, int n);
Interval exp(const Interval& x);
Interval log(const Interval& x);  // throws EvaluationError unless x > 0
Interval sin(const Interval& x);
Interval cos(const Interval& x);

Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
// a ⊆ b; the empty interval is a subset of everything.
bool subset(const Interval& a, const Interval& b);
// a lies in the open interior of b.
bool interior_subset(const Interval& a, const Interval& b);
// Closed intersection test; touching endpoints count.
bool intersects(const Interval& a, const Interval& b);
// Symmetric widening about the midpoint: mid ± (factor·rad + abs).
Interval inflate(const Interval& x, double factor, double abs);

std::ostream& operator<<(std::ostream& os, const Interval& x);

// Axis-aligned box. Empty iff any component is empty.
class IntervalBox {
public:
    IntervalBox() = default;
    explicit IntervalBox(std::size_t dim) : dims_(dim) {}
    explicit IntervalBox(std::vector<Interval> dims) : dims_(std::move(dims)) {}
    IntervalBox(std::initializer_list<Interval> dims) : dims_(dims) {}

    static IntervalBox point(std::span<const double> x);

    std::size_t size() const noexcept { return dims_.size(); }
    const Interval& operator[](std::size_t i) const { return dims_[i]; }
    Interval& operator[](std::size_t i) { return dims_[i]; }

    auto begin() const noexcept { return dims_.begin(); }
    auto end() const noexcept { return dims_.end(); }
    const std::vector<Interval>& components() const noexcept { return dims_; }

    bool is_empty() const noexcept;
    double max_width() const;
    std::vector<double> mid() const;
    bool contains(std::span<const double> x, double tol = 0.0) const;

    friend bool operator==(const IntervalBox&, const IntervalBox&) = default;

private:
    std::vector<Interval> dims_;
};

// The box operations below throw UsageError on dimension mismatch.
bool box_subset(const IntervalBox& a, const IntervalBox& b);
bool box_interior_subset(const IntervalBox& a, const IntervalBox& b);
bool box_intersects(const IntervalBox& a, const IntervalBox& b);
IntervalBox intersect(const IntervalBox& a, const IntervalBox& b);
IntervalBox hull(const IntervalBox& a, const IntervalBox& b);

std::ostream& operator<<(std::ostream& os, const IntervalBox& b);

}  // namespace stlreach
