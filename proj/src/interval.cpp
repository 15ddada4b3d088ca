#include "stlreach/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "stlreach/error.hpp"

namespace stlreach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude the fma-based error terms may themselves underflow.
constexpr double kTiny = 0x1p-960;

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

// libm transcendental results are within one ulp; widen by two to be safe.
double libm_down(double x) { return next_down(next_down(x)); }
double libm_up(double x) { return next_up(next_up(x)); }

// Exact error of a + b via TwoSum.
double two_sum_err(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

}  // namespace

namespace rounding {

double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) {
        return std::isnan(s) ? s : (s > 0 && std::isfinite(a) && std::isfinite(b) ? std::numeric_limits<double>::max() : s);
    }
    return two_sum_err(a, b, s) < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) {
        return std::isnan(s) ? s : (s < 0 && std::isfinite(a) && std::isfinite(b) ? -std::numeric_limits<double>::max() : s);
    }
    return two_sum_err(a, b, s) > 0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double p = a * b;
    if (!std::isfinite(p)) {
        return p;
    }
    if (std::abs(p) < kTiny) {
        return next_down(p);
    }
    return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double p = a * b;
    if (!std::isfinite(p)) {
        return p;
    }
    if (std::abs(p) < kTiny) {
        return next_up(p);
    }
    return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}

// a = q·b + r exactly, so a/b = q + r/b; the sign of r/b says which side q is on.
double div_down(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q) || a == 0.0) {
        return q;
    }
    if (std::abs(q) < kTiny || std::abs(a) < kTiny) {
        return next_down(q);
    }
    const double r = std::fma(-q, b, a);
    const bool exact_below = r != 0.0 && ((r < 0) != (b < 0));
    return exact_below ? next_down(q) : q;
}

double div_up(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q) || a == 0.0) {
        return q;
    }
    if (std::abs(q) < kTiny || std::abs(a) < kTiny) {
        return next_up(q);
    }
    const double r = std::fma(-q, b, a);
    const bool exact_above = r != 0.0 && ((r < 0) == (b < 0));
    return exact_above ? next_up(q) : q;
}

}  // namespace rounding

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        *this = empty();
    }
}

double Interval::width() const {
    if (is_empty()) {
        return 0.0;
    }
    return rounding::sub_up(hi_, lo_);
}

double Interval::mid() const {
    if (is_empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (lo_ == -kInf || hi_ == kInf) {
        if (lo_ == -kInf && hi_ == kInf) {
            return 0.0;
        }
        return lo_ == -kInf ? -std::numeric_limits<double>::max() : std::numeric_limits<double>::max();
    }
    const double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
}

double Interval::rad() const {
    if (is_empty()) {
        return 0.0;
    }
    const double m = mid();
    return std::max(rounding::sub_up(m, lo_), rounding::sub_up(hi_, m));
}

double Interval::mag() const {
    if (is_empty()) {
        return 0.0;
    }
    return std::max(std::abs(lo_), std::abs(hi_));
}

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

Interval operator-(const Interval& a) {
    if (a.is_empty()) {
        return a;
    }
    return {-a.hi(), -a.lo()};
}

Interval operator+(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    return {rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    return {rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo())};
}

Interval operator*(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    if (a.is_point() && b.is_point()) {
        return {rounding::mul_down(a.lo(), b.lo()), rounding::mul_up(a.lo(), b.lo())};
    }
    const double lo = std::min({rounding::mul_down(a.lo(), b.lo()), rounding::mul_down(a.lo(), b.hi()),
                                rounding::mul_down(a.hi(), b.lo()), rounding::mul_down(a.hi(), b.hi())});
    const double hi = std::max({rounding::mul_up(a.lo(), b.lo()), rounding::mul_up(a.lo(), b.hi()),
                                rounding::mul_up(a.hi(), b.lo()), rounding::mul_up(a.hi(), b.hi())});
    return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    if (b.contains_zero()) {
        throw EvaluationError("division by an interval containing zero");
    }
    const double lo = std::min({rounding::div_down(a.lo(), b.lo()), rounding::div_down(a.lo(), b.hi()),
                                rounding::div_down(a.hi(), b.lo()), rounding::div_down(a.hi(), b.hi())});
    const double hi = std::max({rounding::div_up(a.lo(), b.lo()), rounding::div_up(a.lo(), b.hi()),
                                rounding::div_up(a.hi(), b.lo()), rounding::div_up(a.hi(), b.hi())});
    return {lo, hi};
}

Interval sqr(const Interval& x) {
    if (x.is_empty()) {
        return x;
    }
    const double m = x.mag();
    const double lo_abs = x.contains_zero() ? 0.0 : std::min(std::abs(x.lo()), std::abs(x.hi()));
    return {rounding::mul_down(lo_abs, lo_abs), rounding::mul_up(m, m)};
}

Interval pown(const Interval& x, int n) {
    if (x.is_empty()) {
        return x;
    }
    if (n == 0) {
        return Interval(1.0);
    }
    if (n < 0) {
        return Interval(1.0) / pown(x, -n);
    }
    if (n == 1) {
        return x;
    }
    if (n % 2 == 0) {
        const Interval s = pown(x, n / 2);
        return sqr(s);
    }
    // Odd powers are monotone; bracket each endpoint separately.
    Interval lo_p(x.lo());
    Interval hi_p(x.hi());
    Interval lo_acc(1.0);
    Interval hi_acc(1.0);
    for (int i = 0; i < n; ++i) {
        lo_acc = lo_acc * lo_p;
        hi_acc = hi_acc * hi_p;
    }
    return {lo_acc.lo(), hi_acc.hi()};
}

Interval exp(const Interval& x) {
    if (x.is_empty()) {
        return x;
    }
    const double lo = x.lo() == 0.0 ? 1.0 : std::max(0.0, libm_down(std::exp(x.lo())));
    const double hi = x.hi() == 0.0 ? 1.0 : libm_up(std::exp(x.hi()));
    return {lo, hi};
}

Interval log(const Interval& x) {
    if (x.is_empty()) {
        return x;
    }
    if (!(x.lo() > 0.0)) {
        throw EvaluationError("logarithm of an interval not strictly positive");
    }
    const double lo = x.lo() == 1.0 ? 0.0 : libm_down(std::log(x.lo()));
    const double hi = x.hi() == 1.0 ? 0.0 : libm_up(std::log(x.hi()));
    return {lo, hi};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// True when some point c + 2kπ may lie in x. Errs toward true near the endpoints.
bool may_contain_phase(const Interval& x, double c) {
    const double tol = 1e-12 * std::max(1.0, x.mag());
    const double k = std::ceil((x.lo() - c - tol) / kTwoPi);
    return c + k * kTwoPi <= x.hi() + tol;
}

Interval periodic_extreme(const Interval& x, double (*f)(double), double max_phase, double min_phase) {
    if (x.is_empty()) {
        return x;
    }
    if (!std::isfinite(x.lo()) || !std::isfinite(x.hi()) || x.width() >= kTwoPi) {
        return {-1.0, 1.0};
    }
    const double a = f(x.lo());
    const double b = f(x.hi());
    double lo = libm_down(std::min(a, b));
    double hi = libm_up(std::max(a, b));
    if (may_contain_phase(x, max_phase)) {
        hi = 1.0;
    }
    if (may_contain_phase(x, min_phase)) {
        lo = -1.0;
    }
    return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

double sin_d(double v) { return std::sin(v); }
double cos_d(double v) { return std::cos(v); }

}  // namespace

Interval sin(const Interval& x) {
    if (x.is_point() && x.lo() == 0.0) {
        return Interval(0.0);
    }
    return periodic_extreme(x, sin_d, std::numbers::pi / 2, -std::numbers::pi / 2);
}

Interval cos(const Interval& x) {
    if (x.is_point() && x.lo() == 0.0) {
        return Interval(1.0);
    }
    return periodic_extreme(x, cos_d, 0.0, std::numbers::pi);
}

Interval intersect(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

Interval hull(const Interval& a, const Interval& b) {
    if (a.is_empty()) {
        return b;
    }
    if (b.is_empty()) {
        return a;
    }
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

bool subset(const Interval& a, const Interval& b) {
    if (a.is_empty()) {
        return true;
    }
    return !b.is_empty() && b.lo() <= a.lo() && a.hi() <= b.hi();
}

bool interior_subset(const Interval& a, const Interval& b) {
    if (a.is_empty()) {
        return true;
    }
    return !b.is_empty() && b.lo() < a.lo() && a.hi() < b.hi();
}

bool intersects(const Interval& a, const Interval& b) {
    return !a.is_empty() && !b.is_empty() && a.lo() <= b.hi() && b.lo() <= a.hi();
}

Interval inflate(const Interval& x, double factor, double abs) {
    if (x.is_empty()) {
        return x;
    }
    const double m = x.mid();
    const double r = rounding::add_up(rounding::mul_up(x.rad(), factor), abs);
    return hull(x, Interval(rounding::sub_down(m, r), rounding::add_up(m, r)));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
    if (x.is_empty()) {
        return os << "[empty]";
    }
    return os << '[' << x.lo() << ", " << x.hi() << ']';
}

IntervalBox IntervalBox::point(std::span<const double> x) {
    IntervalBox b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        b[i] = Interval(x[i]);
    }
    return b;
}

bool IntervalBox::is_empty() const noexcept {
    return std::any_of(dims_.begin(), dims_.end(), [](const Interval& i) { return i.is_empty(); });
}

double IntervalBox::max_width() const {
    double w = 0.0;
    for (const auto& i : dims_) {
        w = std::max(w, i.width());
    }
    return w;
}

std::vector<double> IntervalBox::mid() const {
    std::vector<double> m(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        m[i] = dims_[i].mid();
    }
    return m;
}

bool IntervalBox::contains(std::span<const double> x, double tol) const {
    if (x.size() != dims_.size()) {
        throw UsageError("point dimension does not match box dimension");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(dims_[i].lo() - tol <= x[i] && x[i] <= dims_[i].hi() + tol)) {
            return false;
        }
    }
    return true;
}

namespace {

void check_dims(const IntervalBox& a, const IntervalBox& b) {
    if (a.size() != b.size()) {
        throw UsageError("box dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

}  // namespace

bool box_subset(const IntervalBox& a, const IntervalBox& b) {
    check_dims(a, b);
    if (a.is_empty()) {
        return true;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!subset(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

bool box_interior_subset(const IntervalBox& a, const IntervalBox& b) {
    check_dims(a, b);
    if (a.is_empty()) {
        return true;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!interior_subset(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

bool box_intersects(const IntervalBox& a, const IntervalBox& b) {
    check_dims(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!intersects(a[i], b[i])) {
            return false;
        }
    }
    return !a.is_empty() && !b.is_empty();
}

IntervalBox intersect(const IntervalBox& a, const IntervalBox& b) {
    check_dims(a, b);
    IntervalBox r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = intersect(a[i], b[i]);
    }
    return r;
}

IntervalBox hull(const IntervalBox& a, const IntervalBox& b) {
    check_dims(a, b);
    IntervalBox r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = hull(a[i], b[i]);
    }
    return r;
}

std::ostream& operator<<(std::ostream& os, const IntervalBox& b) {
    os << '(';
    for (std::size_t i = 0; i < b.size(); ++i) {
        os << (i ? " x " : "") << b[i];
    }
    return os << ')';
}

}  // namespace stlreach
