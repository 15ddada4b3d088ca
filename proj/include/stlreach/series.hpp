#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "stlreach/interval.hpp"

namespace stlreach {

// Interval value with interval gradient (forward mode). An empty gradient stands for zero.
struct Dual {
    Interval v;
    std::vector<Interval> d;

    Dual() = default;
    Dual(double c) : v(c) {}
    Dual(Interval value) : v(value) {}
    Dual(Interval value, std::vector<Interval> grad) : v(value), d(std::move(grad)) {}

    static Dual variable(Interval value, std::size_t index, std::size_t n) {
        std::vector<Interval> g(n, Interval(0.0));
        g[index] = Interval(1.0);
        return {value, std::move(g)};
    }

    Interval grad(std::size_t i) const { return i < d.size() ? d[i] : Interval(0.0); }
};

namespace detail {

template <class F>
std::vector<Interval> zip_grad(const Dual& a, const Dual& b, F f) {
    const std::size_t n = std::max(a.d.size(), b.d.size());
    std::vector<Interval> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = f(a.grad(i), b.grad(i));
    }
    return g;
}

inline std::vector<Interval> scale_grad(const Dual& a, const Interval& s) {
    std::vector<Interval> g(a.d.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = a.d[i] * s;
    }
    return g;
}

}  // namespace detail

inline Dual operator-(const Dual& a) { return {-a.v, detail::scale_grad(a, Interval(-1.0))}; }
inline Dual operator+(const Dual& a, const Dual& b) {
    return {a.v + b.v, detail::zip_grad(a, b, [](const Interval& x, const Interval& y) { return x + y; })};
}
inline Dual operator-(const Dual& a, const Dual& b) {
    return {a.v - b.v, detail::zip_grad(a, b, [](const Interval& x, const Interval& y) { return x - y; })};
}
inline Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, detail::zip_grad(a, b, [&](const Interval& x, const Interval& y) { return x * b.v + a.v * y; })};
}
inline Dual operator/(const Dual& a, const Dual& b) {
    const Interval q = a.v / b.v;
    return {q, detail::zip_grad(a, b, [&](const Interval& x, const Interval& y) { return (x - q * y) / b.v; })};
}

inline Dual exp(const Dual& a) {
    const Interval e = exp(a.v);
    return {e, detail::scale_grad(a, e)};
}
inline Dual log(const Dual& a) { return {log(a.v), detail::scale_grad(a, Interval(1.0) / a.v)}; }
inline Dual sin(const Dual& a) { return {sin(a.v), detail::scale_grad(a, cos(a.v))}; }
inline Dual cos(const Dual& a) { return {cos(a.v), detail::scale_grad(a, -sin(a.v))}; }
inline Dual pown(const Dual& a, int n) {
    if (n == 0) {
        return Dual(1.0);
    }
    return {pown(a.v, n), detail::scale_grad(a, Interval(static_cast<double>(n)) * pown(a.v, n - 1))};
}

inline double pown(double x, int n) {
    double r = 1.0;
    const bool inv = n < 0;
    unsigned m = inv ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
    double b = x;
    while (m != 0) {
        if (m & 1u) {
            r *= b;
        }
        b *= b;
        m >>= 1u;
    }
    return inv ? 1.0 / r : r;
}

// Truncated Taylor series in t; coefficients beyond size() are zero. Binary operations produce
// max(size) coefficients.
template <class T>
class Series {
public:
    Series() = default;
    Series(double c) : c_{T(c)} {}
    Series(T c) : c_{std::move(c)} {}
    explicit Series(std::vector<T> c) : c_(std::move(c)) {}

    std::size_t size() const noexcept { return c_.size(); }
    T coef(std::size_t k) const { return k < c_.size() ? c_[k] : T(0.0); }
    T& operator[](std::size_t k) { return c_[k]; }
    const T& operator[](std::size_t k) const { return c_[k]; }
    void push_back(T v) { c_.push_back(std::move(v)); }
    const std::vector<T>& coefficients() const noexcept { return c_; }

private:
    std::vector<T> c_;
};

template <class T>
Series<T> operator-(const Series<T>& a) {
    std::vector<T> r(a.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = -a[k];
    }
    return Series<T>(std::move(r));
}

template <class T>
Series<T> operator+(const Series<T>& a, const Series<T>& b) {
    std::vector<T> r(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = k >= a.size() ? b[k] : k >= b.size() ? a[k] : a[k] + b[k];
    }
    return Series<T>(std::move(r));
}

template <class T>
Series<T> operator-(const Series<T>& a, const Series<T>& b) {
    std::vector<T> r(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = k >= a.size() ? -b[k] : k >= b.size() ? a[k] : a[k] - b[k];
    }
    return Series<T>(std::move(r));
}

template <class T>
Series<T> operator*(const Series<T>& a, const Series<T>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<T> r(n, T(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) {
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return Series<T>(std::move(r));
}

template <class T>
Series<T> operator/(const Series<T>& a, const Series<T>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<T> q(n);
    for (std::size_t k = 0; k < n; ++k) {
        T acc = a.coef(k);
        for (std::size_t j = 1; j <= k && j < b.size(); ++j) {
            acc = acc - b[j] * q[k - j];
        }
        q[k] = acc / b.coef(0);
    }
    return Series<T>(std::move(q));
}

template <class T>
Series<T> exp(const Series<T>& a) {
    const std::size_t n = a.size();
    std::vector<T> e(n);
    if (n == 0) {
        return Series<T>(exp(T(0.0)));
    }
    e[0] = exp(a[0]);
    for (std::size_t k = 1; k < n; ++k) {
        T acc(0.0);
        for (std::size_t j = 1; j <= k; ++j) {
            acc = acc + T(static_cast<double>(j)) * a[j] * e[k - j];
        }
        e[k] = acc / T(static_cast<double>(k));
    }
    return Series<T>(std::move(e));
}

template <class T>
Series<T> log(const Series<T>& a) {
    const std::size_t n = a.size();
    std::vector<T> l(n);
    if (n == 0) {
        return Series<T>(log(T(0.0)));
    }
    l[0] = log(a[0]);
    for (std::size_t k = 1; k < n; ++k) {
        T acc(0.0);
        for (std::size_t j = 1; j < k; ++j) {
            acc = acc + T(static_cast<double>(j)) * l[j] * a[k - j];
        }
        l[k] = (a[k] - acc / T(static_cast<double>(k))) / a[0];
    }
    return Series<T>(std::move(l));
}

template <class T>
std::pair<Series<T>, Series<T>> sin_cos(const Series<T>& a) {
    const std::size_t n = std::max<std::size_t>(a.size(), 1);
    std::vector<T> s(n);
    std::vector<T> c(n);
    s[0] = sin(a.coef(0));
    c[0] = cos(a.coef(0));
    for (std::size_t k = 1; k < n; ++k) {
        T as(0.0);
        T ac(0.0);
        for (std::size_t j = 1; j <= k; ++j) {
            const T ja = T(static_cast<double>(j)) * a[j];
            as = as + ja * c[k - j];
            ac = ac + ja * s[k - j];
        }
        s[k] = as / T(static_cast<double>(k));
        c[k] = -(ac / T(static_cast<double>(k)));
    }
    return {Series<T>(std::move(s)), Series<T>(std::move(c))};
}

template <class T>
Series<T> sin(const Series<T>& a) {
    return sin_cos(a).first;
}

template <class T>
Series<T> cos(const Series<T>& a) {
    return sin_cos(a).second;
}

template <class T>
Series<T> pown(const Series<T>& a, int n) {
    if (n < 0) {
        return Series<T>(1.0) / pown(a, -n);
    }
    Series<T> r(std::vector<T>(std::max<std::size_t>(a.size(), 1), T(0.0)));
    r[0] = T(1.0);
    Series<T> b = a;
    unsigned m = static_cast<unsigned>(n);
    while (m != 0) {
        if (m & 1u) {
            r = r * b;
        }
        m >>= 1u;
        if (m != 0) {
            b = b * b;
        }
    }
    return r;
}

}  // namespace stlreach
