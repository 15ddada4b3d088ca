#include "stlreach/reach.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "stlreach/series.hpp"

namespace stlreach {

void StepControl::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw UsageError(std::string("step control: ") + name + " must be positive and finite");
        }
    };
    if (order < 1 || order > 20 || refine_order < 1 || refine_order > 20) {
        throw UsageError("step control: order and refine_order must lie in [1, 20]");
    }
    positive(h_init, "h_init");
    positive(h_min, "h_min");
    positive(h_max, "h_max");
    positive(lte_tol, "lte_tol");
    positive(extension_h, "extension_h");
    if (!(growth >= 1.0)) {
        throw UsageError("step control: growth must be >= 1");
    }
    if (h_min > h_max) {
        throw UsageError("step control: h_min exceeds h_max");
    }
}

ReachSet ReachSet::from_box(const IntervalBox& b) {
    ReachSet s;
    const std::size_t n = b.size();
    s.center = b.mid();
    s.basis.assign(n, std::vector<double>(n, 0.0));
    std::vector<Interval> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.basis[i][i] = 1.0;
        r[i] = b[i] - Interval(s.center[i]);
    }
    s.coeffs = IntervalBox(std::move(r));
    s.box = b;
    return s;
}

const TubeSegment& Tube::segment(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= segments.size()) {
        std::ostringstream msg;
        msg << "segment index " << index << " out of range (tube has " << segments.size() << " segments)";
        throw UsageError(msg.str());
    }
    return segments[static_cast<std::size_t>(index)];
}

std::vector<const TubeSegment*> Tube::segments_at(double t) const {
    std::vector<const TubeSegment*> out;
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const TubeSegment& s) { return v < s.span.start; });
    // `it` is the first segment starting after t; the previous one or two may contain t.
    for (auto k = it; k != segments.begin();) {
        --k;
        if (k->span.end < t) {
            break;
        }
        if (k->span.start <= t) {
            out.push_back(&*k);
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

namespace {

using Matrix = std::vector<std::vector<double>>;
using IMatrix = std::vector<std::vector<Interval>>;

constexpr int kMaxInflationRounds = 20;
constexpr double kInflationFactor = 1.1;
constexpr double kInflationAbs = 1e-10;

std::vector<Interval> rhs(const SystemModel& m, const std::vector<Interval>& y) {
    return m.field.eval<Interval>(y, m.disturbance_box.components());
}

IntervalBox to_box(std::vector<Interval> v) { return IntervalBox(std::move(v)); }

// coef[k][i] = k-th Taylor coefficient of component i of the solution through y0, k = 0..count.
template <class T>
std::vector<std::vector<T>> taylor_coefficients(const SystemModel& m, const std::vector<T>& y0, int count) {
    const std::size_t n = y0.size();
    std::vector<Series<T>> ys;
    ys.reserve(n);
    for (const auto& v : y0) {
        ys.emplace_back(v);
    }
    std::vector<Series<T>> ws;
    for (const auto& w : m.disturbance_box) {
        ws.emplace_back(T(w));
    }
    for (int k = 0; k < count; ++k) {
        const auto f = m.field.eval<Series<T>>(ys, ws);
        for (std::size_t i = 0; i < n; ++i) {
            ys[i].push_back(f[i].coef(static_cast<std::size_t>(k)) / T(static_cast<double>(k + 1)));
        }
    }
    std::vector<std::vector<T>> out(static_cast<std::size_t>(count) + 1, std::vector<T>(n));
    for (std::size_t k = 0; k <= static_cast<std::size_t>(count); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            out[k][i] = ys[i].coef(k);
        }
    }
    return out;
}

Interval horner(const std::vector<std::vector<Interval>>& coef, std::size_t i, const Interval& h) {
    Interval acc = coef.back()[i];
    for (std::size_t k = coef.size() - 1; k-- > 0;) {
        acc = acc * h + coef[k][i];
    }
    return acc;
}

Interval exact_span(double t0, double t1) {
    return Interval(rounding::sub_down(t1, t0), rounding::sub_up(t1, t0));
}

IMatrix mul(const IMatrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    IMatrix r(n, std::vector<Interval>(n, Interval(0.0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Interval acc(0.0);
            for (std::size_t k = 0; k < n; ++k) {
                acc += a[i][k] * Interval(b[k][j]);
            }
            r[i][j] = acc;
        }
    }
    return r;
}

IMatrix mul(const IMatrix& a, const IMatrix& b) {
    const std::size_t n = a.size();
    IMatrix r(n, std::vector<Interval>(n, Interval(0.0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Interval acc(0.0);
            for (std::size_t k = 0; k < n; ++k) {
                acc += a[i][k] * b[k][j];
            }
            r[i][j] = acc;
        }
    }
    return r;
}

std::vector<Interval> mul(const IMatrix& a, const std::vector<Interval>& x) {
    std::vector<Interval> r(a.size(), Interval(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < x.size(); ++k) {
            r[i] += a[i][k] * x[k];
        }
    }
    return r;
}

IMatrix to_interval(const Matrix& m) {
    IMatrix r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        r[i].assign(m[i].begin(), m[i].end());
    }
    return r;
}

Matrix identity(std::size_t n) {
    Matrix r(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        r[i][i] = 1.0;
    }
    return r;
}

// Orthogonal Q from a Householder QR of m with columns ordered by decreasing weight; R has a
// positive diagonal so that an already orthogonal input is reproduced.
Matrix orthogonal_basis(const Matrix& m, const std::vector<double>& weight) {
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> score(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += m[i][j] * m[i][j];
        }
        score[j] = std::sqrt(s) * weight[j];
    }
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    Matrix p(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            p[i][j] = m[i][perm[j]];
        }
    }
    Matrix q = identity(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double tail = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            tail += p[i][k] * p[i][k];
        }
        if (tail == 0.0) {
            continue;
        }
        const double norm = std::sqrt(tail + p[k][k] * p[k][k]);
        const double alpha = p[k][k] > 0 ? -norm : norm;
        std::vector<double> v(n, 0.0);
        v[k] = p[k][k] - alpha;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = p[i][k];
        }
        double vv = 0.0;
        for (double x : v) {
            vv += x * x;
        }
        // p <- H p, q <- q H with H = I - 2 v vᵀ / vᵀv
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) {
                s += v[i] * p[i][j];
            }
            s *= 2.0 / vv;
            for (std::size_t i = k; i < n; ++i) {
                p[i][j] -= s * v[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k; j < n; ++j) {
                s += q[i][j] * v[j];
            }
            s *= 2.0 / vv;
            for (std::size_t j = k; j < n; ++j) {
                q[i][j] -= s * v[j];
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (p[k][k] < 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                q[i][k] = -q[i][k];
            }
        }
    }
    return q;
}

// Interval matrix containing q⁻¹, or nullopt when q is too far from orthogonal.
std::optional<IMatrix> enclose_inverse(const Matrix& q) {
    const std::size_t n = q.size();
    Matrix c(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            c[i][j] = q[j][i];
        }
    }
    const IMatrix cq = mul(to_interval(c), q);
    double delta = 0.0;
    double cnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Interval row(0.0);
        Interval crow(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const Interval e = Interval(i == j ? 1.0 : 0.0) - cq[i][j];
            row += Interval(e.mag());
            crow += Interval(std::abs(c[i][j]));
        }
        delta = std::max(delta, row.hi());
        cnorm = std::max(cnorm, crow.hi());
    }
    if (!(delta < 0.5)) {
        return std::nullopt;
    }
    const double eps = (Interval(delta) * Interval(cnorm) / (Interval(1.0) - Interval(delta))).hi();
    IMatrix inv(n, std::vector<Interval>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv[i][j] = Interval(c[i][j]) + Interval(-eps, eps);
        }
    }
    return inv;
}

IntervalBox require_nonempty(IntervalBox b, const char* what) {
    if (b.is_empty()) {
        throw SoundnessViolation(std::string("empty intersection while computing ") + what);
    }
    return b;
}

}  // namespace

namespace {

bool finite(const IntervalBox& b) {
    for (const Interval& c : b) {
        if (!std::isfinite(c.lo()) || !std::isfinite(c.hi())) {
            return false;
        }
    }
    return true;
}

}  // namespace

IntervalBox picard_box(const SystemModel& model, const IntervalBox& start, const Interval& h) {
    if (start.size() != model.dim()) {
        throw UsageError("picard_box: start box dimension does not match the system");
    }
    if (start.is_empty()) {
        throw UsageError("picard_box: start box is empty");
    }
    if (!(h.hi() > 0.0) || h.lo() < 0.0) {
        throw UsageError("picard_box: step must be positive");
    }
    const Interval hr(0.0, h.hi());
    auto picard = [&](const IntervalBox& b) {
        const auto f = rhs(model, b.components());
        std::vector<Interval> r(start.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = start[i] + hr * f[i];
        }
        return to_box(std::move(r));
    };
    IntervalBox b = picard(start);
    for (int round = 0; round <= kMaxInflationRounds; ++round) {
        const IntervalBox b1 = picard(b);
        if (!finite(b1)) {
            break;
        }
        if (box_subset(b1, b)) {
            return b1;
        }
        IntervalBox grown = hull(b, b1);
        for (std::size_t i = 0; i < grown.size(); ++i) {
            grown[i] = inflate(grown[i], kInflationFactor, kInflationAbs);
        }
        b = std::move(grown);
    }
    std::ostringstream msg;
    msg << "a priori enclosure did not contract for step " << h.hi();
    throw StepTooLarge(msg.str());
}

IntervalBox picard_box(const SystemModel& model, const IntervalBox& start, double h) {
    return picard_box(model, start, Interval(h));
}

SetStepResult integrate_set(const SystemModel& model, const ReachSet& start, double t0, double t1, int order) {
    if (!(t1 > t0)) {
        throw UsageError("integrate_set: empty time span");
    }
    const std::size_t n = model.dim();
    if (start.dim() != n) {
        throw UsageError("integrate_set: state dimension does not match the system");
    }
    const Interval h = exact_span(t0, t1);
    const Interval hr(0.0, h.hi());
    const IntervalBox& y = start.box;
    const IntervalBox b = picard_box(model, y, h);

    SetStepResult out;
    if (!model.disturbance_is_point()) {
        // First-order enclosure, sound for any measurable disturbance with values in W.
        const auto fb = rhs(model, b.components());
        const auto fy = rhs(model, y.components());
        std::vector<Interval> end(n);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            end[i] = y[i] + h * fb[i];
            err = std::max(err, (h * fb[i]).width() - (h * fy[i]).width());
        }
        out.enclosure = b;
        out.end = ReachSet::from_box(require_nonempty(intersect(to_box(std::move(end)), b), "endpoint"));
        out.error_width = std::max(err, 0.0);
        return out;
    }

    const auto k = static_cast<std::size_t>(order);
    const auto cb = taylor_coefficients<Interval>(model, b.components(), order + 1);
    const Interval hk1 = pown(h, order + 1);
    const Interval hrk1 = pown(hr, order + 1);
    std::vector<Interval> rem(n);
    std::vector<Interval> rem_range(n);
    for (std::size_t i = 0; i < n; ++i) {
        rem[i] = cb[k + 1][i] * hk1;
        rem_range[i] = cb[k + 1][i] * hrk1;
        out.error_width = std::max(out.error_width, rem[i].width());
    }

    // Range over the whole step: Taylor polynomial on Y plus remainder, intersected with B.
    auto cy = taylor_coefficients<Interval>(model, y.components(), order);
    std::vector<Interval> range(n);
    for (std::size_t i = 0; i < n; ++i) {
        range[i] = horner(cy, i, hr) + rem_range[i];
    }
    out.enclosure = intersect(b, to_box(std::move(range)));
    if (out.enclosure.is_empty()) {
        out.enclosure = b;
    }

    // Point part through the center, Jacobian of the Taylor map over Y.
    std::vector<Interval> u(start.center.begin(), start.center.end());
    const auto cu = taylor_coefficients<Interval>(model, u, order);
    std::vector<Dual> yd;
    yd.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // The center may lie outside the (intersected) box; the mean-value form needs both.
        yd.push_back(Dual::variable(hull(y[i], u[i]), i, n));
    }
    const auto cd = taylor_coefficients<Dual>(model, yd, order);
    IMatrix jac(n, std::vector<Interval>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Interval acc = cd[k][i].grad(j);
            for (std::size_t kk = k; kk-- > 0;) {
                acc = acc * h + cd[kk][i].grad(j);
            }
            jac[i][j] = acc;
        }
    }

    std::vector<Interval> z(n);
    std::vector<double> u1(n);
    std::vector<Interval> z0(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = horner(cu, i, h) + rem[i];
        u1[i] = z[i].mid();
        z0[i] = z[i] - Interval(u1[i]);
    }
    const IMatrix ja = mul(jac, start.basis);
    const auto& r = start.coeffs.components();

    // Mean-value forms in the old basis and in plain coordinates.
    const auto jar = mul(ja, r);
    std::vector<Interval> dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        dy[i] = y[i] - Interval(start.center[i]);
    }
    const auto jdy = mul(jac, dy);
    std::vector<Interval> box_a(n);
    std::vector<Interval> box_b(n);
    for (std::size_t i = 0; i < n; ++i) {
        box_a[i] = z[i] + jar[i];
        box_b[i] = z[i] + jdy[i];
    }

    Matrix mid_ja(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            mid_ja[i][j] = ja[i][j].mid();
        }
    }
    std::vector<double> weight(n);
    for (std::size_t j = 0; j < n; ++j) {
        weight[j] = r[j].width();
    }
    Matrix q = orthogonal_basis(mid_ja, weight);
    auto qinv = enclose_inverse(q);
    if (!qinv) {
        q = identity(n);
        qinv = to_interval(q);
    }
    const IMatrix m = mul(*qinv, ja);
    const auto mr = mul(m, r);
    const auto qz0 = mul(*qinv, z0);
    std::vector<Interval> r1(n);
    for (std::size_t i = 0; i < n; ++i) {
        r1[i] = mr[i] + qz0[i];
    }
    const auto qr1 = mul(to_interval(q), r1);
    std::vector<Interval> box_c(n);
    for (std::size_t i = 0; i < n; ++i) {
        box_c[i] = Interval(u1[i]) + qr1[i];
    }

    IntervalBox endpoint = intersect(to_box(box_a), to_box(box_b));
    endpoint = intersect(endpoint, to_box(box_c));
    endpoint = require_nonempty(intersect(endpoint, out.enclosure), "endpoint");

    out.end.center = std::move(u1);
    out.end.basis = std::move(q);
    out.end.coeffs = to_box(std::move(r1));
    out.end.box = std::move(endpoint);
    return out;
}

StepResult integrate_step(const SystemModel& model, const IntervalBox& start, double h, int order) {
    if (!(h > 0.0)) {
        throw UsageError("integrate_step: h must be positive");
    }
    const SetStepResult r = integrate_set(model, ReachSet::from_box(start), 0.0, h, order);
    return {r.enclosure, r.end.box, r.error_width};
}

namespace {

void advance(const SystemModel& model, Tube& tube, ReachSet state, double final_time, const StepControl& ctrl) {
    double t = tube.final_time;
    double h = tube.next_step > 0.0 ? tube.next_step : ctrl.h_init;
    tube.clip_start = -1.0;
    while (t < final_time) {
        h = std::min(h, ctrl.h_max);
        const bool clipped = t + h > final_time;
        const double t1 = clipped ? final_time : t + h;
        if (clipped && tube.clip_start < 0.0) {
            tube.clip_start = t;
            tube.clip_step = h;
        }
        bool ok = t1 > t;
        SetStepResult res;
        if (ok) {
            try {
                res = integrate_set(model, state, t, t1, ctrl.order);
                ok = res.error_width <= ctrl.lte_tol;
            } catch (const StepTooLarge&) {
                ok = false;
            } catch (const EvaluationError&) {
                ok = false;
            }
        }
        if (!ok) {
            h = (t1 - t) / 2.0;
            if (!(h >= ctrl.h_min)) {
                tube.final_time = t;
                tube.next_step = ctrl.h_min;
                std::ostringstream msg;
                msg << "integration stalled at t = " << t << ": step fell below h_min = " << ctrl.h_min;
                throw IntegrationStalled(msg.str(), tube);
            }
            continue;
        }
        TubeSegment seg;
        seg.index = static_cast<int>(tube.segments.size());
        seg.span = {t, t1};
        seg.enclosure = res.enclosure;
        seg.endpoint = res.end.box;
        seg.end_state = res.end;
        tube.segments.push_back(std::move(seg));
        state = std::move(res.end);
        t = t1;
        if (res.error_width < ctrl.lte_tol / 4.0) {
            h = std::min(h * ctrl.growth, ctrl.h_max);
        }
    }
    tube.final_time = final_time;
    tube.next_step = h;
}

}  // namespace

Tube compute_tube_init(const SystemModel& model, const IntervalBox& y0, double final_time, const StepControl& ctrl) {
    ctrl.validate();
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw UsageError("compute_tube_init: final_time must be positive");
    }
    if (y0.size() != model.dim() || y0.is_empty()) {
        throw UsageError("compute_tube_init: initial box must be nonempty with the system dimension");
    }
    Tube tube;
    tube.initial_box = y0;
    tube.next_step = ctrl.h_init;
    advance(model, tube, ReachSet::from_box(y0), final_time, ctrl);
    return tube;
}

Tube complete_tube(const SystemModel& model, const Tube& tube, double new_final_time, const StepControl& ctrl) {
    ctrl.validate();
    if (!(new_final_time > tube.final_time)) {
        throw UsageError("complete_tube: new final time must exceed the current one");
    }
    Tube out = tube;
    if (out.clip_start >= 0.0) {
        while (!out.segments.empty() && out.segments.back().span.start >= out.clip_start) {
            out.segments.pop_back();
        }
        out.final_time = out.clip_start;
        out.next_step = out.clip_step;
    }
    ReachSet state = out.segments.empty() ? ReachSet::from_box(out.initial_box) : out.segments.back().end_state;
    advance(model, out, std::move(state), new_final_time, ctrl);
    return out;
}

Tube bisect_and_contract(const SystemModel& model, const Tube& tube, const MarkerSet& targets,
                         const StepControl& ctrl) {
    const MarkerSet wanted = targets.non_negative();
    for (int id : wanted) {
        tube.segment(id);
    }
    if (wanted.empty()) {
        return tube;
    }
    Tube out;
    out.initial_box = tube.initial_box;
    out.final_time = tube.final_time;
    out.next_step = tube.next_step;
    out.clip_start = tube.clip_start;
    out.clip_step = tube.clip_step;
    ReachSet state = ReachSet::from_box(tube.initial_box);
    bool propagate = false;
    auto push = [&](TimeInterval span, IntervalBox enclosure, ReachSet end) {
        TubeSegment seg;
        seg.index = static_cast<int>(out.segments.size());
        seg.span = span;
        seg.enclosure = std::move(enclosure);
        seg.endpoint = end.box;
        seg.end_state = std::move(end);
        out.segments.push_back(std::move(seg));
    };
    for (const TubeSegment& old : tube.segments) {
        const double t0 = old.span.start;
        const double t1 = old.span.end;
        const double mid = 0.5 * (t0 + t1);
        if (wanted.contains(old.index) && t0 < mid && mid < t1) {
            SetStepResult a = integrate_set(model, state, t0, mid, ctrl.refine_order);
            IntervalBox enc_a = require_nonempty(intersect(a.enclosure, old.enclosure), "refined enclosure");
            a.end.box = require_nonempty(intersect(a.end.box, enc_a), "refined endpoint");
            SetStepResult b = integrate_set(model, a.end, mid, t1, ctrl.refine_order);
            IntervalBox enc_b = require_nonempty(intersect(b.enclosure, old.enclosure), "refined enclosure");
            b.end.box = require_nonempty(intersect(intersect(b.end.box, enc_b), old.endpoint), "refined endpoint");
            propagate = b.end.box != old.endpoint;
            state = b.end;
            push({t0, mid}, std::move(enc_a), std::move(a.end));
            push({mid, t1}, std::move(enc_b), std::move(b.end));
            continue;
        }
        if (propagate) {
            try {
                SetStepResult r = integrate_set(model, state, t0, t1, ctrl.refine_order);
                IntervalBox enc = require_nonempty(intersect(r.enclosure, old.enclosure), "re-propagated enclosure");
                r.end.box =
                    require_nonempty(intersect(intersect(r.end.box, enc), old.endpoint), "re-propagated endpoint");
                propagate = r.end.box != old.endpoint;
                state = r.end;
                push(old.span, std::move(enc), std::move(r.end));
                continue;
            } catch (const StepTooLarge&) {
                propagate = false;
            } catch (const EvaluationError&) {
                propagate = false;
            }
        }
        state = old.end_state;
        push(old.span, old.enclosure, old.end_state);
    }
    // Refined segments past the clip point would be thrown away by the next extension; keep them
    // and let the extension continue from final_time instead.
    if (out.clip_start >= 0.0) {
        auto it = std::find_if(out.segments.begin(), out.segments.end(),
                               [&](const TubeSegment& s) { return s.span.start >= out.clip_start; });
        const auto first_old = std::find_if(tube.segments.begin(), tube.segments.end(),
                                            [&](const TubeSegment& s) { return s.span.start >= out.clip_start; });
        if (!std::equal(it, out.segments.end(), first_old, tube.segments.end(),
                        [](const TubeSegment& a, const TubeSegment& b) {
                            return a.span == b.span && a.enclosure == b.enclosure && a.endpoint == b.endpoint;
                        })) {
            out.clip_start = -1.0;
        }
    }
    return out;
}

std::vector<double> PiecewiseDisturbance::at(double t) const {
    if (values.empty()) {
        return {};
    }
    const double k = std::floor(t / period);
    const auto idx = k <= 0.0 ? std::size_t{0} : std::min(static_cast<std::size_t>(k), values.size() - 1);
    return values[idx];
}

Trajectory sample_trajectory(const SystemModel& model, std::span<const double> y0, const PiecewiseDisturbance& w,
                             double dt, double final_time) {
    if (!(dt > 0.0) || !(final_time >= 0.0)) {
        throw UsageError("sample_trajectory: dt must be positive and final_time non-negative");
    }
    if (y0.size() != model.dim()) {
        throw UsageError("sample_trajectory: initial state dimension does not match the system");
    }
    const std::size_t n = model.dim();
    auto f = [&](const std::vector<double>& y, const std::vector<double>& wv) { return model.field.eval<double>(y, wv); };
    const int substeps = std::max(1, static_cast<int>(std::ceil(dt / 1e-3 - 1e-9)));
    Trajectory traj;
    std::vector<double> y(y0.begin(), y0.end());
    traj.times.push_back(0.0);
    traj.states.push_back(y);
    const auto samples = static_cast<long>(std::ceil(final_time / dt - 1e-9));
    double t = 0.0;
    std::vector<double> tmp(n);
    for (long s = 1; s <= samples; ++s) {
        const double target = std::min(static_cast<double>(s) * dt, final_time);
        const double step = (target - t) / substeps;
        for (int j = 0; j < substeps; ++j) {
            const double ts = t + j * step;
            std::vector<double> wv = w.at(ts + 0.5 * step);
            if (wv.empty() && model.disturbance_box.size() != 0) {
                wv = model.disturbance_box.mid();
            }
            const auto k1 = f(y, wv);
            for (std::size_t i = 0; i < n; ++i) {
                tmp[i] = y[i] + 0.5 * step * k1[i];
            }
            const auto k2 = f(tmp, wv);
            for (std::size_t i = 0; i < n; ++i) {
                tmp[i] = y[i] + 0.5 * step * k2[i];
            }
            const auto k3 = f(tmp, wv);
            for (std::size_t i = 0; i < n; ++i) {
                tmp[i] = y[i] + step * k3[i];
            }
            const auto k4 = f(tmp, wv);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        t = target;
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

bool tube_contains(const Tube& tube, const Trajectory& traj, double tol) {
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double t = traj.times[s];
        if (t > tube.final_time) {
            continue;
        }
        for (const TubeSegment* seg : tube.segments_at(t)) {
            if (!seg->enclosure.contains(traj.states[s], tol)) {
                return false;
            }
        }
    }
    return true;
}

bool tube_well_formed(const Tube& tube) {
    double cursor = 0.0;
    for (std::size_t k = 0; k < tube.segments.size(); ++k) {
        const TubeSegment& s = tube.segments[k];
        if (s.index != static_cast<int>(k) || s.span.start != cursor || !(s.span.start < s.span.end)) {
            return false;
        }
        if (s.enclosure.is_empty() || !box_subset(s.endpoint, s.enclosure)) {
            return false;
        }
        cursor = s.span.end;
    }
    return cursor == tube.final_time;
}

}  // namespace stlreach
