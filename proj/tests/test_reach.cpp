#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "stlreach/error.hpp"
#include "stlreach/reach.hpp"
#include "stlreach/system.hpp"

using namespace stlreach;

namespace {

bool tiles(const Tube& t) {
    return tube_well_formed(t) && !t.segments.empty() && t.segments.front().span.start == 0.0 &&
           t.segments.back().span.end == t.final_time;
}

// Every segment of `child` lies inside the enclosure of the parent segment covering its span.
bool refines(const Tube& child, const Tube& parent) {
    for (const TubeSegment& s : child.segments) {
        bool found = false;
        for (const TubeSegment& p : parent.segments) {
            if (p.span.start <= s.span.start && s.span.end <= p.span.end) {
                found = box_subset(s.enclosure, p.enclosure);
                break;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<double>> corner_and_random_points(const IntervalBox& b, int n, unsigned seed) {
    std::vector<std::vector<double>> pts;
    pts.push_back({b[0].lo(), b[1].lo()});
    pts.push_back({b[0].hi(), b[1].hi()});
    pts.push_back({b[0].lo(), b[1].hi()});
    pts.push_back({b[0].hi(), b[1].lo()});
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(pts.size()) < n) {
        pts.push_back({b[0].lo() + u(rng) * b[0].width(), b[1].lo() + u(rng) * b[1].width()});
    }
    return pts;
}

}  // namespace

TEST_CASE("vector field expressions") {
    const SystemModel m = make_system("m", {"a*x^2 - sin(y) + w", "exp(-x) / (1 + y^2)", "log(2 + x) ** 0.5"},
                                      {{"a", 3.0}}, IntervalBox{Interval(-0.1, 0.1)}, {"x", "y", "z"}, {"w"});
    const std::vector<double> y{0.5, 1.0, 0.0};
    const std::vector<double> w{0.1};
    const auto f = m.field.eval(y, w);
    CHECK(f[0] == doctest::Approx(3 * 0.25 - std::sin(1.0) + 0.1));
    CHECK(f[1] == doctest::Approx(std::exp(-0.5) / 2));
    CHECK(f[2] == doctest::Approx(std::sqrt(std::log(2.5))));
    const std::vector<Interval> yi{Interval(0.5), Interval(1.0), Interval(0.0)};
    const std::vector<Interval> wi{Interval(0.1)};
    const auto fi = m.field.eval(yi, wi);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(fi[i].contains(f[i]));
        CHECK(fi[i].width() < 1e-12);
    }
    CHECK(m.has_disturbance());
    CHECK_FALSE(m.disturbance_is_point());
    CHECK_THROWS_AS(make_system("bad", {"x +"}, {}, {}, {"x"}), ParseError);
    CHECK_THROWS_AS(make_system("bad", {"z"}, {}, {}, {"x"}), ParseError);
    CHECK_THROWS_AS(make_system("bad", {"x ^ y", "0"}, {}, {}, {"x", "y"}), ParseError);
    CHECK_THROWS_AS(m.field.eval(std::vector<double>{1.0}, w), UsageError);
    CHECK_THROWS_AS(builtin_system("lorenz"), UsageError);
    CHECK_THROWS_AS(builtin_system("vanderpol", {{"nu", 1.0}}), UsageError);
    CHECK(builtin_system("vanderpol").dim() == 2);
}

TEST_CASE("a priori enclosures") {
    const SystemModel still = make_system("still", {"0"});
    const IntervalBox b = picard_box(still, IntervalBox{Interval(1, 2)}, 1.0);
    CHECK(box_subset(IntervalBox{Interval(1, 2)}, b));
    const SystemModel drift = make_system("drift", {"1"});
    const IntervalBox d = picard_box(drift, IntervalBox{Interval(0)}, 0.5);
    CHECK(box_subset(IntervalBox{Interval(0, 0.5)}, d));
    const SystemModel blowup = make_system("blowup", {"y1^2"});
    CHECK_THROWS_AS(picard_box(blowup, IntervalBox{Interval(10)}, 1.0), StepTooLarge);

    // point Van der Pol start: RK4 samples over [0, 0.1] stay inside
    const SystemModel vdp = builtin_system("vanderpol");
    const std::vector<double> y0{2.0, 0.0};
    const IntervalBox vb = picard_box(vdp, IntervalBox::point(y0), 0.1);
    const Trajectory tr = sample_trajectory(vdp, y0, {}, 0.01, 0.1);
    for (const auto& s : tr.states) {
        CHECK(vb.contains(s));
    }
}

TEST_CASE("single steps") {
    const SystemModel decay = make_system("decay", {"-y1"});
    for (int order : {3, 4, 6}) {
        const StepResult r = integrate_step(decay, IntervalBox{Interval(1)}, 0.1, order);
        CHECK(r.endpoint[0].contains(std::exp(-0.1)));
        CHECK(r.endpoint[0].width() <= 1e-3);
        CHECK(box_subset(r.endpoint, r.enclosure));
    }
    const StepResult z = integrate_step(make_system("still", {"0"}), IntervalBox{Interval(1, 2)}, 0.3);
    CHECK(z.endpoint == IntervalBox{Interval(1, 2)});
    const StepResult one = integrate_step(make_system("drift", {"1"}), IntervalBox{Interval(0)}, 1.0);
    CHECK(one.endpoint[0].contains(1.0));
    CHECK_THROWS_AS(integrate_step(decay, IntervalBox{Interval(1)}, 0.0), UsageError);
}

TEST_CASE("initial tubes") {
    StepControl ctrl;
    SUBCASE("constant") {
        ctrl.h_init = 0.25;
        ctrl.h_max = 0.25;
        const Tube t = compute_tube_init(make_system("still", {"0"}), IntervalBox{Interval(1, 2)}, 1.0, ctrl);
        REQUIRE(t.segments.size() == 4);
        for (const auto& s : t.segments) {
            CHECK(s.enclosure == IntervalBox{Interval(1, 2)});
        }
        CHECK(tiles(t));
    }
    SUBCASE("decay") {
        const Tube t = compute_tube_init(make_system("decay", {"-y1"}), IntervalBox{Interval(1)}, 1.0, ctrl);
        CHECK(tiles(t));
        CHECK(t.segments.back().endpoint[0].contains(std::exp(-1.0)));
        CHECK(t.segments.back().endpoint[0].width() < 1e-4);
        CHECK(t.segments.size() > 1);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(compute_tube_init(make_system("still", {"0"}), IntervalBox{Interval(1)}, 0.0, ctrl), UsageError);
        ctrl.h_min = 1.0;
        CHECK_THROWS_AS(ctrl.validate(), UsageError);
    }
    SUBCASE("stall carries the partial tube") {
        ctrl.h_min = 1e-3;
        try {
            compute_tube_init(make_system("blowup", {"y1^2"}), IntervalBox{Interval(1)}, 2.0, ctrl);
            FAIL("expected a stall");
        } catch (const IntegrationStalled& e) {
            CHECK(e.partial_tube().final_time < 1.0);
            CHECK(tube_well_formed(e.partial_tube()));
        }
    }
}

TEST_CASE("bisection and contraction") {
    StepControl ctrl;
    ctrl.h_init = 0.25;
    ctrl.h_max = 0.25;
    SUBCASE("constant system splits a segment in two") {
        const Tube t = compute_tube_init(make_system("still", {"0"}), IntervalBox{Interval(1, 2)}, 1.0, ctrl);
        const Tube r = bisect_and_contract(make_system("still", {"0"}), t, MarkerSet{1}, ctrl);
        REQUIRE(r.segments.size() == 5);
        CHECK(r.segments[1].span == TimeInterval{0.25, 0.375});
        CHECK(r.segments[2].span == TimeInterval{0.375, 0.5});
        CHECK(r.segments[1].enclosure == IntervalBox{Interval(1, 2)});
        CHECK(r.segments[4].index == 4);
        CHECK(tiles(r));
        CHECK(bisect_and_contract(make_system("still", {"0"}), t, MarkerSet{}, ctrl).segments == t.segments);
        CHECK(bisect_and_contract(make_system("still", {"0"}), t, MarkerSet::horizon(), ctrl).segments == t.segments);
        CHECK_THROWS_AS(bisect_and_contract(make_system("still", {"0"}), t, MarkerSet{9}, ctrl), UsageError);
    }
    SUBCASE("decay, every segment targeted") {
        const SystemModel m = make_system("decay", {"-y1"});
        ctrl.h_max = 0.5;
        const Tube t = compute_tube_init(m, IntervalBox{Interval(0.9, 1.1)}, 2.0, ctrl);
        MarkerSet all;
        for (const auto& s : t.segments) all.insert(s.index);
        const Tube r = bisect_and_contract(m, t, all, ctrl);
        CHECK(r.segments.size() == 2 * t.segments.size());
        CHECK(refines(r, t));
        CHECK(tiles(r));
        double before = 0, after = 0;
        for (const auto& s : t.segments) before += s.enclosure.max_width() * s.span.length();
        for (const auto& s : r.segments) after += s.enclosure.max_width() * s.span.length();
        CHECK(after < before);
    }
}

TEST_CASE("tube extension is deterministic") {
    const SystemModel m = builtin_system("vanderpol");
    StepControl ctrl;
    ctrl.order = 5;
    ctrl.h_init = 0.1;
    const IntervalBox y0{Interval(2, 2.002), Interval(0, 0.002)};
    const Tube t = compute_tube_init(m, y0, 2.0, ctrl);
    const Tube once = complete_tube(m, t, 3.0, ctrl);
    const Tube twice = complete_tube(m, complete_tube(m, t, 2.5, ctrl), 3.0, ctrl);
    CHECK(once.final_time == 3.0);
    CHECK(once.segments == twice.segments);
    // only the segment clipped at the old final time is recomputed
    REQUIRE(t.clip_start >= 0.0);
    const auto kept = std::find_if(t.segments.begin(), t.segments.end(),
                                   [&](const TubeSegment& s) { return s.span.start >= t.clip_start; });
    CHECK(kept != t.segments.begin());
    CHECK(std::equal(t.segments.begin(), kept, once.segments.begin()));
    CHECK(tiles(once));
    const Tube still = complete_tube(make_system("still", {"0"}),
                                     compute_tube_init(make_system("still", {"0"}), IntervalBox{Interval(1, 2)}, 1.0, ctrl),
                                     2.0, ctrl);
    CHECK(still.final_time == 2.0);
    for (const auto& s : still.segments) CHECK(s.enclosure == IntervalBox{Interval(1, 2)});
}

TEST_CASE("trajectory sampling") {
    const Trajectory one = sample_trajectory(make_system("drift", {"1"}), std::vector<double>{0.0}, {}, 0.1, 1.0);
    REQUIRE(one.times.size() == 11);
    CHECK(std::abs(one.states.back()[0] - 1.0) < 1e-9);
    const Trajectory d = sample_trajectory(make_system("decay", {"-y1"}), std::vector<double>{1.0}, {}, 0.5, 1.0);
    CHECK(std::abs(d.states.back()[0] - std::exp(-1.0)) < 1e-6);
    const SystemModel pushed = make_system("pushed", {"w1"}, {}, IntervalBox{Interval(-1, 1)});
    PiecewiseDisturbance w{0.5, {{1.0}, {-1.0}}};
    const Trajectory p = sample_trajectory(pushed, std::vector<double>{0.0}, w, 0.5, 1.5);
    CHECK(p.states[1][0] == doctest::Approx(0.5));
    CHECK(p.states[3][0] == doctest::Approx(-0.5));
}

TEST_CASE("soundness on Van der Pol before and after refinement") {
    const SystemModel m = builtin_system("vanderpol");
    StepControl ctrl;
    ctrl.order = 5;
    ctrl.refine_order = 5;
    ctrl.h_init = 0.1;
    const IntervalBox y0{Interval(2, 2.002), Interval(0, 0.002)};
    const Tube t = compute_tube_init(m, y0, 10.0, ctrl);
    CHECK(tiles(t));
    MarkerSet some;
    for (int i = 0; i < static_cast<int>(t.segments.size()); i += 3) some.insert(i);
    const Tube r = bisect_and_contract(m, t, some, ctrl);
    CHECK(tiles(r));
    CHECK(refines(r, t));
    const Tube e = complete_tube(m, r, 11.0, ctrl);
    for (const auto& y : corner_and_random_points(y0, 30, 1)) {
        const Trajectory tr = sample_trajectory(m, y, {}, 0.01, 11.0);
        CHECK(tube_contains(t, tr));
        CHECK(tube_contains(r, tr));
        CHECK(tube_contains(e, tr));
    }
}

TEST_CASE("bounded disturbance") {
    const SystemModel m = make_system("forced", {"-y1 + w1"}, {}, IntervalBox{Interval(-0.1, 0.1)});
    StepControl ctrl;
    const Tube t = compute_tube_init(m, IntervalBox{Interval(1, 1.01)}, 2.0, ctrl);
    CHECK(tiles(t));
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (int k = 0; k < 20; ++k) {
        PiecewiseDisturbance w{0.1, {}};
        for (int j = 0; j < 20; ++j) w.values.push_back({u(rng)});
        const Trajectory tr = sample_trajectory(m, std::vector<double>{1.0 + 0.01 * (k % 2)}, w, 0.01, 2.0);
        CHECK(tube_contains(t, tr));
    }
}
