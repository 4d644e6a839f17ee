#include "dic/piecewise.hpp"

#include <cmath>

#include "checks.hpp"
#include "dic/distribution.hpp"

using namespace dic;

int main() {
    // eval: linear payment from the uniform-prior example at the midpoint
    {
        Segment s{0.0, 1.0, {0.0, -1.0 / 9.0, 8.0 / 9.0, 0.0, 0.0}};
        PiecewiseFn f({s});
        checks::check_near(f.eval(0.5), 1.0 / 3.0, 1e-15, "eval linear 8v/9-1/9 at 0.5");
        checks::check_near(f.integral(), 1.0 / 3.0, 1e-15, "integral of linear payment");
    }
    // eval: sqrt basis
    {
        Segment s{0.0, 1.0, {0.0, 0.0, 0.0, 0.0, 1.0}};
        PiecewiseFn f({s});
        checks::check_near(f.eval(0.25), 0.5, 0.0, "sqrt(v) at 0.25 is exactly 0.5");
    }
    // breakpoint ownership and continuity across a continuous junction
    {
        std::vector<Segment> segs(2);
        segs[0] = {0.0, 0.5, {0.0, 0.0, 1.0, 0.0, 0.0}};   // v
        segs[1] = {0.5, 1.0, {0.0, 0.25, 0.0, 1.0, 0.0}};  // 0.25 + v^2
        PiecewiseFn f(std::move(segs));
        checks::check_near(f.eval(0.5), 0.5, 1e-12, "continuous breakpoint value");
        checks::check_near(f.eval(1.0), 1.25, 1e-15, "closed last segment at v=1");
    }
    // exactness of the polynomial part at dyadic rationals
    {
        Segment s{0.0, 1.0, {0.0, 0.0, 0.0, 0.75, 0.0}};
        PiecewiseFn f({s});
        bool exact = true;
        for (int i = 0; i <= 64; ++i) {
            const double v = i / 64.0;
            if (std::abs(f.eval(v) - 0.75 * v * v) > 1e-15) exact = false;
        }
        checks::check(exact, "c2*v^2 exact at dyadic rationals");
    }
    // domain errors and invariant violations
    {
        Segment s{0.0, 1.0, {0.0, 0.0, 1.0, 0.0, 0.0}};
        PiecewiseFn f({s});
        checks::check_throws([&] { f.eval(-0.1); }, "eval rejects v < 0");
        checks::check_throws([&] { f.eval(1.1); }, "eval rejects v > 1");
        checks::check_throws(
            [] {
                std::vector<Segment> bad(2);
                bad[0] = {0.0, 0.6, {}};
                bad[1] = {0.5, 1.0, {}};
                PiecewiseFn f2(std::move(bad));
            },
            "overlapping segments rejected");
        checks::check_throws(
            [] {
                Segment bad{0.0, 1.0, {1.0, 0.0, 0.0, 0.0, 0.0}};
                PiecewiseFn f2({bad});
            },
            "1/v with lo=0 rejected");
    }
    // reward_from_payment: p(v)=v gives r=0; p=0 gives r=v; involution
    {
        Segment id{0.0, 1.0, {0.0, 0.0, 1.0, 0.0, 0.0}};
        PiecewiseFn p({id});
        PiecewiseFn r = reward_from_payment(p);
        checks::check_near(r.eval(0.7), 0.0, 0.0, "p(v)=v has zero reward");
        PiecewiseFn zero = PiecewiseFn::constant(0.0);
        checks::check_near(reward_from_payment(zero).eval(0.7), 0.7, 0.0,
                           "p=0 gives full rebate r(v)=v");
        Segment ex{0.0, 1.0, {0.0, -1.0 / 9.0, 8.0 / 9.0, 0.0, 0.0}};
        PiecewiseFn pe({ex});
        checks::check_near(reward_from_payment(pe).eval(0.5), 0.5 - 1.0 / 3.0, 1e-15,
                           "reward of the example payment at 0.5");
        PiecewiseFn twice = reward_from_payment(reward_from_payment(pe));
        bool same = true;
        for (int i = 0; i <= 100; ++i) {
            const double v = i / 100.0;
            if (std::abs(twice.eval(v) - pe.eval(v)) > 1e-15) same = false;
        }
        checks::check(same, "reward_from_payment is an involution");
    }
    // blend on the common refinement
    {
        std::vector<Segment> a(2), b(1);
        a[0] = {0.0, 0.5, {0.0, 0.0, 0.0, 0.0, 0.0}};
        a[1] = {0.5, 1.0, {0.0, 1.0, 0.0, 0.0, 0.0}};
        b[0] = {0.0, 1.0, {0.0, 0.0, 1.0, 0.0, 0.0}};
        PiecewiseFn fa(std::move(a)), fb(std::move(b));
        PiecewiseFn m = blend(fa, fb, 0.25);
        checks::check_near(m.eval(0.8), 0.25 * 1.0 + 0.75 * 0.8, 1e-15, "blend value");
        checks::check(m.segments().size() == 2, "blend breakpoint union");
    }
    // uniform grid endpoints
    {
        auto g = uniform_grid(100);
        checks::check(g.front() == 0.0 && g.back() == 1.0 && g.size() == 100,
                      "uniform_grid includes both endpoints");
        checks::check_near(g[33], 1.0 / 3.0, 0.0, "1/3 is exactly on the 100-point grid");
    }
    // GridDistribution / MomentSet invariants
    {
        checks::check_throws(
            [] { GridDistribution(1, {{0.2}, {0.9}}, {0.5, 0.4}); },
            "weights summing to 0.9 rejected");
        checks::check_throws([] { GridDistribution(1, {{1.2}}, {1.0}); },
                             "coordinate outside [0,1] rejected");
        checks::check_throws([] { MomentSet(1, {0.5, 0.6}); }, "k2 > k1 rejected");
        checks::check_throws([] { MomentSet(1, {0.5, 0.2}); }, "k2 < k1^2 rejected");
        MomentSet ok(1, {0.5, 1.0 / 3.0});
        checks::check(ok.order() == 2, "uniform moment pair accepted");
    }
    return checks::finish("test_piecewise");
}
