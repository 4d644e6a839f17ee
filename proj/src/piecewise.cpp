#include "dic/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dic {

PiecewiseFn::PiecewiseFn(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty())
        throw std::invalid_argument("PiecewiseFn: no segments");
    if (segments_.front().lo != 0.0)
        throw std::invalid_argument("PiecewiseFn: first segment must start at 0");
    if (segments_.back().hi != 1.0)
        throw std::invalid_argument("PiecewiseFn: last segment must end at 1");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!(s.lo < s.hi))
            throw std::invalid_argument("PiecewiseFn: segment " + std::to_string(i) +
                                        " has lo >= hi");
        if (i + 1 < segments_.size() && segments_[i + 1].lo != s.hi)
            throw std::invalid_argument("PiecewiseFn: segments " + std::to_string(i) + "," +
                                        std::to_string(i + 1) + " do not tile (gap or overlap)");
        if (s.c.c_m1 != 0.0 && s.lo <= 0.0)
            throw std::invalid_argument("PiecewiseFn: 1/v term on a segment touching 0");
        for (double c : {s.c.c_m1, s.c.c0, s.c.c1, s.c.c2, s.c.ch})
            if (!std::isfinite(c))
                throw std::invalid_argument("PiecewiseFn: non-finite coefficient");
    }
}

PiecewiseFn PiecewiseFn::constant(double value) {
    Segment s;
    s.lo = 0.0;
    s.hi = 1.0;
    s.c.c0 = value;
    return PiecewiseFn({s});
}

double PiecewiseFn::eval(double v) const {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::domain_error("PiecewiseFn::eval: argument " + std::to_string(v) +
                                " outside [0,1]");
    // Last segment whose lo <= v; assigns a breakpoint to the segment owning it.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), v,
                               [](double x, const Segment& s) { return x < s.lo; });
    const Segment& s = *(it - 1);
    double out = s.c.c0 + v * (s.c.c1 + v * s.c.c2);
    if (s.c.c_m1 != 0.0) out += s.c.c_m1 / v;
    if (s.c.ch != 0.0) out += s.c.ch * std::sqrt(v);
    return out;
}

double PiecewiseFn::integral() const {
    double total = 0.0;
    for (const Segment& s : segments_) {
        double part = s.c.c0 * (s.hi - s.lo) + s.c.c1 / 2.0 * (s.hi * s.hi - s.lo * s.lo) +
                      s.c.c2 / 3.0 * (s.hi * s.hi * s.hi - s.lo * s.lo * s.lo) +
                      s.c.ch * (2.0 / 3.0) * (std::pow(s.hi, 1.5) - std::pow(s.lo, 1.5));
        if (s.c.c_m1 != 0.0) part += s.c.c_m1 * std::log(s.hi / s.lo);
        total += part;
    }
    return total;
}

std::vector<double> PiecewiseFn::sample(const std::vector<double>& grid) const {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = eval(grid[i]);
    return out;
}

PiecewiseFn reward_from_payment(const PiecewiseFn& payment) {
    std::vector<Segment> segs = payment.segments();
    for (Segment& s : segs) {
        s.c.c_m1 = -s.c.c_m1;
        s.c.c0 = -s.c.c0;
        s.c.c1 = 1.0 - s.c.c1;
        s.c.c2 = -s.c.c2;
        s.c.ch = -s.c.ch;
    }
    return PiecewiseFn(std::move(segs));
}

PiecewiseFn blend(const PiecewiseFn& a, const PiecewiseFn& b, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0))
        throw std::domain_error("blend: weight outside [0,1]");
    std::vector<double> cuts;
    for (const Segment& s : a.segments()) cuts.push_back(s.lo);
    for (const Segment& s : b.segments()) cuts.push_back(s.lo);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto coeffs_at = [](const PiecewiseFn& f, double lo) {
        for (const Segment& s : f.segments())
            if (s.lo <= lo && lo < s.hi) return s.c;
        return f.segments().back().c;
    };
    std::vector<Segment> segs;
    const double wb = 1.0 - weight;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        BasisCoeffs ca = coeffs_at(a, cuts[i]);
        BasisCoeffs cb = coeffs_at(b, cuts[i]);
        Segment s;
        s.lo = cuts[i];
        s.hi = cuts[i + 1];
        s.c.c_m1 = weight * ca.c_m1 + wb * cb.c_m1;
        s.c.c0 = weight * ca.c0 + wb * cb.c0;
        s.c.c1 = weight * ca.c1 + wb * cb.c1;
        s.c.c2 = weight * ca.c2 + wb * cb.c2;
        s.c.ch = weight * ca.ch + wb * cb.ch;
        segs.push_back(s);
    }
    return PiecewiseFn(std::move(segs));
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
    g.front() = 0.0;
    g.back() = 1.0;
    return g;
}

}  // namespace dic
