// Piecewise functions on [0,1] over the fixed basis {1/v, 1, v, v^2, sqrt(v)}.
// Every closed-form allocation and payment rule in this library is a
// PiecewiseFn; the basis is fixed so that serialized files stay stable.

#pragma once

#include <vector>

namespace dic {

// Coefficients of c_m1/v + c0 + c1*v + c2*v^2 + ch*sqrt(v).
struct BasisCoeffs {
    double c_m1 = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double ch = 0.0;
};

// Half-open segment [lo, hi); the last segment of a PiecewiseFn is closed.
struct Segment {
    double lo = 0.0;
    double hi = 1.0;
    BasisCoeffs c;
};

class PiecewiseFn {
public:
    // Validates the tiling invariants: first lo = 0, last hi = 1, consecutive
    // endpoints equal, lo < hi, and c_m1 != 0 only when lo > 0.
    // Throws std::invalid_argument on violation.
    explicit PiecewiseFn(std::vector<Segment> segments);

    static PiecewiseFn constant(double value);

    // Evaluates at v in [0,1]; a breakpoint belongs to the segment whose lo
    // equals it. Throws std::domain_error outside [0,1].
    double eval(double v) const;
    double operator()(double v) const { return eval(v); }

    const std::vector<Segment>& segments() const { return segments_; }

    // Exact integral over [0,1] (per-segment antiderivatives).
    double integral() const;

    std::vector<double> sample(const std::vector<double>& grid) const;

private:
    std::vector<Segment> segments_;
};

// r(v) = v - p(v); same breakpoints. Applying it twice returns the input.
PiecewiseFn reward_from_payment(const PiecewiseFn& payment);

// weight*a + (1-weight)*b on the common breakpoint refinement.
PiecewiseFn blend(const PiecewiseFn& a, const PiecewiseFn& b, double weight);

// G equidistant points {0, 1/(G-1), ..., 1}.
std::vector<double> uniform_grid(int points);

}  // namespace dic
