#include "dic/single_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dic/errors.hpp"
#include "dic/lp.hpp"

namespace dic {

namespace {

double radicand(double t) { return ((t * t + 2.0) * t * t) - 6.0 * t + 3.0; }

double z_of_t(double t) {
    const double r = radicand(t);
    if (r < 0.0) return -1.0;
    return ((3.0 * t - 2.0) * t + t * std::sqrt(2.0 * r)) / (2.0 - t * t);
}

MuPrimeResult compute_mu_prime() {
    // First root of the radicand past t = 0 bounds the feasible component
    // attached to 0 (the radicand has an isolated zero at t = 1 that never
    // corresponds to a binding IC type, since nu_bar < 1).
    double lo = 0.5, hi = 0.9;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (radicand(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t1 = lo;

    const int kScan = 10001;
    int best = 0;
    double best_z = -1.0;
    for (int i = 0; i < kScan; ++i) {
        const double t = t1 * i / (kScan - 1);
        const double z = z_of_t(t);
        if (z > best_z) {
            best_z = z;
            best = i;
        }
    }
    double a = t1 * std::max(best - 1, 0) / (kScan - 1);
    double b = t1 * std::min(best + 1, kScan - 1) / (kScan - 1);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    while (b - a > 1e-10) {
        if (z_of_t(c) > z_of_t(d)) {
            b = d;
            d = c;
            c = b - gr * (b - a);
        } else {
            a = c;
            c = d;
            d = a + gr * (b - a);
        }
    }
    MuPrimeResult r;
    r.t_star = 0.5 * (a + b);
    r.z_prime = z_of_t(r.t_star);
    r.mu_prime = 2.0 * r.z_prime / (r.z_prime + 1.0);
    return r;
}

MechanismParams two_point_params(double mu) {
    MechanismParams p;
    p.mu = mu;
    p.z_star = mu / (2.0 - mu);
    p.lambda1 = 2.0 * (p.z_star / mu) * (p.z_star / mu);
    p.lambda0 = -p.z_star * p.z_star;
    p.nu_low = mu * mu;
    p.nu_circ = p.z_star;
    p.nu_star = mu * mu * (2.0 - mu) * (2.0 - mu);
    p.nu_bar = p.lambda1 + p.lambda0;
    return p;
}

void require_two_point_domain(double mu, const char* who) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error(std::string(who) + ": mu must lie in (0,1)");
    const double mp = mu_prime().mu_prime;
    if (mu < mp)
        throw std::domain_error(std::string(who) + ": mu=" + std::to_string(mu) +
                                " is below mu'=" + std::to_string(mp) +
                                "; use three_point_mechanism (mu in [0.107,0.25]) or the "
                                "approximation mechanisms");
}

PiecewiseFn two_point_allocation(const MechanismParams& p) {
    std::vector<Segment> segs(4);
    segs[0] = {0.0, p.nu_low, {0.0, 0.0, p.lambda1 / (2.0 * p.mu * p.mu), 0.0, 0.0}};
    segs[1] = {p.nu_low, p.nu_circ, {p.lambda0, p.lambda1, 0.0, 0.0, 0.0}};
    segs[2] = {p.nu_circ, p.nu_bar, {0.0, p.lambda1 - 2.0 * p.z_star, 1.0, 0.0, 0.0}};
    segs[3] = {p.nu_bar, 1.0, {0.0, 1.0, 0.0, 0.0, 0.0}};
    return PiecewiseFn(std::move(segs));
}

PiecewiseFn linear_payment(const MechanismParams& p) {
    Segment s{0.0, 1.0, {0.0, p.lambda0, p.lambda1, 0.0, 0.0}};
    return PiecewiseFn({s});
}

struct ThreePointParams {
    MechanismParams mp;
    double delta = 0.0;
};

ThreePointParams three_point_params(double mu, const char* who) {
    if (!(mu >= 0.107 && mu <= 0.25))
        throw std::domain_error(std::string(who) + ": mu=" + std::to_string(mu) +
                                " outside the validity window [0.107, 0.25]");
    ThreePointParams t;
    t.delta = mu / (3.0 - mu);
    const double sd = std::sqrt(t.delta);
    MechanismParams& p = t.mp;
    p.mu = mu;
    p.lambda0 = -t.delta * sd * (sd + 1.0);
    p.lambda1 = (sd + 1.0) * (sd + 1.0) / 3.0 - p.lambda0 / mu;
    p.z_star = mu / 3.0 * (sd + 1.0) * (sd + 1.0);  // worst-case payoff of the family
    p.nu_bar = p.lambda1 + p.lambda0;
    p.nu_star = 2.0 - p.lambda1 - 2.0 * std::sqrt(1.0 - p.nu_bar);
    const double tau = p.lambda1 - p.nu_star + p.nu_bar - 1.0;
    p.tau = tau;
    const double rad = p.lambda0 * p.lambda0 + tau * p.lambda0 * p.nu_star;
    if (rad < -1e-12)
        throw NumericError(std::string(who) + ": nu_circ radicand " + std::to_string(rad) +
                           " negative; parameter window violated");
    // Small root of tau*u^2 + 2*lambda0*u - lambda0*nu_star = 0 via the
    // product of roots (avoids cancellation as tau -> 0 near mu = 0.107).
    p.nu_circ = (-p.lambda0 * p.nu_star) / (-p.lambda0 + std::sqrt(std::max(rad, 0.0)));
    p.nu_low = -2.0 * p.lambda0 / p.lambda1;
    p.nu_prime = -(p.nu_low * p.nu_low) / p.lambda0;
    p.nu_dprime = -(p.nu_circ * p.nu_circ) / p.lambda0;
    return t;
}

PiecewiseFn three_point_allocation(const MechanismParams& p) {
    std::vector<Segment> segs(5);
    segs[0] = {0.0, p.nu_low, {0.0, 0.0, -p.lambda0 / (p.nu_low * p.nu_low), 0.0, 0.0}};
    segs[1] = {p.nu_low, p.nu_circ, {p.lambda0, p.lambda1, 0.0, 0.0, 0.0}};
    segs[2] = {p.nu_circ, p.nu_star,
               {0.0, p.lambda1 + 2.0 * p.lambda0 / p.nu_circ,
                -p.lambda0 / (p.nu_circ * p.nu_circ), 0.0, 0.0}};
    segs[3] = {p.nu_star, p.nu_bar, {0.0, 1.0 - p.nu_bar, 1.0, 0.0, 0.0}};
    segs[4] = {p.nu_bar, 1.0, {0.0, 1.0, 0.0, 0.0, 0.0}};
    return PiecewiseFn(std::move(segs));
}

}  // namespace

double z_star(double mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("z_star: mu must lie in (0,1)");
    return mu / (2.0 - mu);
}

const MuPrimeResult& mu_prime() {
    static const MuPrimeResult cached = compute_mu_prime();
    return cached;
}

double mu_prime_objective(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("mu_prime_objective: t must lie in [0,1]");
    if (radicand(t) < 0.0)
        throw std::domain_error("mu_prime_objective: radicand negative at t=" +
                                std::to_string(t));
    return z_of_t(t);
}

SingleAgentMechanism linear_mechanism(double mu) {
    require_two_point_domain(mu, "linear_mechanism");
    MechanismParams p = two_point_params(mu);
    return SingleAgentMechanism(two_point_allocation(p), linear_payment(p), p);
}

SingleAgentMechanism clipped_linear_mechanism(double mu) {
    require_two_point_domain(mu, "clipped_linear_mechanism");
    MechanismParams p = two_point_params(mu);
    const double cut = -p.lambda0 / p.lambda1;  // = mu^2 / 2
    std::vector<Segment> segs(2);
    segs[0] = {0.0, cut, {0.0, 0.0, 0.0, 0.0, 0.0}};
    segs[1] = {cut, 1.0, {0.0, p.lambda0, p.lambda1, 0.0, 0.0}};
    return SingleAgentMechanism(two_point_allocation(p), PiecewiseFn(std::move(segs)), p);
}

SingleAgentMechanism maximal_payment_mechanism(double mu) {
    require_two_point_domain(mu, "maximal_payment_mechanism");
    MechanismParams p = two_point_params(mu);
    const double z = p.z_star;
    std::vector<Segment> segs(5);
    segs[0] = {0.0, p.nu_low, {0.0, 0.0, 0.0, p.lambda1 / (2.0 * mu * mu), 0.0}};
    segs[1] = {p.nu_low, p.nu_circ, {0.0, p.lambda0, p.lambda1, 0.0, 0.0}};
    segs[2] = {p.nu_circ, p.nu_star, {0.0, 0.0, p.lambda1 - 2.0 * z, 1.0, 0.0}};
    segs[3] = {p.nu_star, p.nu_bar, {0.0, 0.0, -2.0 * z, 1.0, 2.0 * z}};
    segs[4] = {p.nu_bar, 1.0, {0.0, 0.0, 1.0 - p.lambda1, 0.0, 2.0 * z}};
    return SingleAgentMechanism(two_point_allocation(p), PiecewiseFn(std::move(segs)), p);
}

SingleAgentMechanism three_point_mechanism(double mu) {
    ThreePointParams t = three_point_params(mu, "three_point_mechanism");
    return SingleAgentMechanism(three_point_allocation(t.mp), linear_payment(t.mp), t.mp);
}

SingleAgentMechanism three_point_maximal(double mu) {
    ThreePointParams t = three_point_params(mu, "three_point_maximal");
    const MechanismParams& p = t.mp;
    const double np = *p.nu_prime, nd = *p.nu_dprime;
    std::vector<Segment> segs(7);
    segs[0] = {0.0, p.nu_low, {0.0, 0.0, 0.0, -p.lambda0 / (p.nu_low * p.nu_low), 0.0}};
    segs[1] = {p.nu_low, p.nu_circ, {0.0, p.lambda0, p.lambda1, 0.0, 0.0}};
    segs[2] = {p.nu_circ, p.nu_star,
               {0.0, 0.0, p.lambda1 + 2.0 * p.lambda0 / p.nu_circ,
                -p.lambda0 / (p.nu_circ * p.nu_circ), 0.0}};
    segs[3] = {p.nu_star, np, {0.0, 0.0, 1.0 - p.nu_bar, 1.0, 0.0}};
    segs[4] = {np, nd,
               {0.0, 0.0, 1.0 - p.nu_bar - p.lambda1, 1.0, 2.0 * std::sqrt(-p.lambda0)}};
    segs[5] = {nd, p.nu_bar, {0.0, p.nu_star, -p.nu_star, 1.0, 0.0}};
    segs[6] = {p.nu_bar, 1.0, {0.0, p.nu_star, p.nu_bar - p.nu_star, 0.0, 0.0}};
    return SingleAgentMechanism(three_point_allocation(p), PiecewiseFn(std::move(segs)), p);
}

SingleAgentMechanism blend_payment_rules(const SingleAgentMechanism& a,
                                         const SingleAgentMechanism& b, double weight) {
    const auto& sa = a.allocation().segments();
    const auto& sb = b.allocation().segments();
    bool same = sa.size() == sb.size();
    for (std::size_t i = 0; same && i < sa.size(); ++i)
        same = sa[i].lo == sb[i].lo && sa[i].hi == sb[i].hi && sa[i].c.c_m1 == sb[i].c.c_m1 &&
               sa[i].c.c0 == sb[i].c.c0 && sa[i].c.c1 == sb[i].c.c1 &&
               sa[i].c.c2 == sb[i].c.c2 && sa[i].c.ch == sb[i].c.ch;
    if (!same)
        throw std::invalid_argument("blend_payment_rules: allocations differ");
    return SingleAgentMechanism(a.allocation(), blend(a.payment(), b.payment(), weight),
                                a.params());
}

std::vector<double> recover_maximal_payment(const PiecewiseFn& allocation, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("recover_maximal_payment: grid too small");
    const std::vector<double> g = uniform_grid(grid_points);
    const std::vector<double> x = allocation.sample(g);
    for (int i = 0; i + 1 < grid_points; ++i)
        if (x[i + 1] < x[i] - 1e-12)
            throw std::invalid_argument(
                "recover_maximal_payment: allocation decreases between nu=" +
                std::to_string(g[i]) + " and nu=" + std::to_string(g[i + 1]));
    std::vector<double> p(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        double best = g[i] * (x[i] - x[0]) + g[0];
        for (int k = 1; k <= i; ++k)
            best = std::min(best, g[i] * (x[i] - x[k]) + g[k]);
        p[i] = best;
    }
    return p;
}

FrontierResult moment_frontier_lp(const MomentSet& moments, int grid_points) {
    if (moments.agents() != 1)
        throw std::domain_error("moment_frontier_lp: single-agent moment sets only");
    if (grid_points < 3) throw std::domain_error("moment_frontier_lp: grid must have >= 3 points");
    const int N = moments.order();
    const std::vector<double> g = uniform_grid(grid_points);
    const int n_lambda = N + 1;
    lp::LinearProgram prog(n_lambda + grid_points, lp::Sense::Maximize);
    prog.set_objective(0, 1.0);
    for (int i = 1; i <= N; ++i) prog.set_objective(i, moments.moments()[i - 1]);
    for (int i = 0; i < n_lambda; ++i) prog.set_bounds(i, -lp::kInf, lp::kInf);
    for (int j = 0; j < grid_points; ++j) prog.set_bounds(n_lambda + j, 0.0, 1.0);

    for (int iv = 0; iv < grid_points; ++iv) {
        const double nu = g[iv];
        for (int kh = 0; kh <= iv; ++kh) {
            std::vector<int> idx;
            std::vector<double> coef;
            double power = 1.0;
            for (int i = 0; i < n_lambda; ++i) {
                idx.push_back(i);
                coef.push_back(power);
                power *= nu;
            }
            if (kh != iv) {
                idx.push_back(n_lambda + iv);
                coef.push_back(-nu);
                idx.push_back(n_lambda + kh);
                coef.push_back(nu);
            }
            prog.add_row(lp::Relation::LessEq, g[kh], std::move(idx), std::move(coef));
        }
    }
    lp::LpSolution sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::Optimal)
        throw NumericError("moment_frontier_lp: LP " +
                           std::string(sol.status == lp::SolveStatus::Infeasible ? "infeasible"
                                                                                 : "unbounded") +
                           " (N=" + std::to_string(N) + ", G=" + std::to_string(grid_points) +
                           ")");
    FrontierResult out;
    out.lambda.assign(sol.primal.begin(), sol.primal.begin() + n_lambda);
    out.allocation.assign(sol.primal.begin() + n_lambda, sol.primal.end());
    out.grid = g;
    out.value = sol.objective;
    if (out.lambda[0] > 1e-9)
        throw NumericError("moment_frontier_lp: lambda_0 = " + std::to_string(out.lambda[0]) +
                           " violates the nonpositivity property");
    return out;
}

namespace {

double upper_bound_b(double mu) {
    const double delta = mu / (3.0 - mu);
    const double three_pt = mu / 3.0 * (std::sqrt(delta) + 1.0) * (std::sqrt(delta) + 1.0);
    return std::min(mu / (2.0 - mu), three_pt);
}

}  // namespace

PerfGuarantee approx_small_mu(double mu) {
    if (!(mu > 0.0 && mu < 0.107))
        throw std::domain_error("approx_small_mu: mu must lie in (0, 0.107)");
    static const SingleAgentMechanism frozen = three_point_maximal(0.107);
    const MechanismParams& p = frozen.params();
    PerfGuarantee out;
    out.mu = mu;
    out.z_approx = mu <= p.nu_low ? mu * frozen.allocation().eval(mu)
                                  : p.lambda1 * mu + p.lambda0;
    out.b = upper_bound_b(mu);
    out.rho = out.z_approx / out.b;
    out.c = out.b - out.z_approx;
    return out;
}

PerfGuarantee approx_mid_mu(double mu) {
    const double mp = mu_prime().mu_prime;
    if (!(mu > 0.25 && mu < mp))
        throw std::domain_error("approx_mid_mu: mu must lie in (0.25, mu')");
    static const MechanismParams frozen = two_point_params(mu_prime().mu_prime);
    PerfGuarantee out;
    out.mu = mu;
    out.z_approx = frozen.lambda1 * mu + frozen.lambda0;  // linear payment at the mean
    out.b = upper_bound_b(mu);
    out.rho = out.z_approx / out.b;
    out.c = out.b - out.z_approx;
    return out;
}

FeasibilityReport check_feasibility(const SingleAgentMechanism& m, int grid_points) {
    const std::vector<double> g = uniform_grid(grid_points);
    const std::vector<double> x = m.allocation().sample(g);
    const std::vector<double> p = m.payment().sample(g);
    FeasibilityReport r;
    r.min_ic_slack = lp::kInf;
    r.min_ir_slack = lp::kInf;
    r.alloc_min = lp::kInf;
    r.alloc_max = -lp::kInf;
    for (int i = 0; i < grid_points; ++i) {
        r.alloc_min = std::min(r.alloc_min, x[i]);
        r.alloc_max = std::max(r.alloc_max, x[i]);
        const double ir = g[i] * x[i] - p[i];
        if (ir < r.min_ir_slack) {
            r.min_ir_slack = ir;
            r.ir_arg_nu = g[i];
        }
        const double base = g[i] * x[i] - p[i];
        for (int k = 0; k < grid_points; ++k) {
            const double slack = base - g[i] * x[k] + g[k];
            if (slack < r.min_ic_slack) {
                r.min_ic_slack = slack;
                r.ic_arg_nu = g[i];
                r.ic_arg_nuhat = g[k];
            }
        }
    }
    return r;
}

}  // namespace dic
