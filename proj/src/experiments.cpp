#include "dic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dic/adversary.hpp"
#include "dic/errors.hpp"
#include "dic/lp.hpp"

namespace dic {

NominalSolution nominal_optimal_lp(const GridDistribution& prior) {
    if (prior.dims() != 1)
        throw std::domain_error("nominal_optimal_lp: single-agent priors only");
    const int G = static_cast<int>(prior.support().size());
    NominalSolution out;
    out.grid.resize(G);
    for (int i = 0; i < G; ++i) out.grid[i] = prior.support()[i][0];
    // Variables: x_0..x_{G-1}, p_0..p_{G-1}.
    lp::LinearProgram prog(2 * G, lp::Sense::Maximize);
    for (int i = 0; i < G; ++i) {
        prog.set_bounds(i, 0.0, 1.0);
        prog.set_bounds(G + i, -4.0, 4.0);
        prog.set_objective(G + i, prior.weights()[i]);
    }
    for (int i = 0; i < G; ++i) {
        const double nu = out.grid[i];
        prog.add_row(lp::Relation::LessEq, 0.0, {G + i, i}, {1.0, -nu});  // IR
        for (int k = 0; k < G; ++k) {
            if (k == i) {
                prog.add_row(lp::Relation::LessEq, out.grid[k], {G + i}, {1.0});
                continue;
            }
            prog.add_row(lp::Relation::LessEq, out.grid[k], {G + i, i, k}, {1.0, -nu, nu});
        }
    }
    lp::LpSolution sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::Optimal)
        throw NumericError("nominal_optimal_lp: LP did not reach an optimum");
    out.x.assign(sol.primal.begin(), sol.primal.begin() + G);
    out.p.assign(sol.primal.begin() + G, sol.primal.end());
    out.value = sol.objective;
    return out;
}

PostedPrice posted_price_uniform() {
    PostedPrice best{0.0, 0.0};
    const std::vector<double> thresholds = uniform_grid(2001);
    for (double t : thresholds) {
        const double rev = t * (1.0 - t);
        if (rev > best.value) best = {t, rev};
    }
    return best;
}

UniformTable uniform_comparison() {
    UniformTable t;
    t.posted = posted_price_uniform().value;
    t.linear = linear_mechanism(0.5).payment().integral();
    t.clipped = clipped_linear_mechanism(0.5).payment().integral();
    t.maximal = maximal_payment_mechanism(0.5).payment().integral();
    t.nominal_grid = 100;
    const std::vector<double> g = uniform_grid(t.nominal_grid);
    std::vector<std::vector<double>> support(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) support[i] = {g[i]};
    GridDistribution uniform(1, support,
                             std::vector<double>(g.size(), 1.0 / t.nominal_grid));
    t.nominal = nominal_optimal_lp(uniform).value;
    return t;
}

std::vector<double> split_atom_on_grid(const std::vector<double>& grid, double atom,
                                       double mass) {
    std::vector<double> w(grid.size(), 0.0);
    if (grid.size() < 2) throw std::invalid_argument("split_atom_on_grid: grid too small");
    if (atom < grid.front() || atom > grid.back())
        throw std::invalid_argument("split_atom_on_grid: atom outside the grid span");
    auto hi = std::lower_bound(grid.begin(), grid.end(), atom);
    if (hi != grid.end() && *hi == atom) {
        w[static_cast<std::size_t>(hi - grid.begin())] = mass;
        return w;
    }
    const std::size_t ih = static_cast<std::size_t>(hi - grid.begin());
    const std::size_t il = ih - 1;
    const double lo = grid[il], up = grid[ih];
    const double t = (atom - lo) / (up - lo);
    w[il] = mass * (1.0 - t);
    w[ih] = mass * t;
    return w;
}

namespace {

std::optional<double> first_crossing(const std::vector<double>& eps,
                                     const std::vector<double>& diff) {
    for (std::size_t k = 0; k + 1 < diff.size(); ++k) {
        if (diff[k] < 0.0 && diff[k + 1] >= 0.0) {
            const double t = -diff[k] / (diff[k + 1] - diff[k]);
            return eps[k] + t * (eps[k + 1] - eps[k]);
        }
    }
    return std::nullopt;
}

}  // namespace

ContaminationRun contamination(int grid_points, int eps_steps) {
    if (grid_points < 10) throw std::domain_error("contamination: grid must have >= 10 points");
    if (eps_steps < 2) throw std::domain_error("contamination: need >= 2 eps steps");
    ContaminationRun run;
    run.grid = grid_points;
    const std::vector<double> g = uniform_grid(grid_points);
    std::vector<std::vector<double>> support(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) support[i] = {g[i]};

    const std::vector<double> wN(g.size(), 1.0 / grid_points);
    const GridDistribution worst = two_point_worst_case(0.5);
    std::vector<double> wW(g.size(), 0.0);
    for (std::size_t a = 0; a < worst.support().size(); ++a) {
        std::vector<double> part =
            split_atom_on_grid(g, worst.support()[a][0], worst.weights()[a]);
        for (std::size_t i = 0; i < g.size(); ++i) wW[i] += part[i];
    }

    const GridDistribution priorN(1, support, wN);
    const NominalSolution nominal = nominal_optimal_lp(priorN);
    const SingleAgentMechanism lin = linear_mechanism(0.5);
    const SingleAgentMechanism maxm = maximal_payment_mechanism(0.5);
    const std::vector<double> p_lin = lin.payment().sample(g);
    const std::vector<double> p_max = maxm.payment().sample(g);

    for (int k = 0; k < eps_steps; ++k) {
        const double eps = static_cast<double>(k) / (eps_steps - 1);
        run.eps.push_back(eps);
        std::vector<double> w(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            w[i] = (1.0 - eps) * wN[i] + eps * wW[i];
        GridDistribution prior(1, support, w);
        const double denom = nominal_optimal_lp(prior).value;
        double vn = 0.0, vl = 0.0, vm = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            vn += w[i] * nominal.p[i];
            vl += w[i] * p_lin[i];
            vm += w[i] * p_max[i];
        }
        run.payoff_nominal.push_back(vn);
        run.payoff_linear.push_back(vl);
        run.payoff_maximal.push_back(vm);
        run.payoff_optimal.push_back(denom);
        run.perf_nominal.push_back(vn / denom);
        run.perf_linear.push_back(vl / denom);
        run.perf_maximal.push_back(vm / denom);
    }
    std::vector<double> d1(run.eps.size()), d2(run.eps.size());
    for (std::size_t k = 0; k < run.eps.size(); ++k) {
        d1[k] = run.perf_maximal[k] - run.perf_nominal[k];
        d2[k] = run.perf_linear[k] - run.perf_nominal[k];
    }
    run.eps1 = first_crossing(run.eps, d1);
    run.eps2 = first_crossing(run.eps, d2);
    return run;
}

std::vector<GuaranteePoint> guarantee_curves(const std::vector<double>& mu_grid) {
    const double mp = mu_prime().mu_prime;
    std::vector<GuaranteePoint> out;
    out.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        PerfGuarantee pg;
        if (mu > 0.0 && mu < 0.107) pg = approx_small_mu(mu);
        else if (mu > 0.25 && mu < mp) pg = approx_mid_mu(mu);
        else
            throw std::domain_error("guarantee_curves: mu=" + std::to_string(mu) +
                                    " outside (0,0.107) u (0.25, mu')");
        out.push_back({pg.mu, pg.rho, pg.c, pg.b, pg.z_approx});
    }
    return out;
}

}  // namespace dic
