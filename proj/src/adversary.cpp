#include "dic/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dic/errors.hpp"
#include "dic/lp.hpp"

namespace dic {

GridDistribution two_point_worst_case(double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error("two_point_worst_case: mu must lie in (0,1)");
    const double nu = mu / (2.0 - mu);
    const double alpha = mu / 2.0;
    return GridDistribution(1, {{nu}, {1.0}}, {1.0 - alpha, alpha});
}

GridDistribution three_point_worst_case(double mu) {
    const double mu_max = (15.0 - 3.0 * std::sqrt(5.0)) / 10.0;
    if (!(mu > 0.0 && mu <= mu_max))
        throw std::domain_error("three_point_worst_case: mu=" + std::to_string(mu) +
                                " outside (0, " + std::to_string(mu_max) +
                                "] (nu_bar would exceed 1)");
    const double delta = mu / (3.0 - mu);
    const double sd = std::sqrt(delta);
    const double nu_low = delta * (sd + 1.0);
    const double nu_bar = sd * (sd + 1.0);
    return GridDistribution(1, {{nu_low}, {nu_bar}, {1.0}},
                            {mu / (3.0 * nu_low), mu / (3.0 * nu_bar), mu / 3.0});
}

WorstCaseResult worst_case_value(const std::vector<double>& grid,
                                 const std::vector<double>& payment,
                                 const MomentSet& moments) {
    if (grid.size() != payment.size() || grid.size() < 2)
        throw std::invalid_argument("worst_case_value: bad grid/payment");
    if (moments.agents() != 1)
        throw std::domain_error("worst_case_value: single-agent moment sets only");
    const int G = static_cast<int>(grid.size());
    const int N = moments.order();
    lp::LinearProgram prog(G, lp::Sense::Minimize);
    for (int j = 0; j < G; ++j) {
        prog.set_objective(j, payment[j]);
        prog.set_bounds(j, 0.0, lp::kInf);
    }
    {
        std::vector<int> idx(G);
        std::vector<double> ones(G, 1.0);
        for (int j = 0; j < G; ++j) idx[j] = j;
        prog.add_row(lp::Relation::Equal, 1.0, idx, ones);
        for (int i = 1; i <= N; ++i) {
            std::vector<double> pw(G);
            for (int j = 0; j < G; ++j) pw[j] = std::pow(grid[j], i);
            prog.add_row(lp::Relation::Equal, moments.moments()[i - 1], idx, pw);
        }
    }
    lp::LpSolution sol = lp::solve(prog);
    if (sol.status == lp::SolveStatus::Infeasible)
        throw std::domain_error("worst_case_value: moments not attainable on this grid");
    if (sol.status != lp::SolveStatus::Optimal)
        throw NumericError("worst_case_value: LP did not reach an optimum");
    std::vector<std::vector<double>> support;
    std::vector<double> weights;
    double total = 0.0;
    for (int j = 0; j < G; ++j) {
        if (sol.primal[j] > 1e-12) {
            support.push_back({grid[j]});
            weights.push_back(sol.primal[j]);
            total += sol.primal[j];
        }
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw NumericError("worst_case_value: weight mass " + std::to_string(total));
    for (double& w : weights) w /= total;
    return {sol.objective, GridDistribution(1, std::move(support), std::move(weights))};
}

double convex_envelope_value(const std::vector<double>& grid,
                             const std::vector<double>& payment, double mu) {
    if (grid.size() != payment.size() || grid.size() < 2)
        throw std::invalid_argument("convex_envelope_value: bad grid/payment");
    if (!(mu >= 0.0 && mu <= 1.0))
        throw std::domain_error("convex_envelope_value: mu must lie in [0,1]");
    // Lower hull scan over the (sorted) grid points.
    std::vector<int> order(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return grid[a] < grid[b]; });
    std::vector<std::pair<double, double>> hull;
    for (int oi : order) {
        const std::pair<double, double> pt{grid[oi], payment[oi]};
        if (!hull.empty() && hull.back().first == pt.first) {
            if (pt.second < hull.back().second) hull.back() = pt;
            continue;
        }
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            if ((b.second - a.second) * (pt.first - a.first) >=
                (pt.second - a.second) * (b.first - a.first))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    if (mu <= hull.front().first) return hull.front().second;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        if (mu <= hull[i + 1].first) {
            const double t = (mu - hull[i].first) / (hull[i + 1].first - hull[i].first);
            return hull[i].second + t * (hull[i + 1].second - hull[i].second);
        }
    }
    return hull.back().second;
}

namespace {

// Positive root of r*u^2 + (2r+3-2mu)*u - mu*(r+1/r+2) = 0. The constant term
// is negative for mu in (0,1), so exactly one nonnegative root exists.
double nu_star_of_r(double r, double mu) {
    const double a = r;
    const double b = 2.0 * r + 3.0 - 2.0 * mu;
    const double c = -mu * (r + 1.0 / r + 2.0);
    const double disc = b * b - 4.0 * a * c;
    return (-b + std::sqrt(disc)) / (2.0 * a);
}

double two_agent_objective(double r, double mu) {
    const double ns = nu_star_of_r(r, mu);
    if (!(ns >= 0.0 && ns <= 1.0)) return lp::kInf;
    const double beta = 1.0 / (2.0 * ns + r + 1.0 / r + 2.0);
    return 2.0 * beta * ns * (r * r + 1.5 * r + ns + 1.0);
}

}  // namespace

TwoAgentWorstCase two_agent_worst_case(double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error("two_agent_worst_case: mu must lie in (0,1)");
    const int kScan = 20000;
    int best = -1;
    double best_val = lp::kInf;
    for (int i = 1; i <= kScan; ++i) {
        const double r = static_cast<double>(i) / kScan;
        const double v = two_agent_objective(r, mu);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best < 0)
        throw NumericError("two_agent_worst_case: no feasible (r, nu*) for mu=" +
                           std::to_string(mu));
    double a = static_cast<double>(std::max(best - 1, 1)) / kScan;
    double b = static_cast<double>(std::min(best + 1, kScan)) / kScan;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    while (b - a > 1e-9) {
        if (two_agent_objective(c, mu) < two_agent_objective(d, mu)) {
            b = d;
            d = c;
            c = b - gr * (b - a);
        } else {
            a = c;
            c = d;
            d = a + gr * (b - a);
        }
    }
    const double r = 0.5 * (a + b);
    const double ns = nu_star_of_r(r, mu);
    const double be = 1.0 / (2.0 * ns + r + 1.0 / r + 2.0);
    const double f = two_agent_objective(r, mu);
    const double rn = r * ns;
    GridDistribution dist(2, {{rn, rn}, {ns, rn}, {rn, ns}, {ns, ns}, {1.0, rn}, {rn, 1.0}},
                          {be / r, be, be, be * r, be * ns, be * ns});
    return TwoAgentWorstCase{r, ns, be, f, std::move(dist)};
}

TwoAgentBound two_agent_upper_bound(const std::vector<double>& mu_grid) {
    if (mu_grid.size() < 2)
        throw std::invalid_argument("two_agent_upper_bound: need at least 2 grid points");
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        if (!(mu_grid[i] > 0.0 && mu_grid[i] < 1.0))
            throw std::domain_error("two_agent_upper_bound: mu grid must lie in (0,1)");
        if (i > 0 && mu_grid[i] <= mu_grid[i - 1])
            throw std::invalid_argument("two_agent_upper_bound: mu grid must ascend");
    }
    TwoAgentBound out;
    out.mu = mu_grid;
    out.f.reserve(mu_grid.size());
    out.g.reserve(mu_grid.size());
    for (double m : mu_grid) {
        const double f = two_agent_worst_case(m).f_mu;
        out.f.push_back(f);
        out.g.push_back(std::min(f, m));
    }
    // Tangency of the line through (1,1) supporting g from below: the slope
    // (1-g(mu))/(1-mu) is maximal there.
    auto slope_at = [](double m, double g) { return (1.0 - g) / (1.0 - m); };
    std::size_t best = 0;
    double best_slope = -lp::kInf;
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        const double s = slope_at(mu_grid[i], out.g[i]);
        if (s > best_slope) {
            best_slope = s;
            best = i;
        }
    }
    double a = mu_grid[best > 0 ? best - 1 : best];
    double b = mu_grid[best + 1 < mu_grid.size() ? best + 1 : best];
    auto neg_slope = [&](double m) {
        const double g = std::min(two_agent_worst_case(m).f_mu, m);
        return -slope_at(m, g);
    };
    if (b > a) {
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        while (b - a > 1e-6) {
            if (neg_slope(c) < neg_slope(d)) {
                b = d;
                d = c;
                c = b - gr * (b - a);
            } else {
                a = c;
                c = d;
                d = a + gr * (b - a);
            }
        }
    }
    out.mu_dprime = 0.5 * (a + b);
    out.f_at_mu_dprime = two_agent_worst_case(out.mu_dprime).f_mu;
    const double s =
        slope_at(out.mu_dprime, std::min(out.f_at_mu_dprime, out.mu_dprime));
    out.hull.resize(mu_grid.size());
    for (std::size_t i = 0; i < mu_grid.size(); ++i)
        out.hull[i] = mu_grid[i] <= out.mu_dprime ? out.g[i]
                                                  : 1.0 - s * (1.0 - mu_grid[i]);
    return out;
}

double dirac_bound(double mu, int agents) {
    if (agents < 3)
        throw std::domain_error("dirac_bound: requires at least 3 agents (got " +
                                std::to_string(agents) + ")");
    if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("dirac_bound: mu must lie in (0,1)");
    return mu;
}

}  // namespace dic
