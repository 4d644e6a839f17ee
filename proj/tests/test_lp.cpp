#include "dic/lp.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "checks.hpp"

using namespace dic;

int main() {
    // box case: max x s.t. x <= 1
    {
        lp::LinearProgram prog(1, lp::Sense::Maximize);
        prog.set_objective(0, 1.0);
        prog.add_row(lp::Relation::LessEq, 1.0, {0}, {1.0});
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Optimal, "box case optimal");
        checks::check_near(sol.objective, 1.0, 1e-12, "box case value 1");
        checks::check_near(sol.row_dual[0], 1.0, 1e-9, "box case dual");
    }
    // empty feasible set: min 0 s.t. x <= -1, x >= 0
    {
        lp::LinearProgram prog(1, lp::Sense::Minimize);
        prog.add_row(lp::Relation::LessEq, -1.0, {0}, {1.0});
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Infeasible, "empty feasible set detected");
    }
    // unbounded: max x, x >= 0, no upper constraint
    {
        lp::LinearProgram prog(1, lp::Sense::Maximize);
        prog.set_objective(0, 1.0);
        prog.add_row(lp::Relation::GreaterEq, 0.0, {0}, {1.0});
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Unbounded, "unbounded detected");
    }
    // adversary LP: min sum q p, sum q = 1, sum q nu = 0.5, p linear -> 1/3
    {
        const int G = 101;
        lp::LinearProgram prog(G, lp::Sense::Minimize);
        std::vector<int> idx(G);
        std::vector<double> ones(G, 1.0), nus(G), pay(G);
        for (int i = 0; i < G; ++i) {
            idx[i] = i;
            nus[i] = static_cast<double>(i) / (G - 1);
            pay[i] = 8.0 * nus[i] / 9.0 - 1.0 / 9.0;
            prog.set_objective(i, pay[i]);
        }
        prog.add_row(lp::Relation::Equal, 1.0, idx, ones);
        prog.add_row(lp::Relation::Equal, 0.5, idx, nus);
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Optimal, "adversary LP optimal");
        checks::check_near(sol.objective, 1.0 / 3.0, 1e-9, "adversary LP value 1/3");
        checks::check_le(sol.duality_gap, 1e-6, "adversary LP duality gap");
    }
    // equality + bounded vars, duals certify the objective
    {
        lp::LinearProgram prog(3, lp::Sense::Maximize);
        prog.set_objective(0, 3.0);
        prog.set_objective(1, 2.0);
        prog.set_objective(2, -1.0);
        for (int j = 0; j < 3; ++j) prog.set_bounds(j, 0.0, 2.0);
        prog.add_row(lp::Relation::Equal, 2.5, {0, 1, 2}, {1.0, 1.0, 1.0});
        prog.add_row(lp::Relation::LessEq, 3.0, {0, 1}, {2.0, 1.0});
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Optimal, "small mixed LP optimal");
        checks::check_le(sol.primal_residual, 1e-9, "small mixed LP primal residual");
        checks::check_le(sol.duality_gap, 1e-6, "small mixed LP duality gap");
        // enumerated optimum: x0=0.5, x1=2, x2=0 -> 5.5  (2x0+x1=3 binding)
        checks::check_near(sol.objective, 5.5, 1e-9, "small mixed LP value");
    }
    // variable-merge presolve: duplicated variables via symmetry-style rows
    {
        lp::LinearProgram prog(4, lp::Sense::Maximize);
        for (int j = 0; j < 4; ++j) {
            prog.set_bounds(j, 0.0, 1.0);
            prog.set_objective(j, 1.0);
        }
        prog.add_row(lp::Relation::Equal, 0.0, {0, 1}, {1.0, -1.0});
        prog.add_row(lp::Relation::Equal, 0.0, {1, 2}, {1.0, -1.0});
        prog.add_row(lp::Relation::LessEq, 1.0, {0, 2, 3}, {1.0, 1.0, 1.0});
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Optimal, "merged LP optimal");
        // x0=x1=x2=t, 2t + x3 <= 1 -> max 3t + x3 at t=0.5,x3=0 or t=0,x3=1
        checks::check_near(sol.objective, 1.5, 1e-9, "merged LP value");
        checks::check_near(sol.primal[0], sol.primal[1], 1e-12, "merge equalizes vars");
        checks::check_le(sol.duality_gap, 1e-6, "merged LP duality gap");
    }
    // determinism: identical input, identical iterations and solution
    {
        auto build = [] {
            lp::LinearProgram prog(10, lp::Sense::Maximize);
            std::mt19937 rng(42);
            std::uniform_real_distribution<double> U(0.0, 1.0);
            for (int j = 0; j < 10; ++j) {
                prog.set_bounds(j, 0.0, 2.0);
                prog.set_objective(j, U(rng));
            }
            for (int i = 0; i < 25; ++i) {
                std::vector<int> idx;
                std::vector<double> coef;
                for (int j = 0; j < 10; ++j)
                    if (U(rng) < 0.4) {
                        idx.push_back(j);
                        coef.push_back(U(rng) - 0.3);
                    }
                if (!idx.empty()) prog.add_row(lp::Relation::LessEq, 1.0 + U(rng), idx, coef);
            }
            return prog;
        };
        auto s1 = lp::solve(build());
        auto s2 = lp::solve(build());
        bool same = s1.iterations == s2.iterations && s1.objective == s2.objective;
        for (int j = 0; j < 10; ++j) same = same && s1.primal[j] == s2.primal[j];
        checks::check(same, "deterministic pivot sequence and solution");
        checks::check_le(s1.duality_gap, 1e-6, "random LP duality gap");
        checks::check_le(s1.primal_residual, 1e-7, "random LP primal residual");
    }
    // lazy activation path: many rows, few binding
    {
        const int n = 40, m = 8000;
        lp::LinearProgram prog(n, lp::Sense::Maximize);
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> U(0.1, 1.0);
        for (int j = 0; j < n; ++j) {
            prog.set_bounds(j, 0.0, lp::kInf);
            prog.set_objective(j, U(rng));
        }
        for (int i = 0; i < m; ++i) {
            std::vector<int> idx;
            std::vector<double> coef;
            for (int j = 0; j < n; ++j)
                if (U(rng) < 0.15) {
                    idx.push_back(j);
                    coef.push_back(U(rng));
                }
            if (idx.empty()) {
                idx.push_back(i % n);
                coef.push_back(1.0);
            }
            prog.add_row(lp::Relation::LessEq, 1.0 + U(rng), idx, coef);
        }
        auto sol = lp::solve(prog);
        checks::check(sol.status == lp::SolveStatus::Optimal, "lazy LP optimal");
        checks::check_le(sol.primal_residual, 1e-7, "lazy LP satisfies all rows");
        checks::check_le(sol.duality_gap, 1e-6, "lazy LP duality gap");
    }
    // validation errors
    {
        lp::LinearProgram prog(2, lp::Sense::Maximize);
        prog.set_bounds(0, 1.0, 0.0);
        checks::check_throws([&] { lp::solve(prog); }, "lower > upper rejected");
        lp::LinearProgram prog2(2, lp::Sense::Maximize);
        checks::check_throws(
            [&] {
                prog2.add_row(lp::Relation::LessEq,
                              std::numeric_limits<double>::quiet_NaN(), {0}, {1.0});
                lp::solve(prog2);
            },
            "NaN rhs rejected");
    }
    // exchange dump shape
    {
        lp::LinearProgram prog(2, lp::Sense::Minimize);
        prog.set_objective(0, 1.25);
        prog.set_bounds(1, -1.0, 1.0);
        prog.add_row(lp::Relation::GreaterEq, 0.5, {0, 1}, {1.0, 2.0});
        std::ostringstream os;
        lp::write_exchange(prog, os, "T");
        const std::string s = os.str();
        checks::check(s.find("NAME T") != std::string::npos &&
                          s.find("ENDATA") != std::string::npos &&
                          s.find("1.25") != std::string::npos,
                      "exchange dump contains the expected sections");
    }
    return checks::finish("test_lp");
}
