// Self-contained linear-programming layer: sparse problem container and a
// bounded-variable revised simplex. Hosts every discretized program in this
// library (nominal, frontier, adversary inner problem, multi-agent).

#pragma once

#include <cstdint>
#include <memory>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dic/errors.hpp"

namespace dic::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };
enum class SolveStatus { Optimal, Infeasible, Unbounded };

// Thrown when the basis degenerates beyond repair or iteration limits hit.
using NumericError = dic::NumericError;

struct Row {
    std::vector<int> idx;
    std::vector<double> coef;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

class LinearProgram {
public:
    LinearProgram(int n_vars, Sense sense);

    void set_objective(int var, double coef);
    void set_bounds(int var, double lower, double upper);
    // Entries may repeat a variable; they are combined. Returns the row index.
    int add_row(Relation rel, double rhs, std::vector<int> idx, std::vector<double> coef);

    int n_vars() const { return n_vars_; }
    int n_rows() const { return static_cast<int>(rows_.size()); }
    Sense sense() const { return sense_; }
    const std::vector<double>& objective() const { return obj_; }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<Row>& rows() const { return rows_; }
    std::size_t nonzeros() const { return nonzeros_; }

    // Invariants: finite coefficients/rhs, indices in range, lower <= upper.
    // Throws std::invalid_argument on violation.
    void validate() const;

private:
    int n_vars_;
    Sense sense_;
    std::vector<double> obj_, lower_, upper_;
    std::vector<Row> rows_;
    std::size_t nonzeros_ = 0;
};

struct LpSolution {
    SolveStatus status = SolveStatus::Optimal;
    double objective = 0.0;
    std::vector<double> primal;    // per variable
    std::vector<double> row_dual;  // per row, original row order
    std::int64_t iterations = 0;
    // Residuals on the scaled system, filled for optimal solves.
    double primal_residual = 0.0;
    double duality_gap = 0.0;
};

LpSolution solve(const LinearProgram& lp);

// Re-solves the same constraint system under a sequence of objectives,
// keeping the basis warm between calls (each re-solve is primal feasible and
// needs only phase 2). A solve owns its working memory exclusively.
class ReusableSolver {
public:
    explicit ReusableSolver(const LinearProgram& lp);
    ~ReusableSolver();
    ReusableSolver(ReusableSolver&&) noexcept;
    ReusableSolver& operator=(ReusableSolver&&) noexcept;
    LpSolution solve(const std::vector<double>& objective);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Plain-text dump in a rows/columns/rhs/bounds exchange layout, 17 significant
// digits, for external cross-checking.
void write_exchange(const LinearProgram& lp, std::ostream& os, const char* name = "DIC_LP");

}  // namespace dic::lp
