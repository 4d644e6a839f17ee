// Finite-support distributions on [0,1]^J and moment ambiguity sets.

#pragma once

#include <vector>

namespace dic {

class GridDistribution {
public:
    // support: points in [0,1]^dims; weights nonnegative, summing to 1
    // within 1e-12. Throws std::invalid_argument on violation.
    GridDistribution(int dims, std::vector<std::vector<double>> support,
                     std::vector<double> weights);

    int dims() const { return dims_; }
    const std::vector<std::vector<double>>& support() const { return support_; }
    const std::vector<double>& weights() const { return weights_; }

    double moment(int order, int axis = 0) const;
    double mean(int axis = 0) const { return moment(1, axis); }

    // E[f(nu)] for single-agent distributions, f sampled at the support.
    double expectation(const std::vector<double>& values) const;

private:
    int dims_;
    std::vector<std::vector<double>> support_;
    std::vector<double> weights_;
};

// Symmetric moment vector k_1..k_N shared by all agents. Each k_i must lie in
// (0,1); for N >= 2 attainability requires k_2 >= k_1^2 and k_2 <= k_1.
class MomentSet {
public:
    MomentSet(int agents, std::vector<double> moments);

    int agents() const { return agents_; }
    const std::vector<double>& moments() const { return moments_; }
    int order() const { return static_cast<int>(moments_.size()); }

private:
    int agents_;
    std::vector<double> moments_;
};

}  // namespace dic
