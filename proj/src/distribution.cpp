#include "dic/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dic {

GridDistribution::GridDistribution(int dims, std::vector<std::vector<double>> support,
                                   std::vector<double> weights)
    : dims_(dims), support_(std::move(support)), weights_(std::move(weights)) {
    if (dims_ < 1) throw std::invalid_argument("GridDistribution: dims must be >= 1");
    if (support_.size() != weights_.size())
        throw std::invalid_argument("GridDistribution: support/weight size mismatch");
    if (support_.empty()) throw std::invalid_argument("GridDistribution: empty support");
    double sum = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (static_cast<int>(support_[i].size()) != dims_)
            throw std::invalid_argument("GridDistribution: point " + std::to_string(i) +
                                        " has wrong dimension");
        for (double c : support_[i])
            if (!(c >= 0.0 && c <= 1.0))
                throw std::invalid_argument("GridDistribution: coordinate outside [0,1]");
        if (!(weights_[i] >= 0.0))
            throw std::invalid_argument("GridDistribution: negative weight");
        sum += weights_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("GridDistribution: weights sum to " + std::to_string(sum) +
                                    ", not 1");
}

double GridDistribution::moment(int order, int axis) const {
    if (axis < 0 || axis >= dims_) throw std::invalid_argument("GridDistribution: bad axis");
    double m = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i)
        m += weights_[i] * std::pow(support_[i][axis], order);
    return m;
}

double GridDistribution::expectation(const std::vector<double>& values) const {
    if (values.size() != weights_.size())
        throw std::invalid_argument("GridDistribution: value vector size mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) e += weights_[i] * values[i];
    return e;
}

MomentSet::MomentSet(int agents, std::vector<double> moments)
    : agents_(agents), moments_(std::move(moments)) {
    if (agents_ < 1) throw std::invalid_argument("MomentSet: agents must be >= 1");
    if (moments_.empty()) throw std::invalid_argument("MomentSet: need at least one moment");
    for (double k : moments_)
        if (!(k > 0.0 && k < 1.0))
            throw std::invalid_argument("MomentSet: moments must lie in (0,1)");
    if (moments_.size() >= 2) {
        const double k1 = moments_[0], k2 = moments_[1];
        if (k2 < k1 * k1 || k2 > k1)
            throw std::invalid_argument("MomentSet: (k1,k2) not attainable on [0,1]");
    }
}

}  // namespace dic
