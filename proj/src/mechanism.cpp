#include "dic/mechanism.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace dic {

SingleAgentMechanism::SingleAgentMechanism(PiecewiseFn allocation, PiecewiseFn payment,
                                           MechanismParams params)
    : allocation_(std::move(allocation)), payment_(std::move(payment)), params_(params) {
    const int kGrid = 2001;
    for (int i = 0; i < kGrid; ++i) {
        const double v = static_cast<double>(i) / (kGrid - 1);
        const double x = allocation_.eval(v);
        if (x < -1e-9 || x > 1.0 + 1e-9)
            throw std::invalid_argument("SingleAgentMechanism: allocation " + std::to_string(x) +
                                        " at nu=" + std::to_string(v) + " outside [0,1]");
    }
}

}  // namespace dic
