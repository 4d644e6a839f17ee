#pragma once

#include <stdexcept>

namespace dic {

// Numeric or solver failure (distinct from domain/precondition errors, which
// use std::domain_error, and from construction errors, std::invalid_argument).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dic
