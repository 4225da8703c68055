#pragma once

#include <stdexcept>
#include <string>

namespace gridflex {

/// Bad input: a spec, profile, config or file that violates its contract.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The constraint set admits no trajectory at all.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gridflex
