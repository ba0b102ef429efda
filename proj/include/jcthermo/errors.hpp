// errors.hpp: exception types shared by the solvers and the runner

#pragma once

#include <stdexcept>
#include <string>

namespace jcthermo {

// Numerical failure: non-ergodic generator, rank deficiency, residual too large.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jcthermo
