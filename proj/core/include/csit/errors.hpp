#pragma once

#include <stdexcept>
#include <string>

namespace csit {

// Invalid parameters or violated preconditions. Maps to CLI exit code 1.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The particle came within the collision guard of a primary (or of the
// fused mass in the r -> 0 limit). primary() is 1 or 2, 0 for the fused mass.
class collision_error : public std::domain_error {
public:
    collision_error(int primary, double distance);

    int primary() const noexcept { return primary_; }
    double distance() const noexcept { return distance_; }

private:
    int primary_;
    double distance_;
};

// Iterative solver failed: Kepler non-convergence, integrator step underflow,
// corrupted monodromy.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace csit
