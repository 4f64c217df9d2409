#pragma once

#include <stdexcept>
#include <string>

namespace virial {

// Precondition on an argument or on the state/probe combination.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class unsupported_order : public domain_error {
public:
    using domain_error::domain_error;
};

// Eigenvalue bracketing failed inside the configured energy window.
class no_bound_state : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No bounded classical motion for the requested (E, l^2).
class no_orbit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace virial
