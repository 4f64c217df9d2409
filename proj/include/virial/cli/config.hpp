#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "virial/potentials.hpp"
#include "virial/radial.hpp"

namespace virial::cli {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PotentialSpec {
    std::string kind = "oscillator"; // oscillator | linear | power_law | coulomb
    double A = 1.0;
    double m = 2.0;
    double strength = 1.0;

    ScaledPotential build() const;
    bool operator==(const PotentialSpec&) const = default;
};

struct StateSpec {
    int n = 0;
    int l = 0;
    bool operator==(const StateSpec&) const = default;
};

struct ClassicalSpec {
    bool enabled = false;
    double E = 0.0;
    double l2 = 0.0;
    std::vector<double> probes{1, 2, 3, 4};
    std::optional<StateSpec> gap_state;
    int nodes = 2048;
    bool operator==(const ClassicalSpec&) const = default;
};

/// Parsed run configuration. Probe tokens are numbers, the state-dependent
/// exponents "2l+2" and "-2l", or the named probes "gauss" and "exp".
struct RunConfig {
    PotentialSpec potential;
    int N = 3;
    std::vector<StateSpec> states{{0, 0}};
    std::string source = "solver"; // solver | exact
    std::vector<std::string> probes{"0", "1", "2", "3", "2l+2", "-2l"};
    std::vector<std::string> relations{"general"}; // general | special | power
    double grid_h = 1e-3;
    double rho_max = 0.0; // 0 picks the box from the potential
    double tolerance = 1e-6;
    double solver_tolerance = 1e-10;
    std::string output_dir = "out";
    ClassicalSpec classical;

    bool operator==(const RunConfig&) const = default;
};

/// INI text: [section] headers, key = value lines, '#' or ';' comments,
/// comma separated lists. Unknown sections or keys throw config_error.
RunConfig parse_ini(const std::string& text);
/// The same sections as JSON objects; lists may be arrays or strings.
RunConfig parse_json(const std::string& text);
/// JSON when the first non-blank character is '{', INI otherwise.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical INI: every key, fixed order, shortest round-trip numbers.
std::string to_canonical(const RunConfig& c);

std::string format_double(double x);

} // namespace virial::cli
