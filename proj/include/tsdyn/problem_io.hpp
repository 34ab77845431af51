#pragma once

#include <optional>
#include <string>

#include "tsdyn/poly.hpp"
#include "tsdyn/relax.hpp"
#include "tsdyn/sparsity.hpp"

namespace tsdyn {

// Relaxation settings that may be left unset; later layers override earlier
// ones (defaults < problem file < command line).
struct ConfigOverrides {
    std::optional<int> d;
    std::optional<int> s;
    std::optional<int> l;
    std::optional<double> beta;
    std::optional<Mode> mode;
    std::optional<ChordalExtension> extension;

    void apply_to(RelaxationConfig& config) const;
};

struct ProblemFile {
    std::string name;
    DynamicalSystem system;
    Box box;
    ConfigOverrides config;
};

// JSON layout:
//   { "name": "...", "variables": ["x1", ...], "dynamics": ["10*(x2-x1)", ...],
//     "constraints": ["1-x1^2", ...],            (optional; default (x-lo)(hi-x))
//     "box": {"lo": [...], "hi": [...]},
//     "config": {"d": 2, "s": 1, "l": 1, "beta": 1, "mode": "ts", "extension": "maximal"} }
ProblemFile parse_problem(const std::string& json_text);
ProblemFile load_problem(const std::string& path);
std::string problem_to_json(const ProblemFile& problem);

}  // namespace tsdyn
