#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace yamabe::accept {

enum class Profile { quick, full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double runtime_sec = 0.0;
};

// Runs the full verification suite (bubble identities, constant
// cross-identities, the three asymptotic-order sweeps, the flat-energy
// expansion, the sequential maximization, exponent algebra, the geometry
// and symmetry oracles, and the solvability pipeline). quick trims the
// sweep grids to 12 points and caps tower heights at 3; every threshold is
// identical in both profiles.
std::vector<CriterionResult> run_all(Profile profile, bool serial = false);

nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results);

// One "[PASS]/[FAIL] <id> <name>: <detail>" line per criterion.
std::string format_lines(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace yamabe::accept
