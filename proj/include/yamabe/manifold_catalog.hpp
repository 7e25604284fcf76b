#pragma once

#include <functional>
#include <string>

#include "yamabe/geometry.hpp"

#include "json.hpp"

namespace yamabe::catalog {

// A catalog manifold: the chart, sampling defaults, and (when the spec admits
// one) the canonical point symmetry H with its fixed point in chart
// coordinates. Spheres use theta_i -> pi - theta_i, circles theta -> -theta,
// ellipsoid graph charts u -> -u; products act componentwise.
struct BuiltManifold {
    geom::Chart chart;
    int samples = 20;
    unsigned seed = 1;
    std::function<Vec(const Vec&)> point_symmetry; // may be empty
    Vec fixed_point;
    // sampling box for symmetry checks (keeps H(sample) inside the chart)
    std::vector<std::pair<double, double>> symmetry_box;
};

// Spec shapes:
//   {"type":"sphere","dim":7,"radius":1.0}
//   {"type":"circle","radius":1.0}
//   {"type":"ellipsoid","semi_axes":[1.0,1.3,1.6,1.0,1.0]}
//   {"type":"product","factors":[spec, spec, ...]}
//   {"type":"warped","base":spec,"fiber":spec,
//    "warping":{"type":"constant","value":1.0} |
//              {"type":"sin2_first_angle","amplitude":0.2}}
// plus optional "samples" and "seed" at the top level of an entry.
BuiltManifold build_manifold(const nlohmann::json& spec);

// Loads a {name: spec} catalog file and builds one entry.
BuiltManifold load_from_catalog(const std::string& path, const std::string& name);

// The catalog shipped with the repository (also written to data/manifolds.json).
nlohmann::json builtin_catalog();

} // namespace yamabe::catalog
