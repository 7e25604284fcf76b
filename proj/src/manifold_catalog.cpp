#include "yamabe/manifold_catalog.hpp"

#include <cmath>
#include <fstream>

#include "yamabe/errors.hpp"

namespace yamabe::catalog {

namespace {

BuiltManifold build_spec(const nlohmann::json& spec);

BuiltManifold build_sphere(const nlohmann::json& spec) {
    const int n = spec.at("dim").get<int>();
    const double radius = spec.value("radius", 1.0);
    BuiltManifold m;
    m.chart = geom::make_sphere_chart(n, radius);
    m.fixed_point.assign(n, 0.5 * M_PI);
    m.point_symmetry = [n](const Vec& th) {
        Vec out(n);
        for (int i = 0; i < n; ++i) out[i] = M_PI - th[i];
        return out;
    };
    // restrict the last angle to (0, pi) so H stays inside the chart box
    m.symmetry_box = m.chart.domain;
    m.symmetry_box.back() = {0.0, M_PI};
    return m;
}

BuiltManifold build_circle(const nlohmann::json& spec) {
    BuiltManifold m;
    m.chart = geom::make_circle_chart(spec.value("radius", 1.0));
    m.fixed_point = {0.0};
    m.point_symmetry = [](const Vec& th) { return Vec{-th[0]}; };
    m.symmetry_box = {{-0.5 * M_PI, 0.5 * M_PI}};
    return m;
}

BuiltManifold build_ellipsoid(const nlohmann::json& spec) {
    BuiltManifold m;
    const auto axes = spec.at("semi_axes").get<std::vector<double>>();
    m.chart = geom::make_ellipsoid_graph_chart(axes);
    const int n = m.chart.dim;
    m.fixed_point.assign(n, 0.0);
    m.point_symmetry = [n](const Vec& u) {
        Vec out(n);
        for (int i = 0; i < n; ++i) out[i] = -u[i];
        return out;
    };
    m.symmetry_box = m.chart.domain;
    return m;
}

std::function<double(const Vec&)> build_warping(const nlohmann::json& w) {
    const std::string type = w.value("type", "constant");
    if (type == "constant") {
        const double v = w.value("value", 1.0);
        if (!(v > 0.0)) throw ConfigInvalidError("warping: constant must be positive");
        return [v](const Vec&) { return v; };
    }
    if (type == "sin2_first_angle") {
        // invariant under theta -> pi - theta, so Lemma-style symmetry survives
        const double amp = w.value("amplitude", 0.2);
        if (!(amp > -1.0)) throw ConfigInvalidError("warping: amplitude must exceed -1");
        return [amp](const Vec& ub) {
            const double s = std::sin(ub[0]);
            return 1.0 + amp * s * s;
        };
    }
    throw ConfigInvalidError("warping: unknown type " + type);
}

BuiltManifold combine(const BuiltManifold& base, const BuiltManifold& fiber,
                      std::function<double(const Vec&)> warping, const std::string& name) {
    BuiltManifold m;
    geom::WarpedProductSpec spec{base.chart, fiber.chart, std::move(warping), name};
    m.chart = geom::make_warped_product(spec);
    const int nb = base.chart.dim;
    const int nf = fiber.chart.dim;
    if (base.point_symmetry && fiber.point_symmetry) {
        auto hb = base.point_symmetry;
        auto hf = fiber.point_symmetry;
        m.point_symmetry = [hb, hf, nb, nf](const Vec& u) {
            const Vec ub(u.begin(), u.begin() + nb);
            const Vec uf(u.begin() + nb, u.end());
            Vec out = hb(ub);
            const Vec of = hf(uf);
            out.insert(out.end(), of.begin(), of.end());
            return out;
        };
        m.fixed_point = base.fixed_point;
        m.fixed_point.insert(m.fixed_point.end(), fiber.fixed_point.begin(),
                             fiber.fixed_point.end());
        m.symmetry_box = base.symmetry_box;
        m.symmetry_box.insert(m.symmetry_box.end(), fiber.symmetry_box.begin(),
                              fiber.symmetry_box.end());
    }
    return m;
}

BuiltManifold build_spec(const nlohmann::json& spec) {
    const std::string type = spec.at("type").get<std::string>();
    if (type == "sphere") return build_sphere(spec);
    if (type == "circle") return build_circle(spec);
    if (type == "ellipsoid") return build_ellipsoid(spec);
    if (type == "product" || type == "warped") {
        std::vector<BuiltManifold> factors;
        std::function<double(const Vec&)> warping;
        if (type == "product") {
            for (const auto& f : spec.at("factors")) factors.push_back(build_spec(f));
            if (factors.size() < 2) throw ConfigInvalidError("product: need >= 2 factors");
        } else {
            factors.push_back(build_spec(spec.at("base")));
            factors.push_back(build_spec(spec.at("fiber")));
            warping = build_warping(spec.value("warping", nlohmann::json{{"type", "constant"}}));
        }
        BuiltManifold acc = factors[0];
        for (std::size_t i = 1; i < factors.size(); ++i) {
            // warping applies to the last pairing only; plain factors use f == 1
            const bool last = (i + 1 == factors.size());
            acc = combine(acc, factors[i], (last && warping) ? warping : nullptr, "");
        }
        return acc;
    }
    throw ConfigInvalidError("manifold spec: unknown type " + type);
}

} // namespace

BuiltManifold build_manifold(const nlohmann::json& spec) {
    BuiltManifold m = build_spec(spec);
    m.samples = spec.value("samples", 20);
    m.seed = spec.value("seed", 1u);
    return m;
}

BuiltManifold load_from_catalog(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalidError("catalog: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (!j.contains(name)) throw ConfigInvalidError("catalog: no manifold named " + name);
    return build_manifold(j.at(name));
}

nlohmann::json builtin_catalog() {
    nlohmann::ordered_json j;
    j["s7"] = {{"type", "sphere"}, {"dim", 7}, {"radius", 1.0}, {"samples", 20}, {"seed", 7}};
    j["s1xs6"] = {{"type", "product"},
                  {"factors",
                   {{{"type", "circle"}, {"radius", 1.0}},
                    {{"type", "sphere"}, {"dim", 6}, {"radius", 1.0}}}},
                  {"samples", 20},
                  {"seed", 16}};
    j["s2xs5"] = {{"type", "product"},
                  {"factors",
                   {{{"type", "sphere"}, {"dim", 2}, {"radius", 1.0}},
                    {{"type", "sphere"}, {"dim", 5}, {"radius", 1.0}}}},
                  {"samples", 20},
                  {"seed", 25}};
    j["s3xs4"] = {{"type", "product"},
                  {"factors",
                   {{{"type", "sphere"}, {"dim", 3}, {"radius", 1.0}},
                    {{"type", "sphere"}, {"dim", 4}, {"radius", 1.0}}}},
                  {"samples", 20},
                  {"seed", 34}};
    j["s2xs2"] = {{"type", "product"},
                  {"factors",
                   {{{"type", "sphere"}, {"dim", 2}, {"radius", 1.0}},
                    {{"type", "sphere"}, {"dim", 2}, {"radius", 1.0}}}},
                  {"samples", 20},
                  {"seed", 22}};
    j["ellipsoid4"] = {{"type", "ellipsoid"},
                       {"semi_axes", {1.0, 1.3, 1.6, 1.0, 1.0}},
                       {"samples", 20},
                       {"seed", 4}};
    j["s2xs5_warped"] = {{"type", "warped"},
                         {"base", {{"type", "sphere"}, {"dim", 2}, {"radius", 1.0}}},
                         {"fiber", {{"type", "sphere"}, {"dim", 5}, {"radius", 1.0}}},
                         {"warping", {{"type", "sin2_first_angle"}, {"amplitude", 0.2}}},
                         {"samples", 10},
                         {"seed", 11}};
    return j;
}

} // namespace yamabe::catalog
