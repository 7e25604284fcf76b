#include "yamabe/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "yamabe/version.hpp"

namespace yamabe::reports {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::ordered_json report_base(const nlohmann::ordered_json& config) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["config"] = config;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

double model_log10_prefactor(const tower::SweepSeries& s, double expected_order) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        acc += s.values[i].log10_abs() - expected_order * s.ratios[i].log10_abs();
    return acc / static_cast<double>(s.values.size());
}

std::string sweep_csv(const tower::SweepSeries& s, double expected_order,
                      double model_log10_pref) {
    std::ostringstream out;
    out << "eps,ratio,value_mantissa,value_log10,model_value\n";
    for (std::size_t i = 0; i < s.eps_grid.size(); ++i) {
        const double model_l10 = model_log10_pref + expected_order * s.ratios[i].log10_abs();
        const ScaledValue model = ScaledValue::from_log(model_l10 * std::log(10.0));
        out << fmt(s.eps_grid[i]) << "," << fmt(s.ratios[i].to_double()) << ","
            << fmt(s.values[i].mantissa) << "," << fmt(s.values[i].log10_scale) << ","
            << fmt(model.to_double()) << "\n";
    }
    return out.str();
}

nlohmann::ordered_json sweep_summary(const tower::SweepSeries& s,
                                     const tower::SlopeFit& fit_ratio,
                                     const tower::SlopeFit& fit_eps, double expected_order,
                                     double tolerance, bool pass) {
    nlohmann::ordered_json j;
    j["points"] = s.eps_grid.size();
    j["slope_vs_ratio"] = fit_ratio.slope;
    j["stderr_vs_ratio"] = fit_ratio.stderr_slope;
    j["intercept_vs_ratio"] = fit_ratio.intercept;
    j["slope_vs_eps"] = fit_eps.slope;
    j["expected_order"] = expected_order;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j;
}

} // namespace yamabe::reports
