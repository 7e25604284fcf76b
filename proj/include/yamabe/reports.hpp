#pragma once

#include <string>
#include <vector>

#include "yamabe/scaled_value.hpp"
#include "yamabe/tower.hpp"

#include "json.hpp"

namespace yamabe::reports {

// Canonical shortest-roundtrip double formatting; all emitted numbers go
// through this so byte-identical reruns hold.
std::string fmt(double v);

// JSON skeleton every report starts from: library version plus the exact
// config snapshot that produced it. No timestamps (reports must be
// byte-identical across reruns).
nlohmann::ordered_json report_base(const nlohmann::ordered_json& config);

void write_text_file(const std::string& path, const std::string& content);
std::string sweep_csv(const tower::SweepSeries& s, double expected_order,
                      double model_log10_prefactor);
nlohmann::ordered_json sweep_summary(const tower::SweepSeries& s,
                                     const tower::SlopeFit& fit_ratio,
                                     const tower::SlopeFit& fit_eps, double expected_order,
                                     double tolerance, bool pass);

// Constrained-intercept model prefactor: mean of log10(v) - order*log10(ratio).
double model_log10_prefactor(const tower::SweepSeries& s, double expected_order);

} // namespace yamabe::reports
