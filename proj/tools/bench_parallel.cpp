// Serial-vs-OpenMP comparison for the two batch kernels: the eps sweep of the
// consecutive-bubble interaction and multi-point curvature sampling. The
// parallel path must also be bit-identical to the serial reference; this
// binary reports timings and verifies equality.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "yamabe/geometry.hpp"
#include "yamabe/manifold_catalog.hpp"
#include "yamabe/parallel.hpp"
#include "yamabe/tower.hpp"

namespace {

double seconds(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int repeats = 3;
    if (argc > 1) repeats = std::atoi(argv[1]);

    std::printf("threads available: %d\n", yamabe::worker_threads());

    // kernel A: interaction sweep, 25 eps points
    {
        yamabe::tower::CutoffSpec cut;
        yamabe::tower::TowerConfig base(7, 2, {1.0, 1.0}, 1e-4, cut);
        const auto grid = yamabe::tower::log_grid(1e-6, 1e-3, 8);
        yamabe::tower::SweepSeries serial_out, parallel_out;
        double ts = 0.0, tp = 0.0;
        for (int r = 0; r < repeats; ++r) {
            ts += seconds([&] {
                serial_out = yamabe::tower::run_sweep(
                    base, yamabe::tower::Quantity::interaction, 2, grid, 1e-9, true);
            });
            tp += seconds([&] {
                parallel_out = yamabe::tower::run_sweep(
                    base, yamabe::tower::Quantity::interaction, 2, grid, 1e-9, false);
            });
        }
        bool identical = true;
        for (std::size_t i = 0; i < serial_out.values.size(); ++i)
            identical = identical &&
                        serial_out.values[i].mantissa == parallel_out.values[i].mantissa &&
                        serial_out.values[i].log10_scale == parallel_out.values[i].log10_scale;
        std::printf("interaction sweep (%zu points): serial %.3fs  openmp %.3fs  speedup %.2fx  identical %s\n",
                    grid.size(), ts / repeats, tp / repeats, ts / tp,
                    identical ? "yes" : "NO");
    }

    // kernel B: batch curvature sampling on S3 x S4
    {
        const auto m = yamabe::catalog::build_manifold(
            yamabe::catalog::builtin_catalog().at("s3xs4"));
        const auto pts = yamabe::geom::sample_domain(m.chart, 64, 1, 0.1);
        std::vector<double> serial_out, parallel_out;
        double ts = 0.0, tp = 0.0;
        for (int r = 0; r < repeats; ++r) {
            ts += seconds([&] {
                serial_out = yamabe::geom::weyl_norms_at(m.chart, pts, {}, true);
            });
            tp += seconds([&] {
                parallel_out = yamabe::geom::weyl_norms_at(m.chart, pts, {}, false);
            });
        }
        const bool identical = serial_out == parallel_out;
        std::printf("curvature batch (%zu points):  serial %.3fs  openmp %.3fs  speedup %.2fx  identical %s\n",
                    pts.size(), ts / repeats, tp / repeats, ts / tp,
                    identical ? "yes" : "NO");
    }
    return 0;
}
