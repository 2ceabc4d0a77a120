// Serial reference vs OpenMP kernel timings; also checks the outputs agree.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "mrds/basin.hpp"
#include "mrds/julia.hpp"
#include "mrds/minimal.hpp"
#include "mrds/orbit.hpp"

using namespace mrds;

namespace {

double seconds(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-18s serial %8.3fs  openmp %8.3fs  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    const Gdms g = Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::quadratic(0.0, 0.1)}});
    bool all = true;

    {
        JuliaParams jp;
        jp.resolution = 64;
        GridMask a, b;
        const double ts = seconds([&] { a = julia_forward_serial(g, jp); });
        const double tp = seconds([&] { b = julia_forward(g, jp); });
        row("julia_forward", ts, tp, a == b);
        all = all && a == b;
    }
    {
        const SpherePoint z0 = SpherePoint::from_complex({0.3, 0.1});
        LyapunovEstimate a, b;
        const double ts = seconds([&] { a = lyapunov_serial(g, z0, 0, 2000, 200, 7); });
        const double tp = seconds([&] { b = lyapunov(g, z0, 0, 2000, 200, 7); });
        const bool same = a.value == b.value && a.ci95_halfwidth == b.ci95_halfwidth;
        row("lyapunov", ts, tp, same);
        all = all && same;
    }
    {
        DetectParams dp;
        const auto sets = detect_minimal_sets(g, dp);
        std::vector<SpherePoint> pts;
        for (int k = 0; k < 10; ++k) pts.push_back(SpherePoint::from_complex({-1.0 + 0.2 * k, 0.15}));
        BasinEstimate a, b;
        const double ts = seconds([&] { a = estimate_T_mc_serial(g, sets, pts, 200, 300, 3); });
        const double tp = seconds([&] { b = estimate_T_mc(g, sets, pts, 200, 300, 3); });
        const bool same = a.value == b.value && a.undecided == b.undecided;
        row("basin_mc", ts, tp, same);
        all = all && same;

        const TransitionOperator op(g, 128, 64);
        const GridField phi = cover_indicator(sets.back(), 128);
        GridField x, y;
        const double os = seconds([&] { for (int i = 0; i < 20; ++i) x = op.apply_serial(i ? x : phi); });
        const double opar = seconds([&] { for (int i = 0; i < 20; ++i) y = op.apply(i ? y : phi); });
        const bool eq = x.values == y.values;
        row("operator_apply x20", os, opar, eq);
        all = all && eq;
    }
    return all ? 0 : 1;
}
