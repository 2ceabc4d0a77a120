// Acceptance run: one PASS/FAIL line per criterion.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "mrds/basin.hpp"
#include "mrds/bifurcation.hpp"
#include "mrds/io.hpp"
#include "mrds/julia.hpp"
#include "mrds/minimal.hpp"
#include "mrds/orbit.hpp"

using namespace mrds;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Gdms quad(double s) { return NoiseFamily::quadratic().build(0.0, s); }

Gdms shipped(const char* name) { return load_system(std::string(MRDS_SYSTEMS_DIR) + "/" + name + ".json"); }

bool is_infinity_cover(const MinimalSetCover& c) {
    return c.boxes.contains_point(BoxGrid(c.delta), 0, SpherePoint::infinity());
}

// Verdicts on the c = 0 benchmark, shared between criteria.
std::map<double, Verdict> g_verdicts;
// Every verdict computed in this run, for the bound and replay checks.
std::vector<std::pair<Gdms, Verdict>> g_runs;

const Verdict& verdict_at(double s) {
    auto it = g_verdicts.find(s);
    if (it != g_verdicts.end()) return it->second;
    const Gdms g = quad(s);
    Verdict v = mean_stable_verdict(g, VerdictParams{});
    g_runs.emplace_back(g, v);
    return g_verdicts.emplace(s, std::move(v)).first->second;
}

const Verdict& run_verdict(const Gdms& g) {
    g_runs.emplace_back(g, mean_stable_verdict(g, VerdictParams{}));
    return g_runs.back().second;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int g_failed = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++g_failed;
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), dt);
    std::fflush(stdout);
}

// --- criteria ---------------------------------------------------------------

bool g_bif_bound_ok = true;

Outcome bifurcation_benchmark() {
    const auto t0 = std::chrono::steady_clock::now();
    const BifReport r = find_bif_points(NoiseFamily::quadratic(), 0.0, 0.05, 0.5, 0.01, VerdictParams{});
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    g_bif_bound_ok = g_bif_bound_ok && r.bound_ok;
    double best = -1.0;
    for (double s : r.points)
        if (s > 0.0 && (best < 0.0 || std::abs(s - 0.25) < std::abs(best - 0.25))) best = s;
    const bool ok = best > 0.0 && std::abs(best - 0.25) <= 0.01 && dt <= 600.0;
    return {ok, fmt("s* = %.4f, %g bifurcation points", best, double(r.points.size()))};
}

Outcome census() {
    const std::vector<double> grid{0.05, 0.1, 0.2, 0.3, 0.5, 1.0};
    std::string detail;
    bool ok = true;
    int prev = 1 << 30;
    for (double s : grid) {
        const int n = int(verdict_at(s).covers.size());
        const int want = s < 0.25 ? 2 : 1;
        ok = ok && n == want && n <= prev;
        prev = n;
        detail += fmt("%g:%g ", s, n);
    }
    return {ok, "counts " + detail};
}

Outcome j_touching_geometry() {
    const Verdict& v = verdict_at(0.25);
    const double h = 2.0 * kGridExtent / VerdictParams{}.julia.resolution;
    std::vector<SpherePoint> disk;
    for (int i = 0; i <= 50; ++i)
        for (int k = 0; k < 200; ++k)
            disk.push_back(SpherePoint::from_complex(std::polar(0.5 * i / 50.0, 2 * std::numbers::pi * k / 200)));
    for (std::size_t i = 0; i < v.covers.size(); ++i) {
        const MinimalSetCover& c = v.covers[i];
        if (is_infinity_cover(c)) continue;
        const double hd = hausdorff_to(BoxGrid(c.delta), c.boxes, 0, disk);
        double near = 1e9;
        for (const Witness& w : v.classes[i].witnesses)
            if (!w.point.is_infinity()) near = std::min(near, std::abs(w.point.to_complex() - 0.5));
        const bool ok = hd <= 0.05 && v.classes[i].kind == CoverKind::JTouching && near <= 2.0 * h;
        return {ok, fmt("Hausdorff %.4f, witness %.4f from 1/2 (2 cells = %.4f)", hd, near, 2 * h) + ", kind " +
                        to_string(v.classes[i].kind)};
    }
    return {false, "no bounded cover"};
}

Outcome dichotomy() {
    std::string detail;
    bool ok = true;
    for (double s : {0.0, 0.05, 0.1, 0.2, 0.25, 0.3, 0.5, 1.0}) {
        const Verdict& v = verdict_at(s);
        const bool want = !(s == 0.0 || s == 0.25);
        ok = ok && !v.undecided && v.mean_stable == want;
        detail += fmt("%g:", s) + (v.undecided ? "U " : v.mean_stable ? "S " : "N ");
    }
    return {ok, detail};
}

Outcome negative_lyapunov() {
    const Gdms g = quad(0.1);
    int good = 0;
    double worst = -1e300;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) {
            const SpherePoint z0 = SpherePoint::from_complex({-1.2 + 0.6 * i, -0.6 + 0.4 * j});
            const LyapunovEstimate e = lyapunov(g, z0, 0, 10000, 1000, 100 + std::uint64_t(4 * i + j));
            worst = std::max(worst, e.value + e.ci95_halfwidth);
            good += e.value < 0.0 && e.value + e.ci95_halfwidth < 0.0;
        }
    return {good == 20, fmt("%g/20 points negative; largest upper CI end %.4g", good, worst)};
}

Outcome deterministic_contrast() {
    const Gdms g = shipped("dirac_z2");
    const LyapunovEstimate e = lyapunov(g, SpherePoint::from_complex(1.0), 0, 10000, 10, 1);
    const double err = std::abs(e.value - std::log(2.0));
    const Verdict& v = run_verdict(g);
    return {err <= 1e-9 && !v.mean_stable && !v.undecided,
            fmt("|lambda - log 2| = %.2e, ", err) + (v.mean_stable ? "mean stable" : "not mean stable")};
}

Outcome basin_consistency() {
    const Gdms g = quad(0.1);
    const auto sets = detect_minimal_sets(g, DetectParams{});
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 5; ++j) pts.push_back(SpherePoint::from_complex({-1.8 + 0.4 * i, -1.0 + 0.5 * j}));
    const BasinEstimate mc = estimate_T_mc(g, sets, pts, 4000, 500, 7);
    const int R = 128;
    const TransitionOperator op(g, R, 64);
    std::vector<GridField> T;
    for (const auto& c : sets) T.push_back(op.iterate(cover_indicator(c, R), 200));
    double lo = 2.0, hi = -1.0, und = 0.0, gap = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        double sum = 0.0;
        for (std::size_t L = 0; L < sets.size(); ++L) {
            sum += mc.value[L][p];
            gap = std::max(gap, std::abs(mc.value[L][p] - T[L].at(0, pts[p])));
        }
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
        und = std::max(und, mc.undecided[p]);
    }
    const bool ok = sets.size() == 2 && lo >= 0.98 && hi <= 1.0 + 1e-12 && und <= 0.02 && gap <= 0.05;
    return {ok, fmt("sum in [%.4f, %.4f], max undecided %.4f", lo, hi, und) + fmt(", MC/operator gap %.4f", gap)};
}

Outcome kernel_and_area() {
    const Gdms g = quad(0.1);
    JuliaParams jp;
    jp.resolution = 128;
    const KernelReport k = kernel_julia_empty(g, julia_forward(g, jp));
    int small = 0;
    double worst = 0.0, least = 1.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double f = sample_julia_area(g, seed, 256, 200).fraction;
        small += f <= 0.01;
        worst = std::max(worst, f);
        least = std::min(least, f);
    }
    return {k.empty && small >= 19, std::string("kernel ") + (k.empty ? "empty" : "nonempty") +
                                        fmt(", %g/20 seeds with area <= 0.01 (range %.4f..%.4f)", small, least, worst)};
}

Outcome julia_ground_truth() {
    const Gdms g = shipped("dirac_z2");
    JuliaParams jp;
    jp.resolution = 512;
    const GridMask m = julia_forward(g, jp);
    std::vector<SpherePoint> marked;
    for (std::size_t i = 0; i < m.cells(); ++i)
        if (m.get(i)) {
            const CellRef c = m.cell(i);
            marked.push_back(SpherePoint{c.chart, m.center(c)});
        }
    auto to_circle = [](const SpherePoint& p) {
        const double r = p.modulus();
        if (std::isinf(r)) return std::sqrt(2.0);
        return chordal_dist(SpherePoint::from_complex(r), SpherePoint::from_complex(1.0));
    };
    double hd = marked.empty() ? 2.0 : 0.0;
    for (const SpherePoint& p : marked) hd = std::max(hd, to_circle(p));
    for (int k = 0; k < 720; ++k) {
        const SpherePoint q = SpherePoint::from_complex(std::polar(1.0, 2 * std::numbers::pi * k / 720));
        double best = 2.0;
        for (const SpherePoint& p : marked) best = std::min(best, chordal_dist(p, q));
        hd = std::max(hd, best);
    }
    double off = 0.0;
    for (const auto& [p, v] : julia_backward(g, 20000, 1)) off = std::max(off, std::abs(p.modulus() - 1.0));
    return {hd <= 0.02 && off <= 1e-8, fmt("mask Hausdorff %.4f, backward cloud off the circle by %.2e", hd, off)};
}

Outcome trichotomy() {
    std::string detail;
    bool ok = true;
    auto find = [](const Verdict& v, const SpherePoint& p) -> const Classification* {
        for (std::size_t i = 0; i < v.covers.size(); ++i)
            if (v.covers[i].boxes.contains_point(BoxGrid(v.covers[i].delta), 0, p)) return &v.classes[i];
        return nullptr;
    };
    const Verdict& a = run_verdict(shipped("quadratic_s0.1"));
    const Classification* ca = find(a, SpherePoint::infinity());
    ok = ok && ca && ca->kind == CoverKind::Attracting;
    detail += std::string("s=0.1 {inf} ") + (ca ? to_string(ca->kind) : "missing");

    const Verdict& b = run_verdict(shipped("quadratic_s0.25"));
    const Classification* cb = find(b, SpherePoint::from_complex(0.0));
    ok = ok && cb && cb->kind == CoverKind::JTouching;
    detail += std::string(", s=0.25 bounded ") + (cb ? to_string(cb->kind) : "missing");

    const Verdict& c = run_verdict(shipped("golden_pair"));
    const Classification* cc = find(c, SpherePoint::from_complex(0.0));
    ok = ok && cc && cc->kind == CoverKind::SubRotative;
    detail += std::string(", golden {0} ") + (cc ? to_string(cc->kind) : "missing");
    return {ok, detail};
}

Outcome finiteness_bound() {
    bool ok = g_bif_bound_ok;
    for (const auto& [g, v] : g_runs) ok = ok && v.bound_ok && v.attracting <= v.bound;
    const Verdict& s01 = verdict_at(0.1);
    ok = ok && s01.attracting == 2 && s01.bound == 2;
    return {ok, fmt("%g runs within 2 d^N - 2; s=0.1 has %g attracting of bound %g", double(g_runs.size()),
                    s01.attracting, double(s01.bound))};
}

Outcome measure_zero_proxy() {
    const BifMeasure m = bif_measure_experiment(NoiseFamily::quadratic(), parameter_grid(20), 0.3, 0.01,
                                                VerdictParams{}, 0.01, 2.0);
    int max_bif = 0, res_err = 0, undecided = 0;
    for (const auto& e : m.entries) {
        max_bif = std::max(max_bif, e.n_bif);
        res_err += e.resolution_error;
        undecided += e.undecided;
        g_bif_bound_ok = g_bif_bound_ok && e.bound_ok;
    }
    const bool ok = m.fraction <= 0.05 && max_bif <= 2 && res_err == 0;
    return {ok, fmt("non-mean-stable fraction %.4f (%g undecided), max bifurcation points %g", m.fraction, undecided,
                    max_bif) +
                    fmt(", %g resolution errors", res_err)};
}

// Everything a seeded run emits, serialized.
std::string emitted_outputs() {
    std::ostringstream os;
    const Gdms g = quad(0.1);
    JuliaParams jp;
    jp.resolution = 48;
    const GridMask m = julia_forward(g, jp);
    const auto px = mask_layer(m, 0, Chart::Standard);
    os << mask_to_rle(m).dump() << std::string(px.begin(), px.end());
    os << lyapunov_to_json(lyapunov(g, SpherePoint::from_complex(0.3), 0, 500, 50, 3)).dump();
    const Verdict v = mean_stable_verdict(quad(0.2), VerdictParams{});
    os << verdict_to_json(v).dump();
    for (const auto& c : v.covers) os << cover_to_json(c).dump();
    std::vector<SpherePoint> pts{SpherePoint::from_complex(0.1), SpherePoint::from_complex({0.5, 0.3})};
    write_basin_csv(os, estimate_T_mc(g, v.covers, pts, 100, 200, 3));
    const TransitionOperator op(g, 32, 16);
    const auto f = field_layer(op.iterate(cover_indicator(v.covers[0], 32), 10), 0, Chart::Standard);
    os << std::string(f.begin(), f.end());
    write_cloud_csv(os, julia_backward(shipped("chaotic_pair"), 500, 3));
    write_orbit_csv(os, run_orbit(g, SpherePoint::from_complex(0.2), 0, 200, 3));
    return os.str();
}

Outcome determinism_and_replay() {
    // make sure there are certificates even when run alone
    verdict_at(0.1);
    verdict_at(0.2);
    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string a = emitted_outputs();
    omp_set_num_threads(3);
    const std::string b = emitted_outputs();
    const std::string c = emitted_outputs();
    omp_set_num_threads(threads);
    int certs = 0, replayed = 0;
    for (const auto& [g, v] : g_runs)
        for (const Classification& cl : v.classes) {
            if (!cl.certificate.ok) continue;
            ++certs;
            // through the JSON form, as a consumer would see it
            const StabilityCertificate back = certificate_from_json(json::parse(certificate_to_json(cl.certificate).dump()));
            replayed += replay_certificate(g, back);
        }
    const bool same = a == b && b == c;
    return {same && certs > 0 && replayed == certs,
            std::string(same ? "outputs identical at 1 and 3 threads" : "outputs DIFFER across thread counts") +
                fmt(", %g/%g certificates replay", replayed, certs)};
}

}  // namespace

int main(int argc, char** argv) {
    // optional: run a subset, e.g. "acceptance 1 3 7"
    std::vector<bool> want(14, argc <= 1);
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k >= 1 && k <= 13) want[std::size_t(k)] = true;
    }
    auto run = [&](int n, const char* title, Outcome (*f)()) {
        if (want[std::size_t(n)]) criterion(n, title, f);
    };
    std::printf("threads: %d\n", omp_get_max_threads());
    run(1, "bifurcation benchmark at c = 0", bifurcation_benchmark);
    run(2, "minimal-set census", census);
    run(3, "J-touching geometry at s = 1/4", j_touching_geometry);
    run(4, "mean-stability dichotomy", dichotomy);
    run(5, "negative Lyapunov exponent at s = 0.1", negative_lyapunov);
    run(6, "deterministic contrast z^2", deterministic_contrast);
    run(7, "basin consistency at s = 0.1", basin_consistency);
    run(8, "kernel Julia set and sample area", kernel_and_area);
    run(9, "Julia estimator ground truth", julia_ground_truth);
    run(10, "classification trichotomy", trichotomy);
    // 11 also checks the bifurcation runs of 1 and 12
    run(12, "measure-zero proxy on a 20x20 grid", measure_zero_proxy);
    run(11, "finiteness bound", finiteness_bound);
    run(13, "determinism and certificate replay", determinism_and_replay);
    std::printf("%d criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
