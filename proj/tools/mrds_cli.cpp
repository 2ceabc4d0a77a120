// mrds: batch front end for the library.
#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mrds/basin.hpp"
#include "mrds/bifurcation.hpp"
#include "mrds/error.hpp"
#include "mrds/io.hpp"
#include "mrds/julia.hpp"
#include "mrds/minimal.hpp"
#include "mrds/orbit.hpp"

using namespace mrds;
namespace fs = std::filesystem;

namespace {

constexpr int kExitSchema = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitNotStable = 3;
constexpr int kExitUndecided = 4;

struct Common {
    int threads = 0;
    std::uint64_t seed = 1;
    std::string out;
};

void add_common(CLI::App* c, Common& o) {
    c->add_option("--threads", o.threads, "worker threads (default: MRDS_THREADS or all cores)");
    c->add_option("--seed", o.seed, "master seed");
    c->add_option("--out", o.out, "output file or directory");
}

void apply_threads(const Common& o) {
    int n = o.threads;
    if (n <= 0)
        if (const char* env = std::getenv("MRDS_THREADS")) n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
}

SpherePoint parse_point(const std::string& s) {
    if (s == "inf") return SpherePoint::infinity();
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    in >> re;
    if (!in) throw Error(ErrorKind::InvalidArgument, "expected re,im but got '" + s + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw Error(ErrorKind::InvalidArgument, "expected re,im but got '" + s + "'");
    }
    return SpherePoint::from_complex({re, im});
}

// Writes to --out when given, else stdout.
void emit(const Common& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + o.out);
    f << text;
}

fs::path out_dir(const Common& o) {
    fs::path d = o.out.empty() ? fs::path(".") : fs::path(o.out);
    fs::create_directories(d);
    return d;
}

std::string layer_name(const std::string& stem, int v, Chart c) {
    return stem + "_v" + std::to_string(v + 1) + (c == Chart::Standard ? "_std" : "_inv") + ".pgm";
}

// Cover boxes drawn on a mask geometry: 255 cover, 128 marked background.
std::vector<std::uint8_t> overlay(const GridMask& base, const MinimalSetCover& c, int v, Chart chart) {
    auto px = mask_layer(base, v, chart);
    for (auto& x : px) x = x ? 128 : 0;
    const BoxGrid grid(c.delta);
    const int R = base.resolution();
    for (int row = 0; row < R; ++row)
        for (int ix = 0; ix < R; ++ix) {
            const CellRef cell{v, chart, ix, R - 1 - row};
            const cplx z = base.center(cell);
            const SpherePoint p = chart == Chart::Standard ? SpherePoint{Chart::Standard, z}
                                                           : SpherePoint{Chart::Inverted, z};
            if (c.boxes.contains_point(grid, v, p)) px[std::size_t(row) * std::size_t(R) + std::size_t(ix)] = 255;
        }
    return px;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov random dynamical systems of rational maps"};
    app.require_subcommand(1);
    Common common;
    std::string sys_path;
    int exit_code = 0;

    auto sys_cmd = [&](const char* name, const char* help) {
        CLI::App* c = app.add_subcommand(name, help);
        c->add_option("system", sys_path, "system description JSON")->required();
        add_common(c, common);
        return c;
    };

    // validate
    CLI::App* validate = sys_cmd("validate", "check a system description and report P, p and connectivity");
    validate->callback([&] {
        apply_threads(common); emit(common, dump(validation_report(load_system(sys_path)))); });

    // orbit
    std::string z0s = "0";
    int i0 = 1, steps = 1000, orbits = 1000;
    CLI::App* orbit = sys_cmd("orbit", "sample one orbit as CSV");
    orbit->add_option("--z0", z0s, "initial point re,im or inf");
    orbit->add_option("--i0", i0, "initial vertex (1-based)");
    orbit->add_option("--steps", steps);
    orbit->callback([&] {
        apply_threads(common);
        const Gdms g = load_system(sys_path);
        if (i0 < 1 || i0 > g.vertices()) throw Error(ErrorKind::InvalidArgument, "--i0 out of range");
        const OrbitRecord r = run_orbit(g, parse_point(z0s), i0 - 1, steps, common.seed);
        std::ostringstream os;
        write_orbit_csv(os, r);
        emit(common, os.str());
    });

    // lyapunov
    CLI::App* lyap = sys_cmd("lyapunov", "mean Lyapunov exponent over independent orbits");
    lyap->add_option("--z0", z0s);
    lyap->add_option("--i0", i0);
    lyap->add_option("--steps", steps);
    lyap->add_option("--orbits", orbits);
    lyap->callback([&] {
        apply_threads(common);
        const Gdms g = load_system(sys_path);
        if (i0 < 1 || i0 > g.vertices()) throw Error(ErrorKind::InvalidArgument, "--i0 out of range");
        emit(common, dump(lyapunov_to_json(lyapunov(g, parse_point(z0s), i0 - 1, steps, orbits, common.seed))));
    });

    // julia
    JuliaParams jp;
    std::string method = "forward";
    int points = 10000;
    CLI::App* julia = sys_cmd("julia", "Julia set estimate: forward mask or backward point cloud");
    julia->add_option("--res", jp.resolution);
    julia->add_option("--method", method)->check(CLI::IsMember({"forward", "backward"}));
    julia->add_option("--depth", jp.depth, "forward word length");
    julia->add_option("--words", jp.words, "forward words per cell");
    julia->add_option("--points", points, "backward cloud size");
    julia->callback([&] {
        apply_threads(common);
        const Gdms g = load_system(sys_path);
        const fs::path dir = out_dir(common);
        jp.seed = common.seed;
        if (method == "forward") {
            const GridMask m = julia_forward(g, jp);
            for (int v = 0; v < g.vertices(); ++v)
                for (Chart c : {Chart::Standard, Chart::Inverted})
                    write_pgm((dir / layer_name("julia", v, c)).string(), m.resolution(), m.resolution(),
                              mask_layer(m, v, c));
            std::ofstream(dir / "julia_mask.json") << mask_to_rle(m).dump() << "\n";
        } else {
            std::ofstream f(dir / "julia_cloud.csv");
            write_cloud_csv(f, julia_backward(g, points, common.seed));
        }
    });

    // minimal / verdict share detection parameters
    VerdictParams vp;
    int overlay_res = 256;
    auto detect_opts = [&](CLI::App* c) {
        c->add_option("--seeds", vp.detect.n_seeds, "random tail seeds");
        c->add_option("--delta", vp.detect.delta, "cover box size");
        c->add_option("--orbit-len", vp.detect.orbit_len);
    };
    CLI::App* minimal = sys_cmd("minimal", "detect and classify minimal sets");
    detect_opts(minimal);
    minimal->add_option("--overlay-res", overlay_res, "resolution of the cover overlay images");
    minimal->callback([&] {
        apply_threads(common);
        const Gdms g = load_system(sys_path);
        vp.detect.seed = common.seed;
        vp.julia.seed = common.seed;
        const Verdict v = mean_stable_verdict(g, vp);
        const fs::path dir = out_dir(common);
        json sets = json::array();
        for (std::size_t i = 0; i < v.covers.size(); ++i) {
            json s = cover_to_json(v.covers[i]);
            s["classification"] = classification_to_json(v.classes[i]);
            sets.push_back(std::move(s));
        }
        std::ofstream(dir / "minimal.json") << dump(json{{"minimal_sets", sets}});
        const GridMask blank(overlay_res, g.vertices());
        for (std::size_t i = 0; i < v.covers.size(); ++i)
            for (int k = 0; k < g.vertices(); ++k)
                for (Chart c : {Chart::Standard, Chart::Inverted})
                    write_pgm((dir / layer_name("cover" + std::to_string(i + 1), k, c)).string(), overlay_res,
                              overlay_res, overlay(blank, v.covers[i], k, c));
    });

    CLI::App* verdict = sys_cmd("verdict", "mean-stability verdict (exit 0 stable, 3 not, 4 undecided)");
    detect_opts(verdict);
    verdict->callback([&] {
        apply_threads(common);
        const Gdms g = load_system(sys_path);
        vp.detect.seed = common.seed;
        vp.julia.seed = common.seed;
        const Verdict v = mean_stable_verdict(g, vp);
        emit(common, dump(verdict_to_json(v)));
        exit_code = v.undecided ? kExitUndecided : v.mean_stable ? 0 : kExitNotStable;
    });

    // basin
    int basin_res = 16, basin_orbits = 1000, basin_len = 500, op_steps = 0, quad = 64;
    CLI::App* basin = sys_cmd("basin", "basin probabilities of the detected minimal sets");
    detect_opts(basin);
    basin->add_option("--res", basin_res, "grid resolution");
    basin->add_option("--orbits", basin_orbits, "Monte Carlo orbits per start");
    basin->add_option("--len", basin_len, "orbit length");
    basin->add_option("--operator", op_steps, "iterate the transition operator n times instead");
    basin->add_option("--quadrature", quad, "operator quadrature size per disk edge");
    basin->callback([&] {
        apply_threads(common);
        const Gdms g = load_system(sys_path);
        vp.detect.seed = common.seed;
        const auto sets = detect_minimal_sets(g, vp.detect);
        const fs::path dir = out_dir(common);
        const int m = g.vertices();
        if (op_steps > 0) {
            const TransitionOperator op(g, basin_res, quad);
            std::ofstream csv(dir / "basin.csv");
            csv << "set,vertex,chart,re,im,value\n";
            csv.precision(17);
            for (std::size_t L = 0; L < sets.size(); ++L) {
                const GridField f = op.iterate(cover_indicator(sets[L], basin_res), op_steps);
                const GridMask& geo = f.geometry;
                for (std::size_t i = 0; i < geo.cells(); ++i) {
                    const CellRef c = geo.cell(i);
                    const cplx z = geo.center(c);
                    csv << L + 1 << ',' << c.vertex + 1 << ',' << (c.chart == Chart::Standard ? "std" : "inv") << ','
                        << z.real() << ',' << z.imag() << ',' << f.values[i] << '\n';
                }
                for (int v = 0; v < m; ++v)
                    for (Chart ch : {Chart::Standard, Chart::Inverted})
                        write_pgm((dir / layer_name("basin" + std::to_string(L + 1), v, ch)).string(), basin_res,
                                  basin_res, field_layer(f, v, ch));
            }
            return;
        }
        // Standard-chart cell centers of the grid.
        const GridMask geo(basin_res, 1);
        std::vector<SpherePoint> pts;
        for (int iy = 0; iy < basin_res; ++iy)
            for (int ix = 0; ix < basin_res; ++ix)
                pts.push_back(SpherePoint::from_complex(geo.center(CellRef{0, Chart::Standard, ix, iy})));
        const BasinEstimate b = estimate_T_mc(g, sets, pts, basin_orbits, basin_len, common.seed);
        std::ofstream csv(dir / "basin.csv");
        write_basin_csv(csv, b);
        for (std::size_t L = 0; L < sets.size(); ++L)
            for (int v = 0; v < m; ++v) {
                GridField f(basin_res, m);
                for (int iy = 0; iy < basin_res; ++iy)
                    for (int ix = 0; ix < basin_res; ++ix) {
                        const std::size_t pt = std::size_t(iy) * std::size_t(basin_res) + std::size_t(ix);
                        f.values[f.geometry.index(CellRef{v, Chart::Standard, ix, iy})] =
                            b.value[L][pt * std::size_t(m) + std::size_t(v)];
                    }
                write_pgm((dir / layer_name("basin" + std::to_string(L + 1), v, Chart::Standard)).string(),
                          basin_res, basin_res, field_layer(f, v, Chart::Standard));
            }
    });

    // bifurcation scans
    std::string family = "quadratic", cs = "0,0";
    double s_lo = 0.01, s_hi = 2.0, tol = 0.01, s_fixed = 0.3;
    int grid_n = 20;
    std::string jsonl;
    auto fam_opts = [&](CLI::App* c) {
        c->add_option("--family", family)->check(CLI::IsMember({"quadratic"}));
        c->add_option("--s-lo", s_lo);
        c->add_option("--s-hi", s_hi);
        c->add_option("--tol", tol);
        c->add_option("--delta", vp.detect.delta, "cover box size");
        c->add_option("--seeds", vp.detect.n_seeds);
        add_common(c, common);
    };
    CLI::App* bif_scan = app.add_subcommand("bif-scan", "bifurcation points in s for one parameter");
    fam_opts(bif_scan);
    bif_scan->add_option("--c", cs, "parameter re,im");
    bif_scan->callback([&] {
        apply_threads(common);
        vp.detect.seed = common.seed;
        vp.julia.seed = common.seed;
        const cplx lambda = parse_point(cs).to_complex();
        emit(common, dump(bif_report_to_json(find_bif_points(NoiseFamily::quadratic(), lambda, s_lo, s_hi, tol, vp))));
    });

    CLI::App* bif_measure = app.add_subcommand("bif-measure", "non-mean-stable fraction over a parameter grid");
    fam_opts(bif_measure);
    bif_measure->add_option("--grid", grid_n, "n x n grid over [-1,1]^2");
    bif_measure->add_option("--s", s_fixed, "noise level for the stability fraction");
    bif_measure->add_option("--jsonl", jsonl, "also write one report per parameter as JSON lines");
    bif_measure->callback([&] {
        apply_threads(common);
        vp.detect.seed = common.seed;
        vp.julia.seed = common.seed;
        const BifMeasure bm = bif_measure_experiment(NoiseFamily::quadratic(), parameter_grid(grid_n), s_fixed, tol,
                                                     vp, s_lo, s_hi);
        std::ostringstream os;
        os.precision(17);
        os << "re,im,mean_stable,undecided,n_bif,bound_ok,resolution_error,s_star\n";
        for (const auto& e : bm.entries) {
            os << e.lambda.real() << ',' << e.lambda.imag() << ',' << e.mean_stable << ',' << e.undecided << ','
               << e.n_bif << ',' << e.bound_ok << ',' << e.resolution_error << ',';
            for (std::size_t k = 0; k < e.points.size(); ++k) os << (k ? ";" : "") << e.points[k];
            os << '\n';
        }
        emit(common, os.str());
        if (!jsonl.empty()) {
            std::ofstream f(jsonl);
            for (const auto& e : bm.entries)
                f << json{{"lambda", json::array({e.lambda.real(), e.lambda.imag()})},
                          {"mean_stable", e.mean_stable},
                          {"undecided", e.undecided},
                          {"bif_points", e.points},
                          {"bound_ok", e.bound_ok},
                          {"resolution_error", e.resolution_error}}
                         .dump()
                  << '\n';
        }
        std::cerr << "non-mean-stable fraction " << bm.fraction << "\n";
    });

    // chaotic
    int chaos_res = 128;
    CLI::App* chaotic = sys_cmd("chaotic", "check for a full Julia set and a single full minimal set");
    chaotic->add_option("--res", chaos_res);
    chaotic->callback([&] {
        apply_threads(common);
        emit(common, dump(chaotic_to_json(chaotic_check(load_system(sys_path), chaos_res, common.seed))));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitSchema;
    } catch (const Error& e) {
        std::cerr << "mrds: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Schema:
            case ErrorKind::InvalidMap:
            case ErrorKind::InvalidArgument:
            case ErrorKind::Irreducible:
            case ErrorKind::Stochasticity: return kExitSchema;
            case ErrorKind::BudgetExceeded: return kExitUndecided;
            default: return kExitNumeric;
        }
    } catch (const std::exception& e) {
        std::cerr << "mrds: " << e.what() << "\n";
        return kExitNumeric;
    }
    return exit_code;
}
