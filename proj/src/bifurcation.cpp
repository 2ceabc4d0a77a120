#include "mrds/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "mrds/error.hpp"

namespace mrds {

NoiseFamily NoiseFamily::quadratic() {
    return NoiseFamily([](cplx c, double s) { return Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::quadratic(c, s)}}); },
                       "quadratic");
}

NoiseFamily NoiseFamily::from_template(const Gdms& base) {
    double rmax = 0.0;
    for (const Edge& e : base.edges())
        if (e.family.kind() == FamilyKind::Disk) rmax = std::max(rmax, e.family.disk_params().radius);
    return NoiseFamily(
        [base, rmax](cplx, double s) {
            std::vector<Edge> edges = base.edges();
            for (Edge& e : edges)
                if (e.family.kind() == FamilyKind::Disk && rmax > 0.0)
                    e.family = e.family.with_radius(s * e.family.disk_params().radius / rmax);
            return Gdms::build(base.vertices(), std::move(edges));
        },
        "template");
}

ScanResult scan_s(const NoiseFamily& fam, cplx lambda, const std::vector<double>& s_grid, const VerdictParams& p) {
    if (!std::is_sorted(s_grid.begin(), s_grid.end()) || s_grid.empty() || s_grid.front() <= 0.0)
        throw Error(ErrorKind::InvalidArgument, "s grid must be ascending and positive");
    ScanResult out;
    for (double s : s_grid) {
        const Verdict v = mean_stable_verdict(fam.build(lambda, s), p);
        out.entries.push_back({s, int(v.covers.size()), v.mean_stable, v.undecided});
    }
    for (std::size_t k = 1; k < out.entries.size(); ++k)
        if (out.entries[k].count > out.entries[k - 1].count) out.monotone = false;
    return out;
}

int minimal_count(const NoiseFamily& fam, cplx lambda, double s, const DetectParams& p) {
    return int(detect_minimal_sets(fam.build(lambda, s), p).size());
}

BifReport find_bif_points(const NoiseFamily& fam, cplx lambda, double s_lo, double s_hi, double tol,
                          const VerdictParams& p) {
    if (tol < 1e-3) throw Error(ErrorKind::InvalidArgument, "tol must be >= 1e-3");
    if (!(s_lo > 0.0) || !(s_hi > s_lo)) throw Error(ErrorKind::InvalidArgument, "bad s bracket");
    BifReport rep;
    rep.lambda = lambda;
    auto count = [&](double s) {
        const int n = minimal_count(fam, lambda, s, p.detect);
        rep.evaluations.push_back({s, n, false, false});
        return n;
    };
    std::vector<double> drops;
    // Recursive bisection on [a, b] with known counts.
    auto rec = [&](auto&& self, double a, int ca, double b, int cb) -> void {
        if (cb > ca) {
            std::ostringstream os;
            os << "minimal-set count rises from " << ca << " at s=" << a << " to " << cb << " at s=" << b;
            throw Error(ErrorKind::Resolution, os.str());
        }
        if (cb == ca) return;
        if (b - a <= tol) {
            drops.push_back(0.5 * (a + b));
            return;
        }
        const double m = 0.5 * (a + b);
        const int cm = count(m);
        self(self, a, ca, m, cm);
        self(self, m, cm, b, cb);
    };
    rec(rec, s_lo, count(s_lo), s_hi, count(s_hi));

    const Gdms g0 = fam.build(lambda, 0.0);
    const Verdict v0 = mean_stable_verdict(g0, p);
    rep.evaluations.insert(rep.evaluations.begin(), ScanEntry{0.0, int(v0.covers.size()), v0.mean_stable, v0.undecided});
    if (!v0.mean_stable) rep.points.push_back(0.0);
    rep.points.insert(rep.points.end(), drops.begin(), drops.end());
    rep.alpha = 2 * std::lround(std::pow(double(g0.max_degree()), double(g0.shortest_loop(0)))) - 2;
    rep.bound_ok = long(rep.points.size()) <= rep.alpha;
    return rep;
}

BifMeasure bif_measure_experiment(const NoiseFamily& fam, const std::vector<cplx>& lambdas, double s_fixed,
                                  double tol, const VerdictParams& p, double s_lo, double s_hi) {
    if (!(s_fixed > 0.0)) throw Error(ErrorKind::InvalidArgument, "s must be positive");
    BifMeasure out;
    out.entries.resize(lambdas.size());
    const long n = long(lambdas.size());
    std::exception_ptr first;
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) {
        try {
            BifMeasureEntry& e = out.entries[std::size_t(k)];
            e.lambda = lambdas[std::size_t(k)];
            const Verdict v = mean_stable_verdict(fam.build(e.lambda, s_fixed), p);
            e.mean_stable = v.mean_stable;
            e.undecided = v.undecided;
            try {
                const BifReport r = find_bif_points(fam, e.lambda, s_lo, s_hi, tol, p);
                e.points = r.points;
                e.n_bif = int(r.points.size());
                e.bound_ok = r.bound_ok;
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::Resolution) throw;
                e.resolution_error = true;
                e.bound_ok = false;
            }
        } catch (...) {
#pragma omp critical
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
    std::size_t bad = 0;
    for (const BifMeasureEntry& e : out.entries) bad += e.mean_stable ? 0 : 1;
    out.fraction = lambdas.empty() ? 0.0 : double(bad) / double(lambdas.size());
    return out;
}

}  // namespace mrds

namespace mrds {

std::vector<cplx> parameter_grid(int n, double lo, double hi) {
    if (n < 1 || !(hi > lo)) throw Error(ErrorKind::InvalidArgument, "bad parameter grid");
    std::vector<cplx> out;
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.emplace_back(lo + (j + 0.5) * h, lo + (i + 0.5) * h);
    return out;
}

}  // namespace mrds
