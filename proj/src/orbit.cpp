#include "mrds/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mrds/error.hpp"

namespace mrds {

OrbitRecord run_orbit(const Gdms& g, const SpherePoint& z0, int i0, int n, std::uint64_t seed,
                      std::uint64_t stream) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "orbit length must be >= 1");
    if (i0 < 0 || i0 >= g.vertices()) throw Error(ErrorKind::InvalidArgument, "initial vertex out of range");
    OrbitRecord rec;
    rec.initial = normalize(z0);
    rec.initial_vertex = i0;
    rec.seed = seed;
    rec.stream = stream;
    rec.steps.reserve(std::size_t(n));
    CounterRng rng(seed, stream);
    SpherePoint z = rec.initial;
    int v = i0;
    for (int k = 0; k < n; ++k) {
        rng.set_step(std::uint64_t(k));
        const Gdms::Step s = g.sample_step(v, rng);
        const Edge& e = g.edge(s.edge);
        OrbitStep st;
        st.edge = s.edge;
        st.choice = s.choice;
        st.vertex = e.to;
        double norm = 0.0;
        st.point = e.family.map_for(s.choice).eval_with_norm(z, norm);
        st.log_deriv = std::log(std::max(norm, kLyapunovFloor));
        z = st.point;
        v = e.to;
        rec.steps.push_back(st);
    }
    return rec;
}

namespace {

// Birkhoff average along one orbit, without storing it.
double birkhoff(const Gdms& g, SpherePoint z, int v, int n, std::uint64_t seed, std::uint64_t stream,
                bool& clamped) {
    CounterRng rng(seed, stream);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        rng.set_step(std::uint64_t(k));
        const Gdms::Step s = g.sample_step(v, rng);
        const Edge& e = g.edge(s.edge);
        double norm = 0.0;
        z = e.family.map_for(s.choice).eval_with_norm(z, norm);
        if (norm < kLyapunovFloor) {
            norm = kLyapunovFloor;
            clamped = true;
        }
        sum += std::log(norm);
        v = e.to;
    }
    return sum / n;
}

LyapunovEstimate summarize(const std::vector<double>& vals, const std::vector<char>& flags, int n) {
    LyapunovEstimate est;
    est.n_steps = n;
    est.n_orbits = int(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= double(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    if (vals.size() > 1) var /= double(vals.size() - 1);
    est.value = mean;
    est.ci95_halfwidth = 1.96 * std::sqrt(var / double(vals.size()));
    est.clamped = std::any_of(flags.begin(), flags.end(), [](char c) { return c != 0; });
    return est;
}

void check_lyapunov(const Gdms& g, int i0, int n, int n_orbits) {
    if (n < 100) throw Error(ErrorKind::InvalidArgument, "lyapunov needs n >= 100");
    if (n_orbits < 1) throw Error(ErrorKind::InvalidArgument, "n_orbits must be >= 1");
    if (i0 < 0 || i0 >= g.vertices()) throw Error(ErrorKind::InvalidArgument, "initial vertex out of range");
}

}  // namespace

LyapunovEstimate lyapunov(const Gdms& g, const SpherePoint& z0, int i0, int n, int n_orbits,
                          std::uint64_t seed) {
    check_lyapunov(g, i0, n, n_orbits);
    const SpherePoint z = normalize(z0);
    std::vector<double> vals(std::size_t(n_orbits), 0.0);
    std::vector<char> flags(std::size_t(n_orbits), 0);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n_orbits; ++k) {
        bool c = false;
        vals[std::size_t(k)] = birkhoff(g, z, i0, n, seed, std::uint64_t(k), c);
        flags[std::size_t(k)] = c;
    }
    return summarize(vals, flags, n);
}

LyapunovEstimate lyapunov_serial(const Gdms& g, const SpherePoint& z0, int i0, int n, int n_orbits,
                                 std::uint64_t seed) {
    check_lyapunov(g, i0, n, n_orbits);
    const SpherePoint z = normalize(z0);
    std::vector<double> vals;
    std::vector<char> flags;
    for (int k = 0; k < n_orbits; ++k) {
        bool c = false;
        vals.push_back(birkhoff(g, z, i0, n, seed, std::uint64_t(k), c));
        flags.push_back(c);
    }
    return summarize(vals, flags, n);
}

double escape_radius(const Gdms& g) {
    if (!g.all_polynomial()) throw Error(ErrorKind::Unsupported, "escape check needs polynomial generators");
    double R = 0.0;
    for (const std::vector<RationalMap>& net : g.nets())
        for (const RationalMap& f : net) {
            const std::vector<cplx> a = f.numerator();
            const double lead = std::abs(a[std::size_t(f.degree())]);
            double s = 0.0;
            for (const cplx& c : a) s += std::abs(c);
            R = std::max(R, 1.0 + s / lead);
        }
    return R;
}

EscapeResult escape_check(const Gdms& g, const OrbitRecord& record) {
    EscapeResult r;
    r.radius = escape_radius(g);
    for (std::size_t k = 0; k < record.size(); ++k) {
        if (record.point(k).modulus() >= r.radius) {
            r.escaped = true;
            r.index = int(k);
            break;
        }
    }
    return r;
}

std::vector<std::pair<SpherePoint, int>> omega_tail(const OrbitRecord& record, double burn_in) {
    if (record.size() < 10) throw Error(ErrorKind::InvalidArgument, "orbit too short for a tail");
    const std::size_t start = std::size_t(std::floor(burn_in * double(record.size())));
    std::vector<std::pair<SpherePoint, int>> out;
    for (std::size_t k = start; k < record.size(); ++k) {
        const SpherePoint& z = record.point(k);
        const int v = record.vertex(k);
        const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& q) {
            return q.second == v && chordal_dist(q.first, z) < 1e-4;
        });
        if (!dup) out.emplace_back(z, v);
    }
    return out;
}

void write_orbit_csv(std::ostream& os, const OrbitRecord& record) {
    os << "step,vertex,edge,re,im,chart,log_deriv_norm\n";
    os.precision(17);
    auto row = [&](std::size_t k, int edge, double ld) {
        const SpherePoint& z = record.point(k);
        os << k << ',' << record.vertex(k) + 1 << ',' << edge << ',' << z.coord.real() << ',' << z.coord.imag()
           << ',' << (z.chart == Chart::Standard ? "std" : "inv") << ',' << ld << '\n';
    };
    row(0, -1, 0.0);
    for (std::size_t k = 1; k < record.size(); ++k)
        row(k, record.steps[k - 1].edge + 1, record.steps[k - 1].log_deriv);
}

}  // namespace mrds
