#include "mrds/julia.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrds/error.hpp"
#include "mrds/rng.hpp"

namespace mrds {

namespace {

constexpr int kProbes = 5;
constexpr double kCollapsed = 1e-10;
constexpr int kRingWords = 24;

void make_probes(Chart chart, cplx c, double half, SpherePoint* out) {
    out[0] = {chart, c};
    out[1] = {chart, c + cplx{half, half}};
    out[2] = {chart, c + cplx{-half, half}};
    out[3] = {chart, c + cplx{half, -half}};
    out[4] = {chart, c + cplx{-half, -half}};
}

// Constant words: the boundary circle(s) and center of each self-loop family.
std::vector<RationalMap> constant_words(const MapFamily& f) {
    std::vector<RationalMap> out;
    if (f.kind() == FamilyKind::Atoms) {
        for (const Atom& a : f.atom_list()) out.push_back(a.map);
        return out;
    }
    const DiskFamily& d = f.disk_params();
    if (d.inner_radius == 0.0) out.push_back(f.map_at(d.center));
    if (d.radius == 0.0) return out;
    for (double r : {d.radius, d.inner_radius}) {
        if (r == 0.0) continue;
        for (int t = 0; t < kRingWords; ++t)
            out.push_back(f.map_at(d.center + std::polar(r, 2.0 * std::numbers::pi * t / kRingWords)));
        if (d.inner_radius == d.radius) break;
    }
    return out;
}

}  // namespace

double probe_diameter(const SpherePoint* probes, int n) {
    double d = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) d = std::max(d, chordal_dist(probes[a], probes[b]));
    return d;
}

JuliaTester::JuliaTester(const Gdms& g, JuliaParams p) : g_(&g), p_(p) {
    if (p_.depth < 1 || p_.words < 1) throw Error(ErrorKind::InvalidArgument, "julia budgets must be positive");
    nets_ = g.nets(p_.net_delta);
    deterministic_ = g.deterministic();
    periodic_.assign(std::size_t(g.vertices()), {});
    if (p_.periodic_words && !deterministic_) {
        for (const Edge& e : g.edges()) {
            if (e.from != e.to) continue;
            std::vector<RationalMap> w = constant_words(e.family);
            auto& dst = periodic_[std::size_t(e.from)];
            dst.insert(dst.end(), w.begin(), w.end());
        }
    }
}

bool JuliaTester::run_constant(const RationalMap& f, SpherePoint* probes) const {
    for (int t = 0; t < p_.depth; ++t) {
        for (int k = 0; k < kProbes; ++k) probes[k] = f.eval(probes[k]);
        const double d = probe_diameter(probes, kProbes);
        if (d >= p_.theta) return true;
        if (d < kCollapsed) return false;
    }
    return false;
}

bool JuliaTester::run_word(int v, SpherePoint* probes, std::uint64_t stream, int word) const {
    CounterRng rng(p_.seed, stream, std::uint64_t(word));
    for (int t = 0; t < p_.depth; ++t) {
        const std::vector<int>& outs = g_->out_edges(v);
        const int e = outs[std::size_t(rng.below(outs.size()))];
        const std::vector<RationalMap>& net = nets_[std::size_t(e)];
        const RationalMap& f = net[std::size_t(rng.below(net.size()))];
        for (int k = 0; k < kProbes; ++k) probes[k] = f.eval(probes[k]);
        v = g_->edge(e).to;
        const double d = probe_diameter(probes, kProbes);
        if (d >= p_.theta) return true;
        if (d < kCollapsed) return false;
    }
    return false;
}

bool JuliaTester::square_is_julia(int v, Chart chart, cplx center, double half, std::uint64_t stream) const {
    SpherePoint start[kProbes], probes[kProbes];
    make_probes(chart, center, half, start);
    for (const RationalMap& f : periodic_[std::size_t(v)]) {
        std::copy(start, start + kProbes, probes);
        if (run_constant(f, probes)) return true;
    }
    const int words = deterministic_ ? 1 : p_.words;
    for (int w = 0; w < words; ++w) {
        std::copy(start, start + kProbes, probes);
        if (run_word(v, probes, stream, w)) return true;
    }
    return false;
}

bool JuliaTester::cell_is_julia(const GridMask& geometry, const CellRef& c) const {
    return square_is_julia(c.vertex, c.chart, geometry.center(c), 0.5 * geometry.cell_size(), geometry.index(c));
}

GridMask julia_forward(const Gdms& g, const JuliaParams& p) {
    const JuliaTester tester(g, p);
    GridMask mask(p.resolution, g.vertices());
    const long n = long(mask.cells());
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) mask.set(std::size_t(i), tester.cell_is_julia(mask, mask.cell(std::size_t(i))));
    return mask;
}

GridMask julia_forward_serial(const Gdms& g, const JuliaParams& p) {
    const JuliaTester tester(g, p);
    GridMask mask(p.resolution, g.vertices());
    for (std::size_t i = 0; i < mask.cells(); ++i) mask.set(i, tester.cell_is_julia(mask, mask.cell(i)));
    return mask;
}

std::pair<SpherePoint, int> repelling_seed(const Gdms& g, double net_delta) {
    const auto nets = g.nets(net_delta);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const Edge& ed = g.edge(int(e));
        if (ed.from != ed.to) continue;
        for (const RationalMap& f : nets[e]) {
            for (const SpherePoint& z : f.fixed_points()) {
                if (f.multiplier(z) > 1.0 + 1e-6) return {z, ed.from};
            }
        }
    }
    throw Error(ErrorKind::SeedFailure, "no repelling fixed point among self-loop net maps");
}

std::vector<std::pair<SpherePoint, int>> julia_backward(const Gdms& g, int n_points, std::uint64_t seed,
                                                        double net_delta) {
    if (n_points < 1) throw Error(ErrorKind::InvalidArgument, "n_points must be positive");
    auto [z, v] = repelling_seed(g, net_delta);
    const auto nets = g.nets(net_delta);
    CounterRng rng(seed, 0);
    std::vector<std::pair<SpherePoint, int>> cloud;
    cloud.reserve(std::size_t(n_points));
    constexpr int kDiscard = 100;
    for (int k = 0; k < n_points + kDiscard; ++k) {
        rng.set_step(std::uint64_t(k));
        const std::vector<int>& ins = g.in_edges(v);
        const int e = ins[std::size_t(rng.below(ins.size()))];
        const std::vector<RationalMap>& net = nets[std::size_t(e)];
        const RationalMap& f = net[std::size_t(rng.below(net.size()))];
        const std::vector<Preimage> pre = f.preimages(z);
        std::vector<SpherePoint> pts;
        for (const Preimage& q : pre)
            for (int m = 0; m < q.multiplicity; ++m) pts.push_back(q.point);
        z = pts[std::size_t(rng.below(pts.size()))];
        v = g.edge(e).from;
        if (k >= kDiscard) cloud.emplace_back(z, v);
    }
    return cloud;
}

KernelReport kernel_julia_empty(const Gdms& g, const GridMask& mask, double net_delta) {
    const auto nets = g.nets(net_delta);
    GridMask K = mask;
    const int R = K.resolution();
    const double h = K.cell_size();
    const double reach = 0.5 * std::numbers::sqrt2 * h * 1.5;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < K.cells(); ++i)
        if (K.get(i)) live.push_back(i);

    // Could f send cell c completely off K?
    auto escapes = [&](const CellRef& c, const Edge& e, const RationalMap& f) {
        const cplx x = K.center(c);
        const SpherePoint y = canonical(f.eval({c.chart, x}));
        const ChartJet jet = f.local(c.chart, x, y.chart);
        if (jet.pole) return false;
        const double r = std::abs(jet.deriv) * reach;
        if (r > 0.25) return false;
        const double lo_x = y.coord.real() - r, hi_x = y.coord.real() + r;
        const double lo_y = y.coord.imag() - r, hi_y = y.coord.imag() + r;
        const int x0 = std::max(0, int(std::floor((lo_x + kGridExtent) / h)));
        const int x1 = std::min(R - 1, int(std::floor((hi_x + kGridExtent) / h)));
        const int y0 = std::max(0, int(std::floor((lo_y + kGridExtent) / h)));
        const int y1 = std::min(R - 1, int(std::floor((hi_y + kGridExtent) / h)));
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix)
                if (K.get(CellRef{e.to, y.chart, ix, iy})) return false;
        return true;
    };

    KernelReport rep;
    bool changed = true;
    while (changed && !live.empty()) {
        changed = false;
        ++rep.sweeps;
        std::vector<std::size_t> keep;
        for (std::size_t i : live) {
            const CellRef c = K.cell(i);
            bool out = false;
            for (int e : g.out_edges(c.vertex)) {
                for (const RationalMap& f : nets[std::size_t(e)])
                    if (escapes(c, g.edge(e), f)) {
                        out = true;
                        break;
                    }
                if (out) break;
            }
            if (out) {
                K.set(i, false);
                changed = true;
            } else {
                keep.push_back(i);
            }
        }
        live.swap(keep);
    }
    rep.empty = live.empty();
    for (std::size_t i : live) rep.remaining.push_back(K.cell(i));
    return rep;
}

AreaSample sample_julia_area(const Gdms& g, std::uint64_t seed, int resolution, int depth, double theta) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be positive");
    CounterRng rng(seed, 0);
    // Initial vertex drawn from p, then one chain path.
    double u = rng.uniform();
    int v = g.vertices() - 1;
    for (int i = 0; i < g.vertices(); ++i) {
        if (u < g.stationary()[std::size_t(i)]) {
            v = i;
            break;
        }
        u -= g.stationary()[std::size_t(i)];
    }
    AreaSample out;
    out.vertex = v;
    std::vector<RationalMap> word;
    int cur = v;
    for (int t = 0; t < depth; ++t) {
        rng.set_step(std::uint64_t(t) + 1);
        const Gdms::Step s = g.sample_step(cur, rng);
        word.push_back(g.edge(s.edge).family.map_for(s.choice));
        cur = g.edge(s.edge).to;
    }
    GridMask mask(resolution, g.vertices());
    const long per = long(mask.cells_per_vertex());
    const std::size_t base = std::size_t(v) * mask.cells_per_vertex();
    const double half = 0.5 * mask.cell_size();
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < per; ++k) {
        const std::size_t i = base + std::size_t(k);
        const CellRef c = mask.cell(i);
        if (mask.area_weight(c) == 0.0) continue;
        SpherePoint probes[kProbes];
        make_probes(c.chart, mask.center(c), half, probes);
        bool hit = false;
        for (const RationalMap& f : word) {
            for (int j = 0; j < kProbes; ++j) probes[j] = f.eval(probes[j]);
            const double d = probe_diameter(probes, kProbes);
            if (d >= theta) {
                hit = true;
                break;
            }
            if (d < kCollapsed) break;
        }
        mask.set(i, hit);
    }
    out.fraction = mask.area_fraction(v);
    out.mask = std::move(mask);
    return out;
}

}  // namespace mrds
