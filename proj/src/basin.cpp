#include "mrds/basin.hpp"

#include <algorithm>
#include <cmath>

#include "mrds/error.hpp"
#include "mrds/rng.hpp"

namespace mrds {

namespace {

struct Dilated {
    BoxGrid grid;
    BoxSet boxes;
};

std::vector<Dilated> dilated_sets(const std::vector<MinimalSetCover>& sets, int k) {
    std::vector<Dilated> out;
    for (const MinimalSetCover& c : sets) {
        BoxGrid grid(c.delta);
        out.push_back({grid, dilate(grid, c.boxes, k)});
    }
    return out;
}

// Index of the set holding the whole tail, or -1.
int attribute(const Gdms& g, const std::vector<Dilated>& sets, SpherePoint z, int v, int length,
              std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    const int tail = length - std::max(1, length / 10);
    std::uint64_t alive = sets.size() >= 64 ? ~0ULL : ((1ULL << sets.size()) - 1);
    for (int t = 0; t < length && alive; ++t) {
        rng.set_step(std::uint64_t(t));
        const Gdms::Step s = g.sample_step(v, rng);
        const Edge& e = g.edge(s.edge);
        z = e.family.map_for(s.choice).eval(z);
        v = e.to;
        if (t < tail) continue;
        for (std::size_t k = 0; k < sets.size(); ++k)
            if ((alive >> k & 1) && !sets[k].boxes.contains_point(sets[k].grid, v, z)) alive &= ~(1ULL << k);
    }
    for (std::size_t k = 0; k < sets.size(); ++k)
        if (alive >> k & 1) return int(k);
    return -1;
}

BasinEstimate basin_impl(const Gdms& g, const std::vector<MinimalSetCover>& sets,
                         const std::vector<SpherePoint>& points, int n_orbits, int length, std::uint64_t seed,
                         int dilate_boxes, bool parallel) {
    if (n_orbits < 1 || length < 10) throw Error(ErrorKind::InvalidArgument, "basin budgets too small");
    if (sets.size() > 64) throw Error(ErrorKind::InvalidArgument, "at most 64 minimal sets");
    const std::vector<Dilated> dil = dilated_sets(sets, dilate_boxes);
    const int m = g.vertices();
    const std::size_t starts = points.size() * std::size_t(m);
    const long total = long(starts) * n_orbits;
    std::vector<int> owner(std::size_t(total), -1);
    auto run = [&](long idx) {
        const std::size_t st = std::size_t(idx / n_orbits);
        const SpherePoint z = normalize(points[st / std::size_t(m)]);
        owner[std::size_t(idx)] = attribute(g, dil, z, int(st % std::size_t(m)), length, seed, std::uint64_t(idx));
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < total; ++i) run(i);
    } else {
        for (long i = 0; i < total; ++i) run(i);
    }

    BasinEstimate est;
    est.points = points;
    est.vertices = m;
    est.n_orbits = n_orbits;
    est.length = length;
    est.value.assign(sets.size(), std::vector<double>(starts, 0.0));
    est.ci95.assign(sets.size(), std::vector<double>(starts, 0.0));
    est.undecided.assign(starts, 0.0);
    est.averaged.assign(sets.size(), std::vector<double>(points.size(), 0.0));
    for (std::size_t st = 0; st < starts; ++st) {
        std::vector<int> counts(sets.size() + 1, 0);
        for (int k = 0; k < n_orbits; ++k) {
            const int o = owner[st * std::size_t(n_orbits) + std::size_t(k)];
            ++counts[o < 0 ? sets.size() : std::size_t(o)];
        }
        for (std::size_t L = 0; L < sets.size(); ++L) {
            const double p = double(counts[L]) / n_orbits;
            est.value[L][st] = p;
            est.ci95[L][st] = 1.96 * std::sqrt(p * (1.0 - p) / n_orbits);
            est.averaged[L][st / std::size_t(m)] += g.stationary()[st % std::size_t(m)] * p;
        }
        est.undecided[st] = double(counts[sets.size()]) / n_orbits;
    }
    return est;
}

}  // namespace

BasinEstimate estimate_T_mc(const Gdms& g, const std::vector<MinimalSetCover>& sets,
                            const std::vector<SpherePoint>& points, int n_orbits, int length, std::uint64_t seed,
                            int dilate_boxes) {
    return basin_impl(g, sets, points, n_orbits, length, seed, dilate_boxes, true);
}

BasinEstimate estimate_T_mc_serial(const Gdms& g, const std::vector<MinimalSetCover>& sets,
                                   const std::vector<SpherePoint>& points, int n_orbits, int length,
                                   std::uint64_t seed, int dilate_boxes) {
    return basin_impl(g, sets, points, n_orbits, length, seed, dilate_boxes, false);
}

namespace {

// Lower-left cell and offsets for bilinear reads at canonical point y.
void bilinear_base(const GridMask& geom, int v, const SpherePoint& y, std::size_t& base, double& tx, double& ty) {
    const SpherePoint c = canonical(y);
    const int R = geom.resolution();
    const double h = geom.cell_size();
    const double fx = (c.coord.real() + kGridExtent) / h - 0.5;
    const double fy = (c.coord.imag() + kGridExtent) / h - 0.5;
    const int ix = std::clamp(int(std::floor(fx)), 0, R - 2);
    const int iy = std::clamp(int(std::floor(fy)), 0, R - 2);
    tx = std::clamp(fx - ix, 0.0, 1.0);
    ty = std::clamp(fy - iy, 0.0, 1.0);
    base = geom.index(CellRef{v, c.chart, ix, iy});
}

}  // namespace

double GridField::at(int v, const SpherePoint& p) const {
    std::size_t b;
    double tx, ty;
    bilinear_base(geometry, v, p, b, tx, ty);
    const std::size_t R = std::size_t(geometry.resolution());
    return (1 - ty) * ((1 - tx) * values[b] + tx * values[b + 1]) +
           ty * ((1 - tx) * values[b + R] + tx * values[b + R + 1]);
}

GridField cover_indicator(const MinimalSetCover& c, int resolution, int dilate_boxes) {
    const BoxGrid grid(c.delta);
    const BoxSet d = dilate(grid, c.boxes, dilate_boxes);
    GridField f(resolution, d.vertices());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const CellRef cell = f.geometry.cell(i);
        f.values[i] = d.contains_point(grid, cell.vertex, SpherePoint{cell.chart, f.geometry.center(cell)}) ? 1.0 : 0.0;
    }
    return f;
}

TransitionOperator::TransitionOperator(const Gdms& g, int resolution, int quadrature_size)
    : R_(resolution), m_(g.vertices()) {
    if (quadrature_size < 1) throw Error(ErrorKind::InvalidArgument, "quadrature size must be positive");
    const GridMask geom(resolution, g.vertices());
    std::vector<std::vector<std::pair<RationalMap, double>>> quad;
    for (const Edge& e : g.edges()) quad.push_back(e.family.quadrature(quadrature_size));
    std::vector<std::vector<Tap>> per(geom.cells());
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < long(geom.cells()); ++i) {
        const CellRef c = geom.cell(std::size_t(i));
        const SpherePoint x{c.chart, geom.center(c)};
        auto& taps = per[std::size_t(i)];
        for (int ei : g.out_edges(c.vertex)) {
            const Edge& e = g.edge(ei);
            for (const auto& [f, w] : quad[std::size_t(ei)]) {
                std::size_t b;
                double tx, ty;
                bilinear_base(geom, e.to, f.eval(x), b, tx, ty);
                taps.push_back({std::uint32_t(b), float(tx), float(ty), e.weight * w});
            }
        }
    }
    start_.push_back(0);
    for (auto& t : per) {
        taps_.insert(taps_.end(), t.begin(), t.end());
        start_.push_back(taps_.size());
    }
}

void TransitionOperator::apply_range(const GridField& f, GridField& out, std::size_t lo, std::size_t hi) const {
    const std::size_t R = std::size_t(R_);
    const double* v = f.values.data();
    for (std::size_t i = lo; i < hi; ++i) {
        double s = 0.0;
        for (std::size_t k = start_[i]; k < start_[i + 1]; ++k) {
            const Tap& t = taps_[k];
            const double tx = t.fx, ty = t.fy;
            const std::size_t b = t.base;
            s += t.weight * ((1 - ty) * ((1 - tx) * v[b] + tx * v[b + 1]) + ty * ((1 - tx) * v[b + R] + tx * v[b + R + 1]));
        }
        out.values[i] = s;
    }
}

GridField TransitionOperator::apply(const GridField& f) const {
    GridField out = f;
    const long n = long(f.values.size());
    constexpr long kChunk = 256;
#pragma omp parallel for schedule(static)
    for (long lo = 0; lo < n; lo += kChunk) apply_range(f, out, std::size_t(lo), std::size_t(std::min(n, lo + kChunk)));
    return out;
}

GridField TransitionOperator::apply_serial(const GridField& f) const {
    GridField out = f;
    apply_range(f, out, 0, f.values.size());
    return out;
}

GridField TransitionOperator::iterate(GridField f, int n) const {
    for (int k = 0; k < n; ++k) f = apply(f);
    return f;
}

GridField operator_iterate(const Gdms& g, const GridField& phi, int n, int quadrature_size) {
    const TransitionOperator op(g, phi.geometry.resolution(), quadrature_size);
    return op.iterate(phi, n);
}

}  // namespace mrds
