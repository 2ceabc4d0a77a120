#include "mrds/minimal.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mrds/error.hpp"
#include "mrds/orbit.hpp"
#include "mrds/rng.hpp"

namespace mrds {

namespace {

struct Seed {
    SpherePoint point;
    int vertex;
    bool periodic;
};

// Map used to seed periodic points of a family.
RationalMap representative(const MapFamily& f) {
    const DiskFamily& d = f.disk_params();
    return f.map_at(d.center + d.inner_radius);
}

std::vector<Seed> periodic_seeds(const Gdms& g) {
    std::vector<Seed> out;
    for (const Edge& e : g.edges()) {
        if (e.from != e.to) continue;
        std::vector<RationalMap> maps;
        if (e.family.kind() == FamilyKind::Atoms) {
            for (const Atom& a : e.family.atom_list()) maps.push_back(a.map);
        } else {
            maps.push_back(representative(e.family));
        }
        for (const RationalMap& f : maps)
            for (const SpherePoint& z : f.fixed_points()) {
                const bool dup = std::any_of(out.begin(), out.end(), [&](const Seed& s) {
                    return s.vertex == e.from && chordal_dist(s.point, z) < 1e-6;
                });
                if (!dup) out.push_back({z, e.from, true});
            }
    }
    // Infinity first so polynomial closures can stop on it.
    std::stable_sort(out.begin(), out.end(),
                     [](const Seed& a, const Seed& b) { return a.point.is_infinity() && !b.point.is_infinity(); });
    return out;
}

struct Closure {
    enum Status { Done, Abandoned, Capped } status = Done;
    std::vector<std::pair<SpherePoint, int>> reps;
};

class Detector {
public:
    Detector(const Gdms& g, const DetectParams& p)
        : g_(g), p_(p), grid_(p.delta), fine_(0.25 * p.delta), nets_(g.nets(p.net_delta)) {}

    std::vector<MinimalSetCover> run();

private:
    const Gdms& g_;
    const DetectParams& p_;
    BoxGrid grid_;
    double fine_;
    std::vector<std::vector<RationalMap>> nets_;
    std::vector<MinimalSetCover> found_;

    BoxKey fine_key(int v, const SpherePoint& p) const {
        const SpherePoint c = canonical(p);
        return BoxGrid::key(v, c.chart, int(std::lround(c.coord.real() / fine_)),
                            int(std::lround(c.coord.imag() / fine_)));
    }
    bool in_found(BoxKey k) const {
        return std::any_of(found_.begin(), found_.end(), [&](const MinimalSetCover& c) { return c.boxes.contains(k); });
    }
    bool point_in_found(int v, const SpherePoint& z) const {
        return std::any_of(found_.begin(), found_.end(),
                           [&](const MinimalSetCover& c) { return c.boxes.contains_point(grid_, v, z); });
    }
    Closure closure(const Seed& s, std::size_t cap) const;
    bool reaches_found(const Seed& s) const;
    MinimalSetCover trim(const Seed& s, std::vector<std::pair<SpherePoint, int>> reps, bool stable) const;
    void accept(MinimalSetCover c);
};

Closure Detector::closure(const Seed& s, std::size_t cap) const {
    Closure out;
    std::unordered_set<BoxKey> visited;
    std::unordered_set<BoxKey> coarse;
    std::vector<std::size_t> per_vertex(std::size_t(g_.vertices()), 0);
    std::vector<std::pair<SpherePoint, int>> stack;

    auto add = [&](const SpherePoint& z, int v) {
        if (!visited.insert(fine_key(v, z)).second) return true;
        BoxKey keys[2];
        const int n = grid_.register_point(v, z, keys);
        for (int i = 0; i < n; ++i) {
            if (in_found(keys[i])) {
                out.status = Closure::Abandoned;
                return false;
            }
            if (coarse.insert(keys[i]).second && ++per_vertex[std::size_t(v)] > cap) {
                out.status = Closure::Capped;
                return false;
            }
        }
        out.reps.emplace_back(z, v);
        stack.emplace_back(z, v);
        return true;
    };

    if (!add(s.point, s.vertex)) return out;
    // Repelling periodic seeds drift off in floating point; skip the shortcut.
    if (!s.periodic && reaches_found(s)) {
        out.status = Closure::Abandoned;
        return out;
    }
    // Depth-first, so escaping chains reach accepted covers early.
    while (!stack.empty()) {
        const auto [z, v] = stack.back();
        stack.pop_back();
        for (int e : g_.out_edges(v)) {
            const int to = g_.edge(e).to;
            for (const RationalMap& f : nets_[std::size_t(e)])
                if (!add(f.eval(z), to)) return out;
        }
    }
    return out;
}

// Cheap exits before the full closure: orbits of the seed under sticky words
// (the k-th net map on every edge) that land in an accepted cover.
bool Detector::reaches_found(const Seed& s) const {
    if (found_.empty()) return false;
    constexpr int kSteps = 1000;
    std::size_t words = 1;
    for (const auto& net : nets_) words = std::max(words, net.size());
    for (std::size_t k = 0; k < words; ++k) {
        SpherePoint z = s.point;
        int v = s.vertex;
        for (int t = 0; t < kSteps; ++t) {
            const auto& outs = g_.out_edges(v);
            const int e = outs[std::size_t(t) % outs.size()];
            const auto& net = nets_[std::size_t(e)];
            z = net[k % net.size()].eval(z);
            v = g_.edge(e).to;
            if (point_in_found(v, z)) return true;
        }
    }
    // Greedy outward word: largest-modulus image at every step.
    SpherePoint z = s.point;
    int v = s.vertex;
    for (int t = 0; t < kSteps; ++t) {
        SpherePoint best = z;
        int best_v = v;
        double best_m = -1.0;
        for (int e : g_.out_edges(v))
            for (const RationalMap& f : nets_[std::size_t(e)]) {
                const SpherePoint w = f.eval(z);
                const double m = w.is_infinity() ? INFINITY : w.modulus();
                if (m > best_m) {
                    best_m = m;
                    best = w;
                    best_v = g_.edge(e).to;
                }
            }
        z = best;
        v = best_v;
        if (point_in_found(v, z)) return true;
    }
    return false;
}

MinimalSetCover Detector::trim(const Seed& s, std::vector<std::pair<SpherePoint, int>> reps, bool stable) const {
    auto boxes_of = [&](const std::vector<std::pair<SpherePoint, int>>& pts) {
        BoxSet b(g_.vertices());
        for (const auto& [z, v] : pts) {
            BoxKey keys[2];
            const int n = grid_.register_point(v, z, keys);
            for (int i = 0; i < n; ++i) b.at(v).push_back(keys[i]);
        }
        b.normalize();
        return b;
    };
    BoxSet C = boxes_of(reps);
    // Drop transient boxes: C <- C intersected with the boxes hit by G(C).
    for (int pass = 0; stable && pass < p_.trim_passes; ++pass) {
        std::unordered_set<BoxKey> hit;
        for (const auto& [z, v] : reps)
            for (int e : g_.out_edges(v)) {
                const int to = g_.edge(e).to;
                for (const RationalMap& f : nets_[std::size_t(e)]) {
                    BoxKey keys[2];
                    const int n = grid_.register_point(to, f.eval(z), keys);
                    for (int i = 0; i < n; ++i) hit.insert(keys[i]);
                }
            }
        std::vector<std::pair<SpherePoint, int>> kept;
        for (const auto& r : reps) {
            BoxKey keys[2];
            const int n = grid_.register_point(r.second, r.first, keys);
            bool keep = false;
            for (int i = 0; i < n; ++i) keep = keep || (hit.count(keys[i]) && C.contains(keys[i]));
            if (keep) kept.push_back(r);
        }
        if (kept.size() == reps.size()) break;
        reps.swap(kept);
        C = boxes_of(reps);
    }
    MinimalSetCover c;
    c.delta = p_.delta;
    c.boxes = std::move(C);
    c.points = std::move(reps);
    c.seed = s.point;
    c.seed_vertex = s.vertex;
    c.origin = s.periodic ? "periodic" : "tail";
    c.stable = stable;
    return c;
}

void Detector::accept(MinimalSetCover c) {
    if (c.boxes.empty_at_some_vertex()) return;
    for (auto it = found_.begin(); it != found_.end();) {
        if (it->boxes.overlaps(c.boxes)) {
            c.boxes.merge(it->boxes);
            c.points.insert(c.points.end(), it->points.begin(), it->points.end());
            c.stable = c.stable && it->stable;
            it = found_.erase(it);
        } else {
            ++it;
        }
    }
    found_.push_back(std::move(c));
}

std::vector<MinimalSetCover> Detector::run() {
    for (const Seed& s : periodic_seeds(g_)) {
        if (point_in_found(s.vertex, s.point)) continue;
        Closure cl = closure(s, p_.periodic_cap);
        if (cl.status == Closure::Done) accept(trim(s, std::move(cl.reps), true));
    }
    for (int k = 0; k < p_.n_seeds; ++k) {
        CounterRng rng(p_.seed, 0x5EED0000ULL + std::uint64_t(k));
        const SpherePoint z0 = sphere_point_from_uniforms(rng.uniform(), rng.uniform());
        double u = rng.uniform();
        int i0 = g_.vertices() - 1;
        for (int i = 0; i < g_.vertices(); ++i) {
            if (u < g_.stationary()[std::size_t(i)]) {
                i0 = i;
                break;
            }
            u -= g_.stationary()[std::size_t(i)];
        }
        const OrbitRecord rec = run_orbit(g_, z0, i0, p_.orbit_len, p_.seed, std::uint64_t(k));
        const auto tail = omega_tail(rec);
        const Seed s{tail.back().first, tail.back().second, false};
        if (point_in_found(s.vertex, s.point)) continue;
        Closure cl = closure(s, p_.box_cap);
        if (cl.status == Closure::Abandoned) continue;
        accept(trim(s, std::move(cl.reps), cl.status == Closure::Done));
    }
    return found_;
}

}  // namespace

std::vector<MinimalSetCover> detect_minimal_sets(const Gdms& g, const DetectParams& p) {
    if (!(p.delta > 0.0) || p.delta > 0.05) throw Error(ErrorKind::InvalidArgument, "delta must be in (0, 0.05]");
    if (p.n_seeds < 8) throw Error(ErrorKind::InvalidArgument, "n_seeds must be >= 8");
    if (p.orbit_len < 10) throw Error(ErrorKind::InvalidArgument, "orbit_len must be >= 10");
    return Detector(g, p).run();
}

const char* to_string(CoverKind k) {
    switch (k) {
    case CoverKind::Attracting: return "attracting";
    case CoverKind::JTouching: return "j_touching";
    case CoverKind::SubRotative: return "sub_rotative";
    case CoverKind::Undecided: return "undecided";
    }
    return "?";
}

JuliaCache::JuliaCache(const Gdms& g, const JuliaParams& p)
    : tester_(g, p), marks_(p.resolution, g.vertices()), state_(marks_.cells(), -1) {}

std::vector<std::size_t> JuliaCache::julia_cells(std::vector<std::size_t> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    std::vector<std::size_t> todo;
    for (std::size_t i : cells)
        if (state_[i] < 0) todo.push_back(i);
    const long n = long(todo.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long k = 0; k < n; ++k) {
        const std::size_t i = todo[std::size_t(k)];
        state_[i] = tester_.cell_is_julia(marks_, marks_.cell(i)) ? 1 : 0;
    }
    std::vector<std::size_t> out;
    for (std::size_t i : cells)
        if (state_[i] == 1) {
            marks_.set(i, true);
            out.push_back(i);
        }
    return out;
}

std::vector<std::size_t> JuliaCache::cells_near(int v, Chart chart, cplx center, double half) const {
    const double h = marks_.cell_size();
    const int R = marks_.resolution();
    auto lo = [&](double x) { return std::max(0, int(std::floor((x - half + kGridExtent) / h))); };
    auto hi = [&](double x) { return std::min(R - 1, int(std::floor((x + half + kGridExtent) / h))); };
    std::vector<std::size_t> out;
    for (int iy = lo(center.imag()); iy <= hi(center.imag()); ++iy)
        for (int ix = lo(center.real()); ix <= hi(center.real()); ++ix)
            out.push_back(marks_.index(CellRef{v, chart, ix, iy}));
    return out;
}

namespace {

// Largest exp(mean log |Df|) over sampled words started on the cover.
double word_contraction(const Gdms& g, const MinimalSetCover& cover, double net_delta) {
    const auto nets = g.nets(net_delta);
    constexpr int kWords = 16, kLen = 16, kStarts = 8;
    double best = 0.0;
    const std::size_t n = cover.points.size();
    for (int s = 0; s < kStarts && n > 0; ++s) {
        const auto& [z0, v0] = cover.points[(std::size_t(s) * n) / kStarts];
        auto run = [&](auto pick) {
            SpherePoint z = z0;
            int v = v0;
            double sum = 0.0;
            for (int t = 0; t < kLen; ++t) {
                const auto [e, f] = pick(v, t);
                double norm = 0.0;
                z = f->eval_with_norm(z, norm);
                sum += std::log(std::max(norm, kLyapunovFloor));
                v = g.edge(e).to;
            }
            best = std::max(best, std::exp(sum / kLen));
        };
        // Constant words along self-loops.
        for (int e : g.out_edges(v0)) {
            if (g.edge(e).to != v0) continue;
            for (const RationalMap& f : nets[std::size_t(e)])
                run([&](int, int) { return std::pair<int, const RationalMap*>(e, &f); });
        }
        for (int w = 0; w < kWords; ++w) {
            CounterRng rng(1, std::uint64_t(s), std::uint64_t(w));
            run([&](int v, int) {
                const auto& outs = g.out_edges(v);
                const int e = outs[std::size_t(rng.below(outs.size()))];
                const auto& net = nets[std::size_t(e)];
                return std::pair<int, const RationalMap*>(e, &net[std::size_t(rng.below(net.size()))]);
            });
        }
    }
    return best;
}

}  // namespace

Classification classify(const Gdms& g, const MinimalSetCover& cover, JuliaCache& julia, const CertifyParams& cp) {
    Classification out;
    if (!cover.stable) {
        out.note = "cover did not close within the box cap";
        return out;
    }
    const BoxGrid grid(cover.delta);
    const GridMask& geom = julia.geometry();
    const double reach = grid.half_width() + geom.cell_size();

    // (1) Julia cells along the cover boundary, dilated by one mask cell.
    const BoxSet edge = boundary(cover.boxes);
    std::vector<std::size_t> cells;
    for (int v = 0; v < edge.vertices(); ++v)
        for (BoxKey b : edge.at(v)) {
            const auto near = julia.cells_near(v, BoxGrid::chart(b), grid.center(b), reach);
            cells.insert(cells.end(), near.begin(), near.end());
        }
    const std::vector<std::size_t> hits = julia.julia_cells(cells);
    if (!hits.empty()) {
        out.kind = CoverKind::JTouching;
        for (std::size_t i : hits) {
            const CellRef c = geom.cell(i);
            out.witnesses.push_back({c.vertex, SpherePoint{c.chart, geom.center(c)}});
        }
        return out;
    }

    // (2) Certification, with W checked against the Julia cells.
    const BoxSet W = dilate(grid, cover.boxes, cp.w_dilate);
    std::vector<std::size_t> wcells;
    for (int v = 0; v < W.vertices(); ++v)
        for (BoxKey b : W.at(v)) {
            const auto near = julia.cells_near(v, BoxGrid::chart(b), grid.center(b), grid.half_width());
            wcells.insert(wcells.end(), near.begin(), near.end());
        }
    const std::vector<std::size_t> wj = julia.julia_cells(wcells);
    const std::unordered_set<std::size_t> wjset(wj.begin(), wj.end());
    const FatouCheck fatou = [&](BoxKey b) {
        for (std::size_t i : julia.cells_near(BoxGrid::vertex(b), BoxGrid::chart(b), grid.center(b), grid.half_width()))
            if (wjset.count(i)) return false;
        return true;
    };
    try {
        out.certificate = certify_attracting(g, cover, cp, fatou);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        out.note = e.what();
        return out;
    }
    if (out.certificate.ok) {
        out.kind = CoverKind::Attracting;
        return out;
    }

    // (3) By elimination; recorded factors should sit near 1.
    out.max_contraction = word_contraction(g, cover, cp.net_delta);
    out.note = out.certificate.failure;
    if (out.max_contraction >= 0.9) {
        out.kind = CoverKind::SubRotative;
        out.note += "; classified by elimination";
    } else {
        out.note += "; contracting words but no certificate";
    }
    return out;
}

Verdict mean_stable_verdict(const Gdms& g, const VerdictParams& p) {
    Verdict out;
    out.covers = detect_minimal_sets(g, p.detect);
    JuliaCache cache(g, p.julia);
    for (const MinimalSetCover& c : out.covers) out.classes.push_back(classify(g, c, cache, p.certify));
    bool all = !out.covers.empty();
    bool decisive = false;  // some cover rules out mean stability
    for (const Classification& c : out.classes) {
        if (c.kind == CoverKind::JTouching || c.kind == CoverKind::SubRotative) decisive = true;
        if (c.kind == CoverKind::Attracting) {
            ++out.attracting;
            out.contraction = std::max(out.contraction, c.certificate.contraction);
        } else {
            all = false;
        }
        if (c.kind == CoverKind::Undecided) out.undecided = true;
    }
    out.mean_stable = all;
    if (decisive) out.undecided = false;
    if (out.covers.empty()) out.undecided = true;
    out.degree = g.max_degree();
    out.loop_length = g.shortest_loop(0);
    out.bound = 2 * std::lround(std::pow(double(out.degree), double(out.loop_length))) - 2;
    out.bound_ok = out.attracting <= out.bound;
    return out;
}

double cover_area_fraction(const MinimalSetCover& c, int v, int resolution) {
    const GridMask geom(resolution, c.boxes.vertices());
    const BoxGrid grid(c.delta);
    double on = 0.0, total = 0.0;
    const std::size_t base = std::size_t(v) * geom.cells_per_vertex();
    for (std::size_t i = base; i < base + geom.cells_per_vertex(); ++i) {
        const CellRef cell = geom.cell(i);
        const double w = geom.area_weight(cell);
        if (w == 0.0) continue;
        total += w;
        if (c.boxes.contains_point(grid, v, SpherePoint{cell.chart, geom.center(cell)})) on += w;
    }
    return total > 0.0 ? on / total : 0.0;
}

ChaoticReport chaotic_check(const Gdms& g, int resolution, std::uint64_t seed) {
    ChaoticReport rep;
    JuliaParams jp;
    jp.resolution = resolution;
    jp.seed = seed;
    const GridMask mask = julia_forward(g, jp);
    bool full = true;
    for (int v = 0; v < g.vertices(); ++v) {
        rep.julia_fraction.push_back(mask.area_fraction(v));
        full = full && rep.julia_fraction.back() >= 0.99;
    }
    DetectParams dp;
    dp.delta = 0.05;
    dp.n_seeds = 20;
    dp.seed = seed;
    const auto covers = detect_minimal_sets(g, dp);
    bool whole = !covers.empty();
    for (const MinimalSetCover& c : covers) {
        double f = 1.0;
        for (int v = 0; v < g.vertices(); ++v) f = std::min(f, cover_area_fraction(c, v));
        rep.cover_fraction.push_back(f);
        whole = whole && c.stable && f >= 0.99;
    }
    rep.chaotic = full && whole;
    return rep;
}

}  // namespace mrds
