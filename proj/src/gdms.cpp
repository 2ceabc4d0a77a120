#include "mrds/gdms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "mrds/error.hpp"

namespace mrds {

MapFamily MapFamily::atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw Error(ErrorKind::InvalidArgument, "empty atom list");
    MapFamily f;
    f.kind_ = FamilyKind::Atoms;
    for (const Atom& a : atoms) {
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw Error(ErrorKind::InvalidArgument, "atom weights must be finite and positive");
        f.atom_total_ += a.weight;
    }
    f.atoms_ = std::move(atoms);
    return f;
}

MapFamily MapFamily::disk(DiskFamily d) {
    if (!(d.radius >= 0.0) || !(d.inner_radius >= 0.0) || d.inner_radius > d.radius)
        throw Error(ErrorKind::InvalidArgument, "disk radii must satisfy 0 <= inner <= radius");
    if (d.tmpl == DiskTemplate::QuadraticC) {
        d.base = RationalMap::polynomial({0.0, 0.0, 1.0});
        d.coeff_index = 0;
    }
    if (d.tmpl == DiskTemplate::CoefficientDisk &&
        (d.coeff_index < 0 || d.coeff_index > d.base.degree()))
        throw Error(ErrorKind::InvalidArgument, "coeff_index out of range");
    MapFamily f;
    f.kind_ = FamilyKind::Disk;
    f.disk_ = std::move(d);
    // Every net member must be a valid map.
    for (const cplx& c : f.net_parameters(kNetDelta)) {
        const RationalMap m = f.map_at(c);
        (void)RationalMap(m.numerator(), m.denominator());
    }
    return f;
}

MapFamily MapFamily::quadratic(cplx center, double radius) {
    if (radius == 0.0) return dirac(RationalMap::polynomial({center, 0.0, 1.0}));
    DiskFamily d;
    d.tmpl = DiskTemplate::QuadraticC;
    d.center = center;
    d.radius = radius;
    return disk(d);
}

RationalMap MapFamily::map_at(cplx param) const {
    std::vector<cplx> num = disk_.base.numerator();
    const std::vector<cplx> den = disk_.base.denominator();
    switch (disk_.tmpl) {
    case DiskTemplate::QuadraticC: {
        const cplx c[3] = {param, 0.0, 1.0};
        const cplx one{1.0, 0.0};
        return RationalMap::unchecked(c, std::span<const cplx>(&one, 1));
    }
    case DiskTemplate::CoefficientDisk:
        if (num.size() <= std::size_t(disk_.coeff_index)) num.resize(std::size_t(disk_.coeff_index) + 1);
        num[std::size_t(disk_.coeff_index)] = param;
        break;
    case DiskTemplate::ScaledNumerator:
        for (cplx& a : num) a *= param;
        break;
    }
    return RationalMap::unchecked(num, den);
}

RationalMap MapFamily::map_for(const MapChoice& c) const {
    if (kind_ == FamilyKind::Atoms) return atoms_[std::size_t(c.atom)].map;
    return map_at(c.param);
}

MapChoice MapFamily::sample(CounterRng& rng) const {
    MapChoice out;
    if (kind_ == FamilyKind::Atoms) {
        double u = rng.uniform() * atom_total_;
        out.atom = int(atoms_.size()) - 1;
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            if (u < atoms_[k].weight) {
                out.atom = int(k);
                break;
            }
            u -= atoms_[k].weight;
        }
        return out;
    }
    const double r = disk_.radius;
    if (r == 0.0) {
        out.param = disk_.center;
        return out;
    }
    // Rejection sampling on the bounding square.
    for (;;) {
        const cplx x{(2.0 * rng.uniform() - 1.0) * r, (2.0 * rng.uniform() - 1.0) * r};
        const double a = std::abs(x);
        if (a <= r && a >= disk_.inner_radius) {
            out.param = disk_.center + x;
            return out;
        }
    }
}

std::vector<cplx> MapFamily::net_parameters(double delta) const {
    if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "net delta must be positive");
    std::vector<cplx> pts;
    if (kind_ == FamilyKind::Atoms) return pts;
    const double r = disk_.radius;
    const double r0 = disk_.inner_radius;
    if (r == 0.0) {
        pts.push_back(disk_.center);
        return pts;
    }
    const double h = delta * r;
    const int n = int(std::ceil(r / h)) + 1;
    const double row = h * std::sqrt(3.0) / 2.0;
    const int rows = int(std::ceil(r / row)) + 1;
    for (int j = -rows; j <= rows; ++j) {
        for (int i = -n - rows; i <= n + rows; ++i) {
            const cplx x{h * (i + 0.5 * j), row * j};
            const double a = std::abs(x);
            if (a <= r && a >= r0) pts.push_back(disk_.center + x);
        }
    }
    // Boundary rings, a multiple of 6 points so the hexagon directions are hit.
    auto ring = [&](double radius) {
        const double pitch = h / 4.0;
        int k = std::max(6, int(std::ceil(2.0 * std::numbers::pi * radius / pitch)));
        k = 6 * ((k + 5) / 6);
        for (int t = 0; t < k; ++t)
            pts.push_back(disk_.center + std::polar(radius, 2.0 * std::numbers::pi * t / k));
    };
    ring(r);
    if (r0 > 0.0) ring(r0);
    return pts;
}

std::vector<RationalMap> MapFamily::support_net(double delta) const {
    std::vector<RationalMap> out;
    if (kind_ == FamilyKind::Atoms) {
        for (const Atom& a : atoms_) out.push_back(a.map);
        return out;
    }
    for (const cplx& c : net_parameters(delta)) out.push_back(map_at(c));
    return out;
}

std::vector<std::pair<RationalMap, double>> MapFamily::quadrature(int size) const {
    std::vector<std::pair<RationalMap, double>> out;
    if (kind_ == FamilyKind::Atoms) {
        for (const Atom& a : atoms_) out.emplace_back(a.map, a.weight / atom_total_);
        return out;
    }
    if (disk_.radius == 0.0) {
        out.emplace_back(map_at(disk_.center), 1.0);
        return out;
    }
    // Equal-area rings (midpoint in r^2) times uniform angles.
    const int rings = std::max(1, int(std::lround(std::sqrt(size / 4.0))));
    const int per = std::max(4, size / rings);
    const double w = 1.0 / double(rings * per);
    const double a0 = disk_.inner_radius * disk_.inner_radius;
    const double a1 = disk_.radius * disk_.radius;
    for (int k = 0; k < rings; ++k) {
        const double rr = std::sqrt(a0 + (a1 - a0) * (k + 0.5) / rings);
        for (int t = 0; t < per; ++t) {
            const double th = 2.0 * std::numbers::pi * (t + 0.5 * (k % 2)) / per;
            out.emplace_back(map_at(disk_.center + std::polar(rr, th)), w);
        }
    }
    return out;
}

bool MapFamily::is_polynomial() const {
    if (kind_ == FamilyKind::Atoms)
        return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.map.is_polynomial(); });
    return disk_.base.is_polynomial();
}

int MapFamily::max_degree() const {
    if (kind_ == FamilyKind::Atoms) {
        int d = 0;
        for (const Atom& a : atoms_) d = std::max(d, a.map.degree());
        return d;
    }
    return disk_.base.degree();
}

MapFamily MapFamily::with_radius(double s) const {
    if (kind_ == FamilyKind::Atoms) return *this;
    if (s == 0.0) return dirac(map_at(disk_.center));
    DiskFamily d = disk_;
    const double ratio = disk_.radius > 0.0 ? disk_.inner_radius / disk_.radius : 0.0;
    d.radius = s;
    d.inner_radius = ratio * s;
    return disk(d);
}

// ---------------------------------------------------------------------------

std::vector<double> stationary_vector(const std::vector<std::vector<double>>& P, double* residual) {
    const int m = int(P.size());
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = P[std::size_t(j)][std::size_t(i)] - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < m; ++j) A(m - 1, j) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (std::abs(lu.determinant()) < 1e-300) throw Error(ErrorKind::NumericFailure, "singular stationary solve");
    Eigen::VectorXd x = lu.solve(b);
    std::vector<double> p(static_cast<std::size_t>(m));
    double res = 0.0;
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += x(i) * P[std::size_t(i)][std::size_t(j)];
        res = std::max(res, std::abs(s - x(j)));
        p[std::size_t(j)] = x(j);
    }
    for (double v : p)
        if (!(v > 0.0)) throw Error(ErrorKind::NumericFailure, "stationary vector has non-positive entry");
    if (residual) *residual = res;
    return p;
}

namespace {

// Shortest nonempty path s -> t; returns the visited vertices after s, ending with t.
std::vector<int> bfs_path(const std::vector<std::vector<int>>& adj, int s, int t) {
    std::vector<int> prev(adj.size(), -2);
    std::deque<int> q;
    for (int w : adj[std::size_t(s)]) {
        if (prev[std::size_t(w)] != -2) continue;
        prev[std::size_t(w)] = -1;
        q.push_back(w);
    }
    while (!q.empty() && prev[std::size_t(t)] == -2) {
        const int v = q.front();
        q.pop_front();
        for (int w : adj[std::size_t(v)]) {
            if (prev[std::size_t(w)] != -2) continue;
            prev[std::size_t(w)] = v;
            q.push_back(w);
        }
    }
    if (prev[std::size_t(t)] == -2) return {};
    std::vector<int> path;
    for (int v = t; v != -1; v = prev[std::size_t(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

Gdms Gdms::build(int vertices, std::vector<Edge> edges) {
    if (vertices < 1 || vertices > kMaxVertices)
        throw Error(ErrorKind::InvalidArgument, "vertex count must be in 1..64");
    Gdms g;
    g.m_ = vertices;
    g.out_.assign(std::size_t(vertices), {});
    g.in_.assign(std::size_t(vertices), {});
    g.P_.assign(std::size_t(vertices), std::vector<double>(std::size_t(vertices), 0.0));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        if (ed.from < 0 || ed.from >= vertices || ed.to < 0 || ed.to >= vertices)
            throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
        if (!(ed.weight > 0.0)) throw Error(ErrorKind::Stochasticity, "edge weight must be positive");
        g.out_[std::size_t(ed.from)].push_back(int(e));
        g.in_[std::size_t(ed.to)].push_back(int(e));
        g.P_[std::size_t(ed.from)][std::size_t(ed.to)] += ed.weight;
    }
    g.edges_ = std::move(edges);
    for (const Edge& e : g.edges_)
        if (e.family.max_degree() < 2) throw Error(ErrorKind::InvalidMap, "generator of degree below 2");

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertices));
    for (const Edge& e : g.edges_) adj[std::size_t(e.from)].push_back(e.to);
    // Strong connectivity via a closed walk 0 -> 1 -> ... -> m-1 -> 0.
    std::vector<int> walk{0};
    for (int v = 0; v < vertices; ++v) {
        const int next = (v + 1) % vertices;
        std::vector<int> path = bfs_path(adj, v, next);
        if (path.empty()) throw Error(ErrorKind::Irreducible, "graph is not strongly connected");
        walk.insert(walk.end(), path.begin(), path.end());
    }
    g.cycle_cover_ = walk;

    for (int i = 0; i < vertices; ++i) {
        double s = 0.0;
        for (double v : g.P_[std::size_t(i)]) s += v;
        if (std::abs(s - 1.0) > 1e-12) throw Error(ErrorKind::Stochasticity, "row weights do not sum to 1");
    }
    g.p_ = stationary_vector(g.P_, &g.residual_);
    if (g.residual_ > 1e-12) throw Error(ErrorKind::NumericFailure, "stationary residual too large");
    return g;
}

std::vector<std::vector<RationalMap>> Gdms::nets(double delta) const {
    std::vector<std::vector<RationalMap>> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_) out.push_back(e.family.support_net(delta));
    return out;
}

Gdms::Step Gdms::sample_step(int vertex, CounterRng& rng) const {
    const std::vector<int>& outs = out_[std::size_t(vertex)];
    double u = rng.uniform();
    int chosen = outs.back();
    for (int e : outs) {
        const double w = edges_[std::size_t(e)].weight;
        if (u < w) {
            chosen = e;
            break;
        }
        u -= w;
    }
    return {chosen, edges_[std::size_t(chosen)].family.sample(rng)};
}

bool Gdms::all_polynomial() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.family.is_polynomial(); });
}

int Gdms::max_degree() const {
    int d = 0;
    for (const Edge& e : edges_) d = std::max(d, e.family.max_degree());
    return d;
}

int Gdms::shortest_loop(int vertex) const {
    std::vector<int> dist(std::size_t(m_), -1);
    std::deque<int> q;
    for (int e : out_[std::size_t(vertex)]) {
        const int t = edges_[std::size_t(e)].to;
        if (t == vertex) return 1;
        if (dist[std::size_t(t)] < 0) {
            dist[std::size_t(t)] = 1;
            q.push_back(t);
        }
    }
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (int e : out_[std::size_t(v)]) {
            const int t = edges_[std::size_t(e)].to;
            if (t == vertex) return dist[std::size_t(v)] + 1;
            if (dist[std::size_t(t)] < 0) {
                dist[std::size_t(t)] = dist[std::size_t(v)] + 1;
                q.push_back(t);
            }
        }
    }
    return -1;
}

bool Gdms::deterministic() const {
    for (int v = 0; v < m_; ++v) {
        if (out_[std::size_t(v)].size() != 1) return false;
        const MapFamily& f = edges_[std::size_t(out_[std::size_t(v)][0])].family;
        if (f.kind() == FamilyKind::Atoms ? f.atom_list().size() != 1 : f.disk_params().radius > 0.0)
            return false;
    }
    return true;
}

void for_each_admissible_word(const Gdms& g, int length, int from, std::optional<int> to,
                              const std::function<void(const std::vector<int>&)>& visit) {
    if (length < 1) throw Error(ErrorKind::InvalidArgument, "word length must be >= 1");
    std::vector<int> word;
    word.reserve(std::size_t(length));
    std::function<void(int)> rec = [&](int v) {
        if (int(word.size()) == length) {
            if (!to || v == *to) visit(word);
            return;
        }
        std::vector<int> outs = g.out_edges(v);
        std::sort(outs.begin(), outs.end());
        for (int e : outs) {
            word.push_back(e);
            rec(g.edge(e).to);
            word.pop_back();
        }
    };
    rec(from);
}

std::vector<std::vector<int>> admissible_words(const Gdms& g, int length, int from, std::optional<int> to) {
    std::vector<std::vector<int>> out;
    for_each_admissible_word(g, length, from, to, [&](const std::vector<int>& w) { out.push_back(w); });
    return out;
}

}  // namespace mrds
