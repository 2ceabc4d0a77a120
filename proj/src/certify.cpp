#include "mrds/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mrds/error.hpp"

namespace mrds {

bool disk_inside(const BoxGrid& grid, const BoxSet& U, const Enclosure& e, double& clearance) {
    const double d = grid.delta();
    const double x = e.center.real(), y = e.center.imag(), r = e.radius;
    const int x0 = int(std::ceil((x - r) / d - 0.5)), x1 = int(std::floor((x + r) / d + 0.5));
    const int y0 = int(std::ceil((y - r) / d - 0.5)), y1 = int(std::floor((y + r) / d + 0.5));
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix) {
            if (!grid.in_range(ix, iy)) return false;
            if (!U.contains(BoxGrid::key(e.vertex, e.chart, ix, iy))) return false;
        }
    // Clearance to non-U boxes within a window of 3 boxes.
    constexpr int kWindow = 3;
    clearance = kWindow * d;
    const double h = grid.half_width();
    for (int iy = y0 - kWindow; iy <= y1 + kWindow; ++iy)
        for (int ix = x0 - kWindow; ix <= x1 + kWindow; ++ix) {
            if (grid.in_range(ix, iy) && U.contains(BoxGrid::key(e.vertex, e.chart, ix, iy))) continue;
            const double dx = std::max(0.0, std::abs(x - ix * d) - h);
            const double dy = std::max(0.0, std::abs(y - iy * d) - h);
            clearance = std::min(clearance, std::hypot(dx, dy) - r);
        }
    return clearance > 0.0;
}

namespace {

struct Item {
    BoxKey key;
    double radius;
};

Enclosure decode(const Item& it, double q) {
    return {BoxGrid::vertex(it.key), BoxGrid::chart(it.key),
            cplx{BoxGrid::ix(it.key) * q, BoxGrid::iy(it.key) * q}, it.radius};
}

// One fold of every enclosure through every out-edge net map, snapped to a
// q-lattice with radii enlarged by the snapping offset.
bool fold_one(const Gdms& g, const std::vector<std::vector<RationalMap>>& nets, const Enclosure& e, double q,
              double max_radius, std::vector<Item>& out) {
    for (int ei : g.out_edges(e.vertex)) {
        const int to = g.edge(ei).to;
        for (const RationalMap& f : nets[std::size_t(ei)]) {
            const Disk img = image_disk(f, Disk{e.chart, e.center, e.radius});
            if (!(img.radius <= max_radius)) return false;
            const int qx = int(std::lround(img.center.real() / q));
            const int qy = int(std::lround(img.center.imag() / q));
            const double off = std::abs(img.center - cplx{qx * q, qy * q});
            out.push_back({BoxGrid::key(to, img.chart, qx, qy), img.radius + off});
        }
    }
    return true;
}

void reduce(std::vector<Item>& items) {
    std::unordered_map<BoxKey, double> best;
    best.reserve(items.size() / 4 + 16);
    for (const Item& it : items) {
        auto [pos, fresh] = best.emplace(it.key, it.radius);
        if (!fresh && it.radius > pos->second) pos->second = it.radius;
    }
    items.clear();
    for (const auto& [k, r] : best) items.push_back({k, r});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.key < b.key; });
}

}  // namespace

StabilityCertificate certify_attracting(const Gdms& g, const MinimalSetCover& cover, const CertifyParams& p,
                                        const FatouCheck& fatou) {
    if (p.n_max < 1) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
    const BoxGrid grid(cover.delta);
    StabilityCertificate cert;
    cert.delta = cover.delta;
    cert.net_delta = p.net_delta;
    cert.U = dilate(grid, cover.boxes, p.u_dilate);
    cert.W = dilate(grid, cover.boxes, p.w_dilate);
    if (fatou) {
        for (int v = 0; v < cert.W.vertices(); ++v)
            for (BoxKey b : cert.W.at(v))
                if (!fatou(b)) {
                    cert.failure = "W meets the Julia mask";
                    return cert;
                }
    }
    const auto nets = g.nets(p.net_delta);
    const double q = 0.5 * cover.delta;
    const double r0 = grid.half_width() * std::sqrt(2.0);

    std::vector<Enclosure> cur;
    for (int v = 0; v < cert.W.vertices(); ++v)
        for (BoxKey b : cert.W.at(v)) cur.push_back({v, BoxGrid::chart(b), grid.center(b), r0});

    for (int n = 1; n <= p.n_max; ++n) {
        std::vector<Item> items;
        std::atomic<bool> failed{false};
        const long m = long(cur.size());
#pragma omp parallel
        {
            std::vector<Item> local;
#pragma omp for schedule(dynamic, 16) nowait
            for (long i = 0; i < m; ++i) {
                if (failed.load(std::memory_order_relaxed)) continue;
                if (!fold_one(g, nets, cur[std::size_t(i)], q, p.max_radius, local)) failed = true;
            }
#pragma omp critical
            items.insert(items.end(), local.begin(), local.end());
        }
        if (failed) {
            cert.failure = "enclosure radius exceeded at step " + std::to_string(n);
            return cert;
        }
        reduce(items);
        if (items.size() > p.budget)
            throw Error(ErrorKind::BudgetExceeded, "enclosure budget exceeded; use a larger delta or smaller N");
        cur.clear();
        for (const Item& it : items) cur.push_back(decode(it, q));
        cert.enclosures += cur.size();

        double margin = std::numeric_limits<double>::infinity();
        double rmax = 0.0;
        bool inside = true;
        for (const Enclosure& e : cur) {
            double c = 0.0;
            if (!disk_inside(grid, cert.U, e, c)) {
                inside = false;
                break;
            }
            margin = std::min(margin, c);
            rmax = std::max(rmax, e.radius);
        }
        if (inside) {
            cert.ok = true;
            cert.N = n;
            cert.margin = margin;
            cert.contraction = std::pow(rmax / r0, 1.0 / n);
            return cert;
        }
    }
    cert.failure = "G^n(W) not inside U for n <= " + std::to_string(p.n_max);
    return cert;
}

}  // namespace mrds
