#include <cmath>
#include <limits>
#include <map>

#include "mrds/certify.hpp"

namespace mrds {

// Serial re-fold with an ordered map; shares only the enclosure primitive.
bool replay_certificate(const Gdms& g, const StabilityCertificate& cert) {
    if (!cert.ok || cert.N < 1) return false;
    if (!cert.U.subset_of(cert.W)) return false;
    const BoxGrid grid(cert.delta);
    const double q = 0.5 * cert.delta;
    const double r0 = grid.half_width() * std::sqrt(2.0);
    const auto nets = g.nets(cert.net_delta);

    std::map<BoxKey, double> lattice;
    std::vector<Enclosure> cur;
    for (int v = 0; v < cert.W.vertices(); ++v)
        for (BoxKey b : cert.W.at(v)) cur.push_back({v, BoxGrid::chart(b), grid.center(b), r0});

    for (int n = 0; n < cert.N; ++n) {
        lattice.clear();
        for (const Enclosure& e : cur) {
            for (int ei : g.out_edges(e.vertex)) {
                for (const RationalMap& f : nets[std::size_t(ei)]) {
                    const Disk img = image_disk(f, Disk{e.chart, e.center, e.radius});
                    if (!(img.radius <= 0.25)) return false;
                    const long qx = std::lround(img.center.real() / q);
                    const long qy = std::lround(img.center.imag() / q);
                    const double r = img.radius + std::abs(img.center - cplx{double(qx) * q, double(qy) * q});
                    const BoxKey k = BoxGrid::key(g.edge(ei).to, img.chart, int(qx), int(qy));
                    auto [it, fresh] = lattice.emplace(k, r);
                    if (!fresh && r > it->second) it->second = r;
                }
            }
        }
        cur.clear();
        for (const auto& [k, r] : lattice)
            cur.push_back({BoxGrid::vertex(k), BoxGrid::chart(k),
                           cplx{BoxGrid::ix(k) * q, BoxGrid::iy(k) * q}, r});
    }
    double margin = std::numeric_limits<double>::infinity();
    for (const Enclosure& e : cur) {
        double c = 0.0;
        if (!disk_inside(grid, cert.U, e, c)) return false;
        margin = std::min(margin, c);
    }
    return margin == cert.margin;
}

}  // namespace mrds
