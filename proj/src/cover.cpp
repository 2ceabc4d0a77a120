#include "mrds/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrds/error.hpp"

namespace mrds {

BoxGrid::BoxGrid(double delta) : delta_(delta) {
    if (!(delta > 1e-5) || delta > 0.5) throw Error(ErrorKind::InvalidArgument, "box delta out of range");
    n_ = int(std::ceil(kChartLimit / delta));
}

bool BoxGrid::box_in(int v, const SpherePoint& p, Chart chart, BoxKey& out) const {
    const cplx z = coord_in(p, chart);
    if (!(std::abs(z) <= kChartLimit)) return false;
    const int x = int(std::lround(z.real() / delta_));
    const int y = int(std::lround(z.imag() / delta_));
    if (!in_range(x, y)) return false;
    out = key(v, chart, x, y);
    return true;
}

int BoxGrid::register_point(int v, const SpherePoint& p, BoxKey out[2]) const {
    int n = 0;
    for (Chart c : {Chart::Standard, Chart::Inverted})
        if (box_in(v, p, c, out[n])) ++n;
    return n;
}

void BoxSet::normalize() {
    for (auto& s : sets_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
}

bool BoxSet::contains(BoxKey k) const {
    const auto& s = sets_[std::size_t(BoxGrid::vertex(k))];
    return std::binary_search(s.begin(), s.end(), k);
}

bool BoxSet::contains_point(const BoxGrid& grid, int v, const SpherePoint& p) const {
    BoxKey keys[2];
    const int n = grid.register_point(v, p, keys);
    for (int i = 0; i < n; ++i)
        if (contains(keys[i])) return true;
    return false;
}

bool BoxSet::overlaps(const BoxSet& other) const {
    for (std::size_t v = 0; v < sets_.size(); ++v) {
        const auto& a = sets_[v];
        const auto& b = other.sets_[v];
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) return true;
            if (a[i] < b[j]) ++i;
            else ++j;
        }
    }
    return false;
}

bool BoxSet::subset_of(const BoxSet& other) const {
    for (std::size_t v = 0; v < sets_.size(); ++v)
        if (!std::includes(other.sets_[v].begin(), other.sets_[v].end(), sets_[v].begin(), sets_[v].end()))
            return false;
    return true;
}

void BoxSet::merge(const BoxSet& other) {
    for (std::size_t v = 0; v < sets_.size(); ++v) {
        std::vector<BoxKey> out;
        std::set_union(sets_[v].begin(), sets_[v].end(), other.sets_[v].begin(), other.sets_[v].end(),
                       std::back_inserter(out));
        sets_[v].swap(out);
    }
}

std::size_t BoxSet::size() const {
    std::size_t n = 0;
    for (const auto& s : sets_) n += s.size();
    return n;
}

bool BoxSet::empty_at_some_vertex() const {
    return std::any_of(sets_.begin(), sets_.end(), [](const auto& s) { return s.empty(); });
}

BoxSet dilate(const BoxGrid& grid, const BoxSet& s, int k) {
    BoxSet out(s.vertices());
    for (int v = 0; v < s.vertices(); ++v) {
        auto& dst = out.at(v);
        for (BoxKey b : s.at(v)) {
            const Chart c = BoxGrid::chart(b);
            const int x = BoxGrid::ix(b), y = BoxGrid::iy(b);
            for (int dy = -k; dy <= k; ++dy)
                for (int dx = -k; dx <= k; ++dx)
                    if (grid.in_range(x + dx, y + dy)) dst.push_back(grid.key(v, c, x + dx, y + dy));
        }
    }
    out.normalize();
    // Mirror into the other chart.
    for (int v = 0; v < s.vertices(); ++v) {
        std::vector<BoxKey> extra;
        for (BoxKey b : out.at(v)) {
            const Chart c = BoxGrid::chart(b);
            const cplx z = grid.center(b);
            const double h = grid.half_width();
            for (const cplx& d : {cplx{0, 0}, cplx{h, h}, cplx{-h, h}, cplx{h, -h}, cplx{-h, -h}}) {
                const SpherePoint p{c, z + d};
                if (p.coord == cplx{0.0, 0.0} && c == Chart::Standard) continue;
                BoxKey o;
                if (grid.box_in(v, p, other(c), o)) extra.push_back(o);
            }
        }
        auto& dst = out.at(v);
        dst.insert(dst.end(), extra.begin(), extra.end());
    }
    out.normalize();
    return out;
}

BoxSet boundary(const BoxSet& s) {
    BoxSet out(s.vertices());
    for (int v = 0; v < s.vertices(); ++v) {
        for (BoxKey b : s.at(v)) {
            const Chart c = BoxGrid::chart(b);
            const int x = BoxGrid::ix(b), y = BoxGrid::iy(b);
            bool edge = false;
            for (int dy = -1; dy <= 1 && !edge; ++dy)
                for (int dx = -1; dx <= 1 && !edge; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (!s.contains(BoxGrid::key(v, c, x + dx, y + dy))) edge = true;
                }
            if (edge) out.at(v).push_back(b);
        }
    }
    return out;
}

double hausdorff_to(const BoxGrid& grid, const BoxSet& s, int v, const std::vector<SpherePoint>& target) {
    std::vector<SpherePoint> pts;
    for (BoxKey b : s.at(v)) pts.push_back({BoxGrid::chart(b), grid.center(b)});
    if (pts.empty() || target.empty()) return std::numeric_limits<double>::infinity();
    auto one_way = [](const std::vector<SpherePoint>& a, const std::vector<SpherePoint>& b) {
        double h = 0.0;
        for (const SpherePoint& p : a) {
            double best = std::numeric_limits<double>::infinity();
            for (const SpherePoint& q : b) best = std::min(best, chordal_dist(p, q));
            h = std::max(h, best);
        }
        return h;
    };
    return std::max(one_way(pts, target), one_way(target, pts));
}

}  // namespace mrds
