#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mrds/gdms.hpp"
#include "mrds/sphere.hpp"

namespace mrds {

using BoxKey = std::uint64_t;

/// Global delta-grid of square boxes per chart; box (ix, iy) is centered at
/// (ix*delta, iy*delta) and the grid spans |coord| <= 1.25 in each chart.
class BoxGrid {
public:
    explicit BoxGrid(double delta);

    double delta() const { return delta_; }
    int extent() const { return n_; }

    static BoxKey key(int v, Chart c, int ix, int iy) {
        return (BoxKey(v) << 42) | (BoxKey(c) << 41) | (BoxKey(ix + kOff) << 21) | BoxKey(iy + kOff);
    }
    static int vertex(BoxKey k) { return int(k >> 42); }
    static Chart chart(BoxKey k) { return Chart((k >> 41) & 1); }
    static int ix(BoxKey k) { return int((k >> 21) & 0xFFFFF) - kOff; }
    static int iy(BoxKey k) { return int(k & 0xFFFFF) - kOff; }
    cplx center(BoxKey k) const { return {ix(k) * delta_, iy(k) * delta_}; }
    double half_width() const { return 0.5 * delta_; }

    /// Box of p read in `chart`; false outside the grid.
    bool box_in(int v, const SpherePoint& p, Chart chart, BoxKey& out) const;
    /// All boxes holding p (one per chart where it is representable).
    int register_point(int v, const SpherePoint& p, BoxKey out[2]) const;
    bool in_range(int ix, int iy) const { return ix >= -n_ && ix <= n_ && iy >= -n_ && iy <= n_; }

private:
    static constexpr int kOff = 1 << 19;
    double delta_;
    int n_;
};

/// Per-vertex sorted box sets.
class BoxSet {
public:
    BoxSet() = default;
    explicit BoxSet(int vertices) : sets_(std::size_t(vertices)) {}

    int vertices() const { return int(sets_.size()); }
    const std::vector<BoxKey>& at(int v) const { return sets_[std::size_t(v)]; }
    std::vector<BoxKey>& at(int v) { return sets_[std::size_t(v)]; }
    void normalize();  // sort + unique
    bool contains(BoxKey k) const;
    bool contains_point(const BoxGrid& grid, int v, const SpherePoint& p) const;
    bool overlaps(const BoxSet& other) const;
    bool subset_of(const BoxSet& other) const;
    void merge(const BoxSet& other);
    std::size_t size() const;
    bool empty_at_some_vertex() const;

    friend bool operator==(const BoxSet&, const BoxSet&) = default;

private:
    std::vector<std::vector<BoxKey>> sets_;
};

/// k-box dilation within each chart, mirrored into the other chart where the
/// boxes are representable there.
BoxSet dilate(const BoxGrid& grid, const BoxSet& s, int k);
/// Boxes of s with at least one 8-neighbor outside s.
BoxSet boundary(const BoxSet& s);

struct MinimalSetCover {
    double delta = 0.01;
    BoxSet boxes;
    std::vector<std::pair<SpherePoint, int>> points;  // representatives
    SpherePoint seed;
    int seed_vertex = 0;
    std::string origin;  // "periodic" or "tail"
    bool stable = true;
};

/// Hausdorff chordal distance between box centers of a cover at vertex v and
/// a point sample of a target set.
double hausdorff_to(const BoxGrid& grid, const BoxSet& s, int v, const std::vector<SpherePoint>& target);

}  // namespace mrds
