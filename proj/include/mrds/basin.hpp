#pragma once

#include <cstdint>
#include <vector>

#include "mrds/cover.hpp"
#include "mrds/gdms.hpp"
#include "mrds/grid.hpp"

namespace mrds {

struct BasinEstimate {
    std::vector<SpherePoint> points;
    int vertices = 0;
    int n_orbits = 0;
    int length = 0;
    // [set][point * vertices + vertex]
    std::vector<std::vector<double>> value;
    std::vector<std::vector<double>> ci95;
    std::vector<double> undecided;  // [point * vertices + vertex]
    // [set][point], averaged with the stationary vector
    std::vector<std::vector<double>> averaged;
};

/// Monte Carlo basin probabilities; an orbit belongs to the first set whose
/// dilated cover holds its whole tail (last 10%) at the matching vertices.
BasinEstimate estimate_T_mc(const Gdms& g, const std::vector<MinimalSetCover>& sets,
                            const std::vector<SpherePoint>& points, int n_orbits, int length, std::uint64_t seed,
                            int dilate_boxes = 2);
BasinEstimate estimate_T_mc_serial(const Gdms& g, const std::vector<MinimalSetCover>& sets,
                                   const std::vector<SpherePoint>& points, int n_orbits, int length,
                                   std::uint64_t seed, int dilate_boxes = 2);

/// Values at cell centers on the GridMask geometry, every vertex and chart.
struct GridField {
    GridMask geometry;
    std::vector<double> values;

    GridField() = default;
    GridField(int resolution, int vertices, double fill = 0.0)
        : geometry(resolution, vertices), values(geometry.cells(), fill) {}
    /// Bilinear read in the canonical chart of p.
    double at(int v, const SpherePoint& p) const;
};

/// 1 on cells whose center lies in the dilated cover, else 0.
GridField cover_indicator(const MinimalSetCover& c, int resolution, int dilate_boxes = 2);

/// Precomputed transition operator on a field's grid.
class TransitionOperator {
public:
    TransitionOperator(const Gdms& g, int resolution, int quadrature_size);
    GridField apply(const GridField& f) const;
    GridField apply_serial(const GridField& f) const;
    GridField iterate(GridField f, int n) const;
    std::size_t terms() const { return taps_.size(); }

private:
    struct Tap {
        std::uint32_t base;  // cell index of the lower-left neighbor
        float fx, fy;
        double weight;
    };
    int R_;
    int m_;
    std::vector<std::size_t> start_;  // per cell, into taps_
    std::vector<Tap> taps_;
    void apply_range(const GridField& f, GridField& out, std::size_t lo, std::size_t hi) const;
};

GridField operator_iterate(const Gdms& g, const GridField& phi, int n, int quadrature_size);

}  // namespace mrds
