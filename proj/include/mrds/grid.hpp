#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrds/sphere.hpp"

namespace mrds {

inline constexpr double kGridExtent = kChartLimit;  // cells span [-1.25, 1.25]^2 per chart

struct CellRef {
    int vertex = 0;
    Chart chart = Chart::Standard;
    int ix = 0;
    int iy = 0;
};

/// R x R cells per chart per vertex over [-1.25, 1.25]^2.
class GridMask {
public:
    GridMask() = default;
    GridMask(int resolution, int vertices);

    int resolution() const { return R_; }
    int vertices() const { return m_; }
    double cell_size() const { return 2.0 * kGridExtent / R_; }
    std::size_t cells() const { return bits_.size(); }
    std::size_t cells_per_vertex() const { return std::size_t(2) * std::size_t(R_) * std::size_t(R_); }

    std::size_t index(const CellRef& c) const {
        return ((std::size_t(c.vertex) * 2 + std::size_t(c.chart)) * std::size_t(R_) + std::size_t(c.iy)) *
                   std::size_t(R_) +
               std::size_t(c.ix);
    }
    CellRef cell(std::size_t index) const;
    cplx center(const CellRef& c) const;

    bool get(std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
    bool get(const CellRef& c) const { return get(index(c)); }

    /// Cell holding p at vertex v, in the canonical chart of p.
    CellRef locate(int v, const SpherePoint& p) const;
    /// Cell holding p read in a given chart; false if outside the grid.
    bool locate_in(int v, const SpherePoint& p, Chart chart, CellRef& out) const;
    /// True if p lies within `dilate` cells of a set cell (either chart).
    bool near(int v, const SpherePoint& p, int dilate = 0) const;

    /// Spherical area fraction (of 4 pi) of set cells at vertex v.
    double area_fraction(int v) const;
    /// Area element weight of a cell; zero outside the unit disk of its chart.
    double area_weight(const CellRef& c) const;

    std::size_t count() const;
    const std::vector<std::uint8_t>& data() const { return bits_; }
    std::vector<std::uint8_t>& data() { return bits_; }

    friend bool operator==(const GridMask&, const GridMask&) = default;

private:
    int R_ = 0;
    int m_ = 0;
    std::vector<std::uint8_t> bits_;
};

}  // namespace mrds
