#include "mrds/grid.hpp"

#include <cmath>
#include <numbers>

#include "mrds/error.hpp"

namespace mrds {

GridMask::GridMask(int resolution, int vertices) : R_(resolution), m_(vertices) {
    if (resolution < 2 || vertices < 1) throw Error(ErrorKind::InvalidArgument, "bad grid shape");
    bits_.assign(std::size_t(2) * std::size_t(vertices) * std::size_t(R_) * std::size_t(R_), 0);
}

CellRef GridMask::cell(std::size_t i) const {
    CellRef c;
    c.ix = int(i % std::size_t(R_));
    i /= std::size_t(R_);
    c.iy = int(i % std::size_t(R_));
    i /= std::size_t(R_);
    c.chart = Chart(i % 2);
    c.vertex = int(i / 2);
    return c;
}

cplx GridMask::center(const CellRef& c) const {
    const double h = cell_size();
    return {-kGridExtent + (c.ix + 0.5) * h, -kGridExtent + (c.iy + 0.5) * h};
}

bool GridMask::locate_in(int v, const SpherePoint& p, Chart chart, CellRef& out) const {
    const cplx z = coord_in(p, chart);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    const double h = cell_size();
    const double fx = std::floor((z.real() + kGridExtent) / h);
    const double fy = std::floor((z.imag() + kGridExtent) / h);
    if (fx < 0 || fy < 0 || fx >= R_ || fy >= R_) return false;
    out = {v, chart, int(fx), int(fy)};
    return true;
}

CellRef GridMask::locate(int v, const SpherePoint& p) const {
    const SpherePoint q = canonical(p);
    CellRef c;
    locate_in(v, q, q.chart, c);
    return c;
}

bool GridMask::near(int v, const SpherePoint& p, int dilate) const {
    for (Chart ch : {Chart::Standard, Chart::Inverted}) {
        CellRef c;
        if (!locate_in(v, p, ch, c)) continue;
        for (int dy = -dilate; dy <= dilate; ++dy)
            for (int dx = -dilate; dx <= dilate; ++dx) {
                const int x = c.ix + dx, y = c.iy + dy;
                if (x < 0 || y < 0 || x >= R_ || y >= R_) continue;
                if (get(CellRef{v, ch, x, y})) return true;
            }
    }
    return false;
}

double GridMask::area_weight(const CellRef& c) const {
    const cplx z = center(c);
    const double r2 = std::norm(z);
    if (r2 > 1.0) return 0.0;
    const double h = cell_size();
    return 4.0 * h * h / ((1.0 + r2) * (1.0 + r2));
}

double GridMask::area_fraction(int v) const {
    double on = 0.0, total = 0.0;
    const std::size_t base = std::size_t(v) * cells_per_vertex();
    for (std::size_t i = base; i < base + cells_per_vertex(); ++i) {
        const double w = area_weight(cell(i));
        total += w;
        if (bits_[i]) on += w;
    }
    return total > 0.0 ? on / total : 0.0;
}

std::size_t GridMask::count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits_) n += b;
    return n;
}

}  // namespace mrds
