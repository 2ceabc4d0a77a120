#include "mrds/sphere.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mrds/error.hpp"

namespace mrds {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidPoint: return "invalid-point";
    case ErrorKind::InvalidMap: return "invalid-map";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Irreducible: return "irreducibility";
    case ErrorKind::Stochasticity: return "stochasticity";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::Unsupported: return "unsupported-operation";
    case ErrorKind::SeedFailure: return "seed-failure";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Schema: return "schema";
    }
    return "error";
}

SpherePoint SpherePoint::from_complex(cplx z) { return normalize({Chart::Standard, z}); }

cplx SpherePoint::to_complex() const {
    if (chart == Chart::Standard) return coord;
    if (coord == cplx{0.0, 0.0}) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return 1.0 / coord;
}

double SpherePoint::modulus() const {
    if (chart == Chart::Standard) return std::abs(coord);
    const double a = std::abs(coord);
    return a == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / a;
}

SpherePoint normalize(SpherePoint p) {
    if (!std::isfinite(p.coord.real()) || !std::isfinite(p.coord.imag()))
        throw Error(ErrorKind::InvalidPoint, "non-finite chart coordinate");
    if (std::abs(p.coord) > kChartLimit) {
        p.chart = other(p.chart);
        p.coord = 1.0 / p.coord;
    }
    return p;
}

SpherePoint canonical(SpherePoint p) {
    p = normalize(p);
    const double a = std::abs(p.coord);
    if (a > 1.0 || (a == 1.0 && p.chart == Chart::Inverted)) {
        p.chart = other(p.chart);
        p.coord = 1.0 / p.coord;
    }
    return p;
}

cplx coord_in(const SpherePoint& p, Chart c) {
    if (p.chart == c) return p.coord;
    if (p.coord == cplx{0.0, 0.0}) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return 1.0 / p.coord;
}

double chordal_dist(const SpherePoint& a, const SpherePoint& b) {
    const cplx z = a.coord;
    const cplx w = b.coord;
    const double nz = 1.0 + std::norm(z);
    const double nw = 1.0 + std::norm(w);
    // Inversion is an isometry, so same-chart pairs use the plain formula and
    // mixed pairs use z and 1/u with the factor |u| cleared.
    if (a.chart == b.chart) return 2.0 * std::abs(z - w) / std::sqrt(nz * nw);
    return 2.0 * std::abs(z * w - 1.0) / std::sqrt(nz * nw);
}

SpherePoint sphere_point_from_uniforms(double u1, double u2) {
    // Area-uniform: height h in [-1,1] uniform, angle uniform.
    const double h = 2.0 * u1 - 1.0;
    const double phi = 2.0 * std::numbers::pi * u2;
    const double r = std::sqrt(std::max(0.0, 1.0 - h * h));
    // Stereographic projection from the north pole (h = 1 is infinity).
    if (h >= 1.0) return SpherePoint::infinity();
    const double scale = 1.0 / (1.0 - h);
    if (h > 0.0) {
        // |z| > 1: use the inverted chart, 1/z = (1 - h)/r e^{-i phi}.
        if (r == 0.0) return SpherePoint::infinity();
        return normalize({Chart::Inverted, std::polar((1.0 - h) / r, -phi)});
    }
    return normalize({Chart::Standard, std::polar(r * scale, phi)});
}

}  // namespace mrds
