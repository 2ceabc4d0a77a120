#pragma once

#include <complex>
#include <cstdint>

namespace mrds {

using cplx = std::complex<double>;

enum class Chart : std::uint8_t { Standard = 0, Inverted = 1 };

/// Chart switching happens only once |coord| exceeds 1 + hysteresis.
inline constexpr double kChartHysteresis = 0.25;
inline constexpr double kChartLimit = 1.0 + kChartHysteresis;

inline Chart other(Chart c) { return c == Chart::Standard ? Chart::Inverted : Chart::Standard; }

/// A point of the Riemann sphere. In the Standard chart it is `coord`, in the
/// Inverted chart it is 1/coord; (Inverted, 0) is infinity.
struct SpherePoint {
    Chart chart = Chart::Standard;
    cplx coord{0.0, 0.0};

    static SpherePoint infinity() { return {Chart::Inverted, {0.0, 0.0}}; }
    /// Normalized point for a finite plane value.
    static SpherePoint from_complex(cplx z);

    bool is_infinity() const { return chart == Chart::Inverted && coord == cplx{0.0, 0.0}; }
    /// Plane value; infinite for the point at infinity.
    cplx to_complex() const;
    /// |z| on the plane (may be +inf).
    double modulus() const;

    friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
};

/// Re-expresses p so that |coord| <= kChartLimit. Throws InvalidPoint on
/// non-finite coordinates.
SpherePoint normalize(SpherePoint p);

/// Representation with the switch at |coord| = 1 exactly; used for lattice keys.
SpherePoint canonical(SpherePoint p);

/// Coordinate of p in a given chart (possibly large or infinite).
cplx coord_in(const SpherePoint& p, Chart c);

/// Chordal metric 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)); diameter 2.
double chordal_dist(const SpherePoint& a, const SpherePoint& b);

/// Uniformly distributed point on the sphere from two uniforms in [0,1).
SpherePoint sphere_point_from_uniforms(double u1, double u2);

}  // namespace mrds
