#pragma once

#include <array>
#include <span>
#include <vector>

#include "mrds/sphere.hpp"

namespace mrds {

inline constexpr int kMaxDegree = 16;

/// Value and derivative of a rational map read in a pair of charts.
struct ChartJet {
    cplx value;
    cplx deriv;
    bool pole = false;  // value is infinite in the requested output chart
};

struct Preimage {
    SpherePoint point;
    int multiplicity = 1;
};

/// A rational map of degree 2..16 stored as padded ascending coefficient
/// arrays. Compositions are never expanded; callers fold evaluations.
class RationalMap {
public:
    RationalMap() = default;
    /// Validating constructor: rejects degree < 2, degree > 16, and numerator
    /// and denominator with a common root (within 1e-9).
    RationalMap(std::span<const cplx> num, std::span<const cplx> den);
    static RationalMap polynomial(std::span<const cplx> coeffs);
    static RationalMap polynomial(std::initializer_list<cplx> coeffs);
    static RationalMap rational(std::initializer_list<cplx> num, std::initializer_list<cplx> den);
    /// Skips the common-root check; degree checks still apply. Used for
    /// parameter instantiations inside an already validated family.
    static RationalMap unchecked(std::span<const cplx> num, std::span<const cplx> den);

    int degree() const { return degree_; }
    bool is_polynomial() const { return polynomial_; }
    std::vector<cplx> numerator() const;
    std::vector<cplx> denominator() const;

    SpherePoint eval(const SpherePoint& p) const;
    /// Norm of the differential w.r.t. the spherical metric.
    double deriv_norm(const SpherePoint& p) const;
    /// The map read from chart `in` (at coordinate x) into chart `out`.
    ChartJet local(Chart in, cplx x, Chart out) const;
    /// Image together with the spherical derivative norm, sharing one Horner pass.
    SpherePoint eval_with_norm(const SpherePoint& p, double& norm) const;

    std::vector<Preimage> preimages(const SpherePoint& w) const;
    std::vector<SpherePoint> fixed_points() const;
    /// |derivative| at a fixed point, read in its canonical chart.
    double multiplier(const SpherePoint& fixed) const;

private:
    void init(std::span<const cplx> num, std::span<const cplx> den);
    // N and D with derivatives in the chart of the input point.
    void nd(Chart chart, cplx x, cplx& n, cplx& dn, cplx& d, cplx& dd) const;

    std::array<cplx, kMaxDegree + 1> num_{};
    std::array<cplx, kMaxDegree + 1> den_{};
    int degree_ = 0;
    bool polynomial_ = false;
};

/// Box in chart coordinates used for covers and witness sets.
struct Box {
    Chart chart = Chart::Standard;
    cplx center{0.0, 0.0};
    double half_width = 0.0;
};

/// Sampled upper estimate of the chart-to-chart derivative modulus over the
/// box (5x5 grid, safety factor 1.2). The output chart is the canonical chart
/// of the image of the center.
double lipschitz_bound(const RationalMap& f, const Box& b);

/// Box around the image of the center with half-width bound * hw * sqrt(2).
Box image_enclosure(const RationalMap& f, const Box& b);

/// Disk enclosure: image of the closed disk (chart, center, radius).
struct Disk {
    Chart chart = Chart::Standard;
    cplx center{0.0, 0.0};
    double radius = 0.0;
};
Disk image_disk(const RationalMap& f, const Disk& d);

}  // namespace mrds
