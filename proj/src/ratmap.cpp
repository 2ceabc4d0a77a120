#include "mrds/ratmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrds/error.hpp"
#include "mrds/roots.hpp"

namespace mrds {

namespace {

constexpr double kSafety = 1.2;
constexpr double kCommonRootTol = 1e-9;

int trimmed_degree(std::span<const cplx> c) {
    int d = int(c.size()) - 1;
    while (d >= 0 && c[std::size_t(d)] == cplx{0.0, 0.0}) --d;
    return d;
}

std::vector<cplx> plane_roots(std::span<const cplx> c, int deg) {
    if (deg < 1) return {};
    RootResult r = polynomial_roots(c.subspan(0, std::size_t(deg) + 1));
    return r.roots;
}

}  // namespace

void RationalMap::init(std::span<const cplx> num, std::span<const cplx> den) {
    const int dn = trimmed_degree(num);
    const int dd = trimmed_degree(den);
    if (dn < 0) throw Error(ErrorKind::InvalidMap, "zero numerator");
    if (dd < 0) throw Error(ErrorKind::InvalidMap, "zero denominator");
    degree_ = std::max(dn, dd);
    if (degree_ < 2) throw Error(ErrorKind::InvalidMap, "degree below 2");
    if (degree_ > kMaxDegree) throw Error(ErrorKind::InvalidMap, "degree above 16");
    num_.fill({0.0, 0.0});
    den_.fill({0.0, 0.0});
    std::copy_n(num.begin(), dn + 1, num_.begin());
    std::copy_n(den.begin(), dd + 1, den_.begin());
    polynomial_ = dd == 0;
}

RationalMap::RationalMap(std::span<const cplx> num, std::span<const cplx> den) {
    init(num, den);
    const int dn = trimmed_degree(num);
    const int dd = trimmed_degree(den);
    if (dn >= 1 && dd >= 1) {
        for (const cplx& a : plane_roots(num, dn))
            for (const cplx& b : plane_roots(den, dd))
                if (std::abs(a - b) <= kCommonRootTol)
                    throw Error(ErrorKind::InvalidMap, "numerator and denominator share a root");
    }
}

RationalMap RationalMap::polynomial(std::span<const cplx> coeffs) {
    const cplx one{1.0, 0.0};
    return RationalMap(coeffs, std::span<const cplx>(&one, 1));
}

RationalMap RationalMap::polynomial(std::initializer_list<cplx> coeffs) {
    return polynomial(std::span<const cplx>(coeffs.begin(), coeffs.size()));
}

RationalMap RationalMap::rational(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
    return RationalMap(std::span<const cplx>(num.begin(), num.size()),
                       std::span<const cplx>(den.begin(), den.size()));
}

RationalMap RationalMap::unchecked(std::span<const cplx> num, std::span<const cplx> den) {
    RationalMap f;
    f.init(num, den);
    return f;
}

std::vector<cplx> RationalMap::numerator() const {
    std::vector<cplx> v(num_.begin(), num_.begin() + degree_ + 1);
    while (v.size() > 1 && v.back() == cplx{0.0, 0.0}) v.pop_back();
    return v;
}

std::vector<cplx> RationalMap::denominator() const {
    std::vector<cplx> v(den_.begin(), den_.begin() + degree_ + 1);
    while (v.size() > 1 && v.back() == cplx{0.0, 0.0}) v.pop_back();
    return v;
}

void RationalMap::nd(Chart chart, cplx x, cplx& n, cplx& dn, cplx& d, cplx& dd) const {
    const int deg = degree_;
    n = dn = d = dd = {0.0, 0.0};
    if (chart == Chart::Standard) {
        for (int k = deg; k >= 0; --k) {
            dn = dn * x + n;
            n = n * x + num_[std::size_t(k)];
            dd = dd * x + d;
            d = d * x + den_[std::size_t(k)];
        }
    } else {
        // f(1/u) = (sum a_k u^{deg-k}) / (sum b_k u^{deg-k}).
        for (int k = 0; k <= deg; ++k) {
            dn = dn * x + n;
            n = n * x + num_[std::size_t(k)];
            dd = dd * x + d;
            d = d * x + den_[std::size_t(k)];
        }
    }
}

SpherePoint RationalMap::eval(const SpherePoint& p) const {
    cplx n, dn, d, dd;
    nd(p.chart, p.coord, n, dn, d, dd);
    if (n == cplx{0.0, 0.0} && d == cplx{0.0, 0.0})
        throw Error(ErrorKind::InvalidMap, "0/0 in evaluation");
    if (std::norm(n) <= kChartLimit * kChartLimit * std::norm(d)) return {Chart::Standard, n / d};
    return {Chart::Inverted, d / n};
}

SpherePoint RationalMap::eval_with_norm(const SpherePoint& p, double& norm) const {
    cplx n, dn, d, dd;
    nd(p.chart, p.coord, n, dn, d, dd);
    const double nn = std::norm(n) + std::norm(d);
    if (nn == 0.0) throw Error(ErrorKind::InvalidMap, "0/0 in evaluation");
    norm = std::abs(dn * d - n * dd) * (1.0 + std::norm(p.coord)) / nn;
    if (std::norm(n) <= kChartLimit * kChartLimit * std::norm(d)) return {Chart::Standard, n / d};
    return {Chart::Inverted, d / n};
}

double RationalMap::deriv_norm(const SpherePoint& p) const {
    double norm = 0.0;
    eval_with_norm(p, norm);
    return norm;
}

ChartJet RationalMap::local(Chart in, cplx x, Chart out) const {
    cplx n, dn, d, dd;
    nd(in, x, n, dn, d, dd);
    ChartJet j;
    if (out == Chart::Standard) {
        if (d == cplx{0.0, 0.0}) {
            j.pole = true;
            return j;
        }
        j.value = n / d;
        j.deriv = (dn * d - n * dd) / (d * d);
    } else {
        if (n == cplx{0.0, 0.0}) {
            j.pole = true;
            return j;
        }
        j.value = d / n;
        j.deriv = (dd * n - d * dn) / (n * n);
    }
    return j;
}

std::vector<Preimage> RationalMap::preimages(const SpherePoint& w) const {
    // Roots of N - w D (Standard) or u N - D (Inverted), formal degree deg.
    std::vector<cplx> c(std::size_t(degree_) + 1);
    for (int k = 0; k <= degree_; ++k) {
        const std::size_t i = std::size_t(k);
        c[i] = w.chart == Chart::Standard ? num_[i] - w.coord * den_[i] : w.coord * num_[i] - den_[i];
    }
    bool ok = true;
    std::vector<SphereRoot> roots = sphere_roots(c, ok);
    std::vector<Preimage> out;
    int total = 0;
    for (const SphereRoot& r : roots) {
        out.push_back({r.point, r.multiplicity});
        total += r.multiplicity;
    }
    if (!ok || total != degree_)
        throw Error(ErrorKind::NumericFailure, "preimage root finder did not converge");
    return out;
}

std::vector<SpherePoint> RationalMap::fixed_points() const {
    // N(z) - z D(z) with formal degree deg + 1.
    std::vector<cplx> c(std::size_t(degree_) + 2, {0.0, 0.0});
    for (int k = 0; k <= degree_; ++k) {
        c[std::size_t(k)] += num_[std::size_t(k)];
        c[std::size_t(k) + 1] -= den_[std::size_t(k)];
    }
    bool ok = true;
    std::vector<SphereRoot> roots = sphere_roots(c, ok, 1e-7);
    if (!ok) throw Error(ErrorKind::NumericFailure, "fixed-point root finder did not converge");
    std::vector<SpherePoint> out;
    for (const SphereRoot& r : roots) out.push_back(r.point);
    return out;
}

double RationalMap::multiplier(const SpherePoint& fixed) const {
    const SpherePoint q = canonical(fixed);
    const ChartJet j = local(q.chart, q.coord, q.chart);
    if (j.pole) return 0.0;
    return std::abs(j.deriv);
}

double lipschitz_bound(const RationalMap& f, const Box& b) {
    if (!(b.half_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "box half-width must be positive");
    if (std::abs(b.center) + b.half_width > 1.5)
        throw Error(ErrorKind::InvalidArgument, "box leaves its chart's valid region");
    const Chart out = canonical(f.eval({b.chart, b.center})).chart;
    double best = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const cplx x = b.center + b.half_width * cplx(-1.0 + 0.5 * i, -1.0 + 0.5 * j);
            const ChartJet jet = f.local(b.chart, x, out);
            if (jet.pole) return std::numeric_limits<double>::infinity();
            best = std::max(best, std::norm(jet.deriv));
        }
    }
    return kSafety * std::sqrt(best);
}

Box image_enclosure(const RationalMap& f, const Box& b) {
    const SpherePoint img = canonical(f.eval({b.chart, b.center}));
    const double bound = lipschitz_bound(f, b);
    return {img.chart, img.coord, bound * b.half_width * std::sqrt(2.0)};
}

Disk image_disk(const RationalMap& f, const Disk& d) {
    const SpherePoint img = canonical(f.eval({d.chart, d.center}));
    const double bound = lipschitz_bound(f, Box{d.chart, d.center, d.radius});
    return {img.chart, img.coord, bound * d.radius};
}

}  // namespace mrds
