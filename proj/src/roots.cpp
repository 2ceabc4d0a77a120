#include "mrds/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mrds {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HornerEval {
    cplx value;
    cplx deriv;
    double bound;  // sum |a_k| |z|^k, for the backward-error stopping test
};

HornerEval horner(std::span<const cplx> a, cplx z) {
    const double az = std::abs(z);
    cplx p = a.back();
    cplx dp{0.0, 0.0};
    double b = std::abs(a.back());
    for (std::size_t k = a.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[k];
        b = b * az + std::abs(a[k]);
    }
    return {p, dp, b};
}

double cauchy_radius(std::span<const cplx> a) {
    const std::size_t n = a.size() - 1;
    const double lead = std::abs(a[n]);
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::abs(a[k]) / lead;
        if (c > 0.0) r = std::max(r, std::pow(c, 1.0 / double(n - k)));
    }
    return r > 0.0 ? r : 1.0;
}

bool newton_polish(std::span<const cplx> a, cplx& z, int iters) {
    for (int it = 0; it < iters; ++it) {
        const HornerEval h = horner(a, z);
        if (std::abs(h.value) <= 8.0 * kEps * h.bound) return true;
        if (h.deriv == cplx{0.0, 0.0}) return false;
        z -= h.value / h.deriv;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    const HornerEval h = horner(a, z);
    return std::abs(h.value) <= 64.0 * kEps * h.bound;
}

std::vector<cplx> deflate(std::span<const cplx> a, cplx root) {
    // Synthetic division by (z - root).
    const std::size_t n = a.size() - 1;
    std::vector<cplx> q(n);
    cplx carry = a[n];
    for (std::size_t k = n; k-- > 0;) {
        q[k] = carry;
        carry = a[k] + carry * root;
    }
    return q;
}

}  // namespace

RootResult polynomial_roots(std::span<const cplx> coeffs, int max_iterations) {
    RootResult res;
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) return res;
    if (n == 1) {
        res.roots.push_back(-coeffs[0] / coeffs[1]);
        return res;
    }
    const double radius = cauchy_radius(coeffs);
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * double(k) / double(n) + 0.4);
    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    int it = 0;
    for (; it < max_iterations && remaining > 0; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            const HornerEval h = horner(coeffs, z[k]);
            if (std::abs(h.value) <= 8.0 * kEps * h.bound) {
                done[k] = true;
                --remaining;
                continue;
            }
            const cplx ratio = h.value / h.deriv;
            cplx sum{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            const cplx w = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[k] -= w;
            if (std::abs(w) <= 4.0 * kEps * (1.0 + std::abs(z[k]))) {
                done[k] = true;
                --remaining;
            }
        }
    }
    res.iterations = it;
    if (remaining == 0) {
        res.roots = std::move(z);
        return res;
    }
    // Fallback: repeated Newton with deflation, starting from the Aberth
    // approximations.
    std::vector<cplx> poly(coeffs.begin(), coeffs.end());
    res.roots.clear();
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
        cplx r = z[k];
        if (!newton_polish(poly, r, 100)) ok = false;
        if (!newton_polish(coeffs, r, 5)) ok = false;
        res.roots.push_back(r);
        if (poly.size() > 2) poly = deflate(poly, r);
    }
    res.converged = ok;
    return res;
}

std::vector<SphereRoot> sphere_roots(std::span<const cplx> coeffs, bool& converged,
                                     double cluster_tol) {
    converged = true;
    const std::size_t formal = coeffs.size() - 1;
    double scale = 0.0;
    for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
    std::vector<SphereRoot> out;
    if (scale == 0.0) return out;
    const double zero_tol = 1e-14 * scale;

    // Work in the chart where the leading coefficient dominates.
    const bool inverted = std::abs(coeffs[formal]) < std::abs(coeffs[0]);
    std::vector<cplx> a(coeffs.begin(), coeffs.end());
    if (inverted) std::reverse(a.begin(), a.end());
    const Chart chart = inverted ? Chart::Inverted : Chart::Standard;

    std::size_t lo = 0;
    while (lo < a.size() && std::abs(a[lo]) <= zero_tol) ++lo;
    std::size_t hi = a.size() - 1;
    while (hi > lo && std::abs(a[hi]) <= zero_tol) --hi;

    std::vector<SphereRoot> raw;
    const std::size_t at_origin = lo;
    const std::size_t at_far = formal - hi;
    if (at_origin > 0) raw.push_back({normalize({chart, {0.0, 0.0}}), int(at_origin)});
    if (at_far > 0) raw.push_back({normalize({other(chart), {0.0, 0.0}}), int(at_far)});
    if (hi > lo) {
        std::span<const cplx> core(a.data() + lo, hi - lo + 1);
        RootResult rr = polynomial_roots(core);
        converged = rr.converged;
        for (const cplx& r : rr.roots) {
            if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
                converged = false;
                continue;
            }
            raw.push_back({normalize({chart, r}), 1});
        }
    }
    for (const SphereRoot& r : raw) {
        bool merged = false;
        for (SphereRoot& o : out) {
            if (chordal_dist(o.point, r.point) <= cluster_tol) {
                o.multiplicity += r.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(r);
    }
    return out;
}

}  // namespace mrds
