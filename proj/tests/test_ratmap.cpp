#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mrds/error.hpp"
#include "mrds/ratmap.hpp"
#include "mrds/rng.hpp"
#include "mrds/roots.hpp"

using namespace mrds;

namespace {

// Spherical derivative of z^2: |2z| (1 + |z|^2) / (1 + |z|^4).
double z2_sphere_deriv(cplx z) {
    const double r = std::abs(z);
    return 2 * r * (1 + r * r) / (1 + r * r * r * r);
}

RationalMap lattes() { return RationalMap::rational({1.0, 0.0, 2.0, 0.0, 1.0}, {0.0, -4.0, 0.0, 4.0}); }

}  // namespace

TEST_CASE("Aberth roots of an expanded product") {
    // (z - 1)(z - 2)(z - i) = z^3 - (3+i) z^2 + (2+3i) z - 2i
    const std::vector<cplx> c{{0, -2}, {2, 3}, {-3, -1}, {1, 0}};
    const RootResult r = polynomial_roots(c);
    REQUIRE(r.converged);
    REQUIRE(r.roots.size() == 3);
    for (cplx want : {cplx{1, 0}, cplx{2, 0}, cplx{0, 1}}) {
        double best = 1.0;
        for (cplx z : r.roots) best = std::min(best, std::abs(z - want));
        CHECK(best < 1e-12);
    }
}

TEST_CASE("sphere roots count missing leading terms at infinity") {
    bool ok = false;
    // formal degree 3, actual degree 1: root 0.5 and a double root at infinity
    const std::vector<cplx> c{{-1, 0}, {2, 0}, {0, 0}, {0, 0}};
    const auto roots = sphere_roots(c, ok);
    CHECK(ok);
    int total = 0, at_inf = 0;
    for (const auto& r : roots) {
        total += r.multiplicity;
        if (r.point.is_infinity()) at_inf += r.multiplicity;
    }
    CHECK(total == 3);
    CHECK(at_inf == 2);
}

TEST_CASE("construction rejects bad maps") {
    CHECK_THROWS_AS(RationalMap::polynomial({1.0, 2.0}), Error);
    std::vector<cplx> big(18, 0.0);
    big.back() = 1.0;
    CHECK_THROWS_AS(RationalMap::polynomial(big), Error);
    // (z^2 - 1) / (z - 1) shares the root 1
    CHECK_THROWS_AS(RationalMap::rational({-1.0, 0.0, 1.0}, {-1.0, 1.0}), Error);
    CHECK_NOTHROW(lattes());
    CHECK(lattes().degree() == 4);
}

TEST_CASE("evaluation of z^2 in both charts") {
    const RationalMap f = RationalMap::polynomial({0.0, 0.0, 1.0});
    CHECK(std::abs(f.eval(SpherePoint::from_complex({0.3, 0.4})).to_complex() - cplx{-0.07, 0.24}) < 1e-15);
    CHECK(f.eval(SpherePoint::infinity()).is_infinity());
    const SpherePoint big = SpherePoint::from_complex({10.0, 0.0});
    CHECK(std::abs(f.eval(big).to_complex() - 100.0) < 1e-10);
    CounterRng rng(1, 0);
    for (int k = 0; k < 500; ++k) {
        const SpherePoint p = sphere_point_from_uniforms(rng.uniform(), rng.uniform());
        if (p.is_infinity()) continue;
        CHECK(f.deriv_norm(p) == doctest::Approx(z2_sphere_deriv(p.to_complex())).epsilon(1e-10));
        double n = 0.0;
        const SpherePoint q = f.eval_with_norm(p, n);
        CHECK(chordal_dist(q, f.eval(p)) < 1e-15);
        CHECK(n == doctest::Approx(f.deriv_norm(p)).epsilon(1e-12));
    }
}

TEST_CASE("preimages map back with total multiplicity d") {
    CounterRng rng(2, 0);
    for (const RationalMap& f : {RationalMap::polynomial({{0.1, 0.2}, 0.0, 1.0}), lattes(),
                                 RationalMap::rational({1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0})}) {
        for (int k = 0; k < 50; ++k) {
            const SpherePoint w = sphere_point_from_uniforms(rng.uniform(), rng.uniform());
            int total = 0;
            for (const Preimage& pre : f.preimages(w)) {
                total += pre.multiplicity;
                CHECK(chordal_dist(f.eval(pre.point), w) < 1e-7);
            }
            CHECK(total == f.degree());
        }
    }
    // critical value 0 of z^2 has a double preimage
    const auto pre = RationalMap::polynomial({0.0, 0.0, 1.0}).preimages(SpherePoint::from_complex(0.0));
    REQUIRE(pre.size() == 1);
    CHECK(pre[0].multiplicity == 2);
}

TEST_CASE("fixed points and multipliers of z^2") {
    const RationalMap f = RationalMap::polynomial({0.0, 0.0, 1.0});
    const auto fp = f.fixed_points();
    REQUIRE(fp.size() == 3);
    int seen = 0;
    for (const SpherePoint& p : fp) {
        if (p.is_infinity() || std::abs(p.to_complex()) < 1e-12) {
            CHECK(f.multiplier(p) < 1e-12);
            ++seen;
        } else {
            CHECK(std::abs(p.to_complex() - 1.0) < 1e-12);
            CHECK(f.multiplier(p) == doctest::Approx(2.0));
            ++seen;
        }
    }
    CHECK(seen == 3);
}

TEST_CASE("box Lipschitz bound dominates sampled chart derivatives") {
    CounterRng rng(9, 0);
    const RationalMap maps[] = {RationalMap::polynomial({{-0.5, 0.2}, 0.0, 1.0}), lattes()};
    for (const RationalMap& f : maps) {
        for (int k = 0; k < 200; ++k) {
            Box b;
            b.chart = rng.uniform() < 0.5 ? Chart::Standard : Chart::Inverted;
            b.center = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
            b.half_width = 0.005;
            const double L = lipschitz_bound(f, b);
            const SpherePoint c = f.eval({b.chart, b.center});
            const Chart out = canonical(c).chart;
            for (int j = 0; j < 20; ++j) {
                const cplx x = b.center + cplx{(2 * rng.uniform() - 1) * b.half_width, (2 * rng.uniform() - 1) * b.half_width};
                const ChartJet jet = f.local(b.chart, x, out);
                if (!jet.pole) CHECK(std::abs(jet.deriv) <= L);
            }
        }
    }
}

TEST_CASE("disk images contain the images of sampled points") {
    CounterRng rng(4, 0);
    const RationalMap f = RationalMap::polynomial({{0.05, -0.03}, 0.0, 1.0});
    for (int k = 0; k < 300; ++k) {
        Disk d;
        d.chart = rng.uniform() < 0.5 ? Chart::Standard : Chart::Inverted;
        d.center = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        d.radius = 0.01 * rng.uniform();
        const Disk img = image_disk(f, d);
        for (int j = 0; j < 20; ++j) {
            const cplx x = d.center + std::polar(d.radius * std::sqrt(rng.uniform()), 6.283185 * rng.uniform());
            const cplx y = coord_in(f.eval({d.chart, x}), img.chart);
            CHECK(std::abs(y - img.center) <= img.radius);
        }
    }
}
