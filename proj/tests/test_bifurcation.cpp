#include <doctest.h>

#include <cmath>

#include "mrds/bifurcation.hpp"
#include "mrds/error.hpp"

using namespace mrds;

TEST_CASE("parameter grid") {
    const auto grid = parameter_grid(20);
    REQUIRE(grid.size() == 400);
    cplx sum = 0.0;
    for (cplx c : grid) {
        CHECK(std::abs(c.real()) < 1.0);
        CHECK(std::abs(c.imag()) < 1.0);
        sum += c;
    }
    CHECK(std::abs(sum) < 1e-12);
    CHECK_THROWS_AS(parameter_grid(0), Error);
}

TEST_CASE("minimal-set counts are non-increasing in s at c = 0") {
    const NoiseFamily fam = NoiseFamily::quadratic();
    VerdictParams vp;
    const ScanResult r = scan_s(fam, 0.0, {0.05, 0.1, 0.2, 0.3, 0.5}, vp);
    CHECK(r.monotone);
    REQUIRE(r.entries.size() == 5);
    CHECK(r.entries[0].count == 2);
    CHECK(r.entries[2].count == 2);
    CHECK(r.entries[3].count == 1);
    for (const auto& e : r.entries) CHECK(e.mean_stable);
    CHECK(minimal_count(fam, 0.0, 10.0, vp.detect) == 1);
}

TEST_CASE("bifurcation points at c = 0 are stable under halving delta") {
    const NoiseFamily fam = NoiseFamily::quadratic();
    const double tol = 0.02;
    VerdictParams vp;
    const BifReport a = find_bif_points(fam, 0.0, 0.05, 0.5, tol, vp);
    REQUIRE(a.points.size() == 2);
    CHECK(a.points[0] == 0.0);
    CHECK(std::abs(a.points[1] - 0.25) <= tol);
    CHECK(a.alpha == 2);
    CHECK(a.bound_ok);
    vp.detect.delta *= 0.5;
    const BifReport b = find_bif_points(fam, 0.0, 0.05, 0.5, tol, vp);
    REQUIRE(b.points.size() == a.points.size());
    CHECK(std::abs(b.points[1] - a.points[1]) <= tol);
}

TEST_CASE("tolerance floor") {
    VerdictParams vp;
    CHECK_THROWS_AS(find_bif_points(NoiseFamily::quadratic(), 0.0, 0.05, 0.5, 1e-4, vp), Error);
}

TEST_CASE("template family rescales disk radii") {
    const Gdms base = Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::quadratic({-0.1, 0.0}, 0.2)}});
    const NoiseFamily fam = NoiseFamily::from_template(base);
    const Gdms g = fam.build(0.0, 0.05);
    CHECK(g.edge(0).family.disk_params().radius == doctest::Approx(0.05));
    CHECK(g.edge(0).family.disk_params().center == cplx{-0.1, 0.0});
    CHECK(fam.build(0.0, 0.0).deterministic());
}
