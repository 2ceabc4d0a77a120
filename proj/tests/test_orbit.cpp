#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mrds/error.hpp"
#include "mrds/orbit.hpp"

using namespace mrds;

namespace {

Gdms quad(double s) { return Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::quadratic(0.0, s)}}); }

}  // namespace

TEST_CASE("Lyapunov exponent of z^2 at the repelling fixed point 1") {
    const Gdms g = Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::dirac(RationalMap::polynomial({0.0, 0.0, 1.0}))}});
    const LyapunovEstimate e = lyapunov(g, SpherePoint::from_complex(1.0), 0, 10000, 4, 1);
    CHECK(std::abs(e.value - std::log(2.0)) < 1e-9);
    CHECK(e.ci95_halfwidth < 1e-12);
    CHECK_FALSE(e.clamped);
}

TEST_CASE("serial and parallel Lyapunov agree bitwise") {
    const Gdms g = quad(0.1);
    const SpherePoint z0 = SpherePoint::from_complex({0.2, -0.3});
    const LyapunovEstimate a = lyapunov(g, z0, 0, 500, 37, 5);
    const LyapunovEstimate b = lyapunov_serial(g, z0, 0, 500, 37, 5);
    CHECK(a.value == b.value);
    CHECK(a.ci95_halfwidth == b.ci95_halfwidth);
    CHECK(a.value < 0.0);
}

TEST_CASE("orbits are reproducible per (seed, stream)") {
    const Gdms g = quad(0.2);
    const SpherePoint z0 = SpherePoint::from_complex(0.1);
    const OrbitRecord a = run_orbit(g, z0, 0, 200, 9, 3);
    const OrbitRecord b = run_orbit(g, z0, 0, 200, 9, 3);
    const OrbitRecord c = run_orbit(g, z0, 0, 200, 9, 4);
    REQUIRE(a.size() == 201);
    bool same = true, differs = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        same = same && a.point(k) == b.point(k);
        differs = differs || !(a.point(k) == c.point(k));
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("the closed disk of radius r* is forward invariant") {
    // |z| <= r, |c| <= s  =>  |z^2 + c| <= r^2 + s = r  for r = (1 - sqrt(1 - 4 s)) / 2
    for (double s : {0.05, 0.1, 0.2, 0.24}) {
        const double r = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * s));
        const Gdms g = quad(s);
        for (int k = 0; k < 8; ++k) {
            const SpherePoint z0 = SpherePoint::from_complex(std::polar(r * k / 8.0, 0.7 * k));
            const OrbitRecord o = run_orbit(g, z0, 0, 2000, 1, std::uint64_t(k));
            double worst = 0.0;
            for (std::size_t j = 0; j < o.size(); ++j) worst = std::max(worst, o.point(j).modulus());
            CHECK(worst <= r + 1e-12);
        }
    }
}

TEST_CASE("escape radius") {
    const Gdms g = quad(0.3);
    const double R = escape_radius(g);
    CHECK(R >= 1.3 - 1e-12);
    // outside R every orbit escapes
    for (int k = 0; k < 20; ++k) {
        const OrbitRecord o = run_orbit(g, SpherePoint::from_complex(std::polar(R * 1.01, 0.3 * k)), 0, 50, 2, std::uint64_t(k));
        CHECK(escape_check(g, o).escaped);
    }
    CHECK_FALSE(escape_check(quad(0.1), run_orbit(quad(0.1), SpherePoint::from_complex(0.0), 0, 500, 2, 0)).escaped);
    const Gdms lat = Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::dirac(RationalMap::rational({1.0, 0.0, 2.0, 0.0, 1.0}, {0.0, -4.0, 0.0, 4.0}))}});
    CHECK_THROWS_AS(escape_radius(lat), Error);
}

TEST_CASE("omega tail is deduplicated") {
    const Gdms g = Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::dirac(RationalMap::polynomial({0.0, 0.0, 1.0}))}});
    const OrbitRecord o = run_orbit(g, SpherePoint::from_complex(0.5), 0, 1000, 1);
    const auto tail = omega_tail(o);
    REQUIRE(tail.size() == 1);
    CHECK(chordal_dist(tail[0].first, SpherePoint::from_complex(0.0)) < 1e-4);
}

TEST_CASE("orbit CSV layout") {
    const Gdms g = quad(0.1);
    const OrbitRecord o = run_orbit(g, SpherePoint::from_complex(0.1), 0, 10, 1);
    std::ostringstream os;
    write_orbit_csv(os, o);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,vertex,edge,re,im,chart,log_deriv_norm");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 11);
}
