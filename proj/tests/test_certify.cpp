#include <doctest.h>

#include <cmath>

#include "mrds/certify.hpp"
#include "mrds/minimal.hpp"

using namespace mrds;

namespace {

Gdms quad(double s) { return Gdms::build(1, {Edge{0, 0, 1.0, MapFamily::quadratic(0.0, s)}}); }

}  // namespace

TEST_CASE("box keys round-trip") {
    CounterRng rng(1, 0);
    for (int k = 0; k < 1000; ++k) {
        const int v = int(rng.below(64));
        const Chart c = rng.uniform() < 0.5 ? Chart::Standard : Chart::Inverted;
        const int ix = int(rng.below(2001)) - 1000, iy = int(rng.below(2001)) - 1000;
        const BoxKey key = BoxGrid::key(v, c, ix, iy);
        CHECK(BoxGrid::vertex(key) == v);
        CHECK(BoxGrid::chart(key) == c);
        CHECK(BoxGrid::ix(key) == ix);
        CHECK(BoxGrid::iy(key) == iy);
    }
}

TEST_CASE("box set algebra") {
    const BoxGrid grid(0.1);
    BoxSet a(1);
    a.at(0).push_back(BoxGrid::key(0, Chart::Standard, 0, 0));
    a.normalize();
    const BoxSet d1 = dilate(grid, a, 1);
    CHECK(d1.at(0).size() == 9);
    CHECK(a.subset_of(d1));
    CHECK_FALSE(d1.subset_of(a));
    CHECK(boundary(d1).at(0).size() == 8);
    CHECK(dilate(grid, a, 2).at(0).size() == 25);
    BoxSet b(1);
    b.at(0).push_back(BoxGrid::key(0, Chart::Standard, 5, 5));
    b.normalize();
    CHECK_FALSE(a.overlaps(b));
    BoxSet c = a;
    c.merge(b);
    CHECK(c.size() == 2);
    CHECK(c.overlaps(b));
    CHECK(a.contains_point(grid, 0, SpherePoint::from_complex({0.04, -0.04})));
    CHECK_FALSE(a.contains_point(grid, 0, SpherePoint::from_complex({0.06, 0.0})));
}

TEST_CASE("disk containment and clearance") {
    const BoxGrid grid(0.1);
    BoxSet U(1);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) U.at(0).push_back(BoxGrid::key(0, Chart::Standard, i, j));
    U.normalize();
    double clr = 0.0;
    CHECK(disk_inside(grid, U, Enclosure{0, Chart::Standard, 0.0, 0.05}, clr));
    CHECK(clr == doctest::Approx(0.15 - 0.05));
    CHECK_FALSE(disk_inside(grid, U, Enclosure{0, Chart::Standard, 0.0, 0.2}, clr));
    CHECK_FALSE(disk_inside(grid, U, Enclosure{0, Chart::Standard, {0.12, 0.0}, 0.05}, clr));
}

TEST_CASE("certificates for s = 0.1 replay") {
    const Gdms g = quad(0.1);
    const auto covers = detect_minimal_sets(g, DetectParams{});
    REQUIRE(covers.size() == 2);
    for (const auto& c : covers) {
        const StabilityCertificate cert = certify_attracting(g, c, CertifyParams{});
        REQUIRE(cert.ok);
        CHECK(cert.N >= 1);
        CHECK(cert.margin > 0.0);
        CHECK(cert.contraction < 1.0);
        CHECK(c.boxes.subset_of(cert.U));
        CHECK(cert.U.subset_of(cert.W));
        CHECK(replay_certificate(g, cert));

        StabilityCertificate bad = cert;
        bad.margin = std::nextafter(cert.margin, 1.0);
        CHECK_FALSE(replay_certificate(g, bad));
        bad = cert;
        bad.N = cert.N + 1;
        CHECK_FALSE(replay_certificate(g, bad));
    }
}

TEST_CASE("certification refuses non-Fatou neighborhoods and repelling sets") {
    const Gdms g = quad(0.1);
    const auto covers = detect_minimal_sets(g, DetectParams{});
    for (const auto& c : covers) CHECK_FALSE(certify_attracting(g, c, CertifyParams{}, [](BoxKey) { return false; }).ok);

    // the repelling fixed point 1 of z^2
    const Gdms z2 = quad(0.0);
    for (const auto& c : detect_minimal_sets(z2, DetectParams{})) {
        const bool at_one = c.boxes.contains_point(BoxGrid(c.delta), 0, SpherePoint::from_complex(1.0));
        if (at_one) CHECK_FALSE(certify_attracting(z2, c, CertifyParams{}).ok);
    }
}
