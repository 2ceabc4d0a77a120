#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrds/error.hpp"
#include "mrds/io.hpp"

using namespace mrds;
namespace fs = std::filesystem;

namespace {

const fs::path kSystems = MRDS_SYSTEMS_DIR;

ErrorKind kind_of(const json& j) {
    try {
        parse_system(j);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::NumericFailure;  // no error
}

json minimal_system() {
    return json::parse(R"({"vertices": 1, "edges": [{"from": 1, "to": 1, "weight": 1.0,
        "family": {"kind": "disk", "template": "quadratic_c", "center": [0, 0], "radius": 0.1}}]})");
}

}  // namespace

TEST_CASE("shipped systems round-trip through the schema") {
    int n = 0;
    for (const auto& entry : fs::directory_iterator(kSystems)) {
        if (entry.path().extension() != ".json") continue;
        ++n;
        const Gdms g = load_system(entry.path().string());
        const json once = system_to_json(g);
        const json twice = system_to_json(parse_system(once));
        CHECK(once == twice);
        CHECK(once.dump() == twice.dump());
    }
    CHECK(n >= 6);
}

TEST_CASE("map serialization") {
    const RationalMap p = RationalMap::polynomial({{0.5, -1.0}, 0.0, 1.0});
    const json jp = map_to_json(p);
    CHECK(jp.is_array());
    CHECK(map_to_json(map_from_json(jp)) == jp);
    const RationalMap r = RationalMap::rational({1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
    const json jr = map_to_json(r);
    CHECK(jr.is_object());
    CHECK(map_to_json(map_from_json(jr)) == jr);
    CHECK(point_from_json(point_to_json(SpherePoint::infinity())).is_infinity());
}

TEST_CASE("schema errors") {
    CHECK(kind_of(minimal_system()) == ErrorKind::NumericFailure);
    json j = minimal_system();
    j.erase("vertices");
    CHECK(kind_of(j) == ErrorKind::Schema);
    j = minimal_system();
    j["edges"][0]["to"] = 2;
    CHECK(kind_of(j) == ErrorKind::Schema);
    j = minimal_system();
    j["edges"][0]["family"]["kind"] = "gaussian";
    CHECK(kind_of(j) == ErrorKind::Schema);
    j = minimal_system();
    j["edges"][0]["family"]["center"] = "zero";
    CHECK(kind_of(j) == ErrorKind::Schema);
    j = minimal_system();
    j["edges"][0]["family"] = json::parse(R"({"kind": "atoms", "atoms": [{"map": [[1, 0], [2, 0]]}]})");
    CHECK(kind_of(j) == ErrorKind::Schema);  // degree 1
    j = minimal_system();
    j["edges"][0]["weight"] = 0.5;
    CHECK(kind_of(j) == ErrorKind::Stochasticity);
    CHECK(kind_of(json::array()) == ErrorKind::Schema);
    CHECK_THROWS_AS(load_system("/nonexistent/system.json"), Error);
}

TEST_CASE("radius zero disk collapses to an atom") {
    json j = minimal_system();
    j["edges"][0]["family"]["radius"] = 0.0;
    const Gdms g = parse_system(j);
    CHECK(g.deterministic());
}

TEST_CASE("validation report of the chaotic pair") {
    const json rep = validation_report(load_system((kSystems / "chaotic_pair.json").string()));
    CHECK(rep["p"][0].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(rep["p"][1].get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(rep["cycle_cover"].front() == rep["cycle_cover"].back());
    CHECK(rep["P"][1][0].get<double>() == 1.0);
}

TEST_CASE("certificates survive JSON and still replay") {
    const Gdms g = load_system((kSystems / "quadratic_s0.1.json").string());
    for (const auto& c : detect_minimal_sets(g, DetectParams{})) {
        const StabilityCertificate cert = certify_attracting(g, c, CertifyParams{});
        REQUIRE(cert.ok);
        const json j = certificate_to_json(cert);
        const StabilityCertificate back = certificate_from_json(json::parse(j.dump()));
        CHECK(back.U == cert.U);
        CHECK(back.W == cert.W);
        CHECK(back.margin == cert.margin);
        CHECK(certificate_to_json(back) == j);
        CHECK(replay_certificate(g, back));
    }
}

TEST_CASE("mask RLE and PGM") {
    GridMask m(16, 2);
    CounterRng rng(1, 0);
    for (std::size_t i = 0; i < m.cells(); ++i) m.set(i, rng.uniform() < 0.3);
    const json rle = mask_to_rle(m);
    CHECK(mask_from_rle(json::parse(rle.dump())) == m);
    CHECK(mask_to_rle(mask_from_rle(rle)) == rle);
    GridMask empty(8, 1);
    CHECK(mask_from_rle(mask_to_rle(empty)) == empty);

    const fs::path path = fs::temp_directory_path() / "mrds_test_mask.pgm";
    write_pgm(path.string(), 16, 16, mask_layer(m, 1, Chart::Inverted));
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w = 0, h = 0, mx = 0;
    in >> magic >> w >> h >> mx;
    in.get();
    CHECK(magic == "P5");
    CHECK(w == 16);
    CHECK(mx == 255);
    std::vector<char> px(256);
    in.read(px.data(), 256);
    CHECK(in.gcount() == 256);
    // top row is the largest iy
    CHECK((px[0] != 0) == m.get(CellRef{1, Chart::Inverted, 0, 15}));
    fs::remove(path);
}

TEST_CASE("CSV writers") {
    std::ostringstream os;
    write_cloud_csv(os, {{SpherePoint::from_complex({0.5, 0.25}), 0}});
    CHECK(os.str() == "vertex,re,im\n1,0.5,0.25\n");
}
