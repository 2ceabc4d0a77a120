#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mrds/certify.hpp"
#include "mrds/cover.hpp"
#include "mrds/gdms.hpp"
#include "mrds/julia.hpp"

namespace mrds {

struct DetectParams {
    int n_seeds = 16;
    int orbit_len = 1000;
    double delta = 0.01;
    double net_delta = kNetDelta;
    std::uint64_t seed = 1;
    std::size_t box_cap = 100000;  // coarse boxes per vertex; a whole sphere needs ~2 (2.5/delta)^2
    std::size_t periodic_cap = 16; // periodic seeds must close up within this
    int trim_passes = 8;
};

/// Orbit closures of periodic and omega-tail seeds on a fine lattice,
/// reported as per-vertex box covers.
std::vector<MinimalSetCover> detect_minimal_sets(const Gdms& g, const DetectParams& p);

enum class CoverKind { Attracting, JTouching, SubRotative, Undecided };
const char* to_string(CoverKind k);

struct Witness {
    int vertex = 0;
    SpherePoint point;  // center of a Julia cell
};

struct Classification {
    CoverKind kind = CoverKind::Undecided;
    StabilityCertificate certificate;
    std::vector<Witness> witnesses;
    double max_contraction = 0.0;  // largest sampled word factor
    std::string note;
};

/// Lazy per-cell Julia lookup on a shared mask geometry.
class JuliaCache {
public:
    JuliaCache(const Gdms& g, const JuliaParams& p);
    const GridMask& geometry() const { return marks_; }
    /// Evaluates the listed cells (parallel) and returns the Julia ones.
    std::vector<std::size_t> julia_cells(std::vector<std::size_t> cells);
    /// Mask cells meeting the square (chart, center, half) at vertex v.
    std::vector<std::size_t> cells_near(int v, Chart chart, cplx center, double half) const;

private:
    JuliaTester tester_;
    GridMask marks_;
    std::vector<std::int8_t> state_;  // -1 unknown, 0 Fatou, 1 Julia
};

Classification classify(const Gdms& g, const MinimalSetCover& cover, JuliaCache& julia, const CertifyParams& cp);

struct VerdictParams {
    DetectParams detect;
    JuliaParams julia;
    CertifyParams certify;
    VerdictParams() {
        julia.depth = 256;
        julia.resolution = 256;
    }
};

struct Verdict {
    bool mean_stable = false;
    bool undecided = false;  // no cover is decisively non-attracting, some undecided
    std::vector<MinimalSetCover> covers;
    std::vector<Classification> classes;
    int attracting = 0;
    int degree = 0;
    int loop_length = 0;
    long bound = 0;  // 2 d^N - 2
    bool bound_ok = true;
    double contraction = 0.0;  // empirical c over certificates
};

Verdict mean_stable_verdict(const Gdms& g, const VerdictParams& p);

struct ChaoticReport {
    bool chaotic = false;
    std::vector<double> julia_fraction;  // per vertex
    std::vector<double> cover_fraction;  // per detected cover, min over vertices
};

ChaoticReport chaotic_check(const Gdms& g, int resolution, std::uint64_t seed = 1);

/// Spherical area fraction of a cover at vertex v, sampled on an R grid.
double cover_area_fraction(const MinimalSetCover& c, int v, int resolution = 128);

}  // namespace mrds
