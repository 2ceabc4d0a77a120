#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mrds/gdms.hpp"
#include "mrds/grid.hpp"

namespace mrds {

struct JuliaParams {
    int resolution = 256;
    int words = 32;     // M
    int depth = 64;     // T
    double theta = 0.5; // chordal expansion threshold
    std::uint64_t seed = 1;
    double net_delta = kNetDelta;
    bool periodic_words = true;  // also try constant words of self-loop maps
};

/// Forward equicontinuity test for single squares. Thread-safe.
class JuliaTester {
public:
    JuliaTester(const Gdms& g, JuliaParams p);

    const JuliaParams& params() const { return p_; }
    /// Square of half-width `half` about `center` in `chart`, at vertex v.
    bool square_is_julia(int v, Chart chart, cplx center, double half, std::uint64_t stream) const;
    bool cell_is_julia(const GridMask& geometry, const CellRef& c) const;

private:
    const Gdms* g_;
    JuliaParams p_;
    std::vector<std::vector<RationalMap>> nets_;
    std::vector<std::vector<RationalMap>> periodic_;  // per vertex
    bool deterministic_ = false;

    bool run_word(int v, SpherePoint* probes, std::uint64_t stream, int word) const;
    bool run_constant(const RationalMap& f, SpherePoint* probes) const;
};

double probe_diameter(const SpherePoint* probes, int n);

GridMask julia_forward(const Gdms& g, const JuliaParams& p);
GridMask julia_forward_serial(const Gdms& g, const JuliaParams& p);

/// A repelling fixed point of a self-loop net map, with its vertex.
std::pair<SpherePoint, int> repelling_seed(const Gdms& g, double net_delta = kNetDelta);

std::vector<std::pair<SpherePoint, int>> julia_backward(const Gdms& g, int n_points, std::uint64_t seed,
                                                        double net_delta = kNetDelta);

struct KernelReport {
    bool empty = false;
    std::vector<CellRef> remaining;  // cells never shown to leave J
    int sweeps = 0;
};

/// Removes Julia cells that some net map sends entirely off the remaining
/// Julia cells; the kernel is empty iff nothing survives.
KernelReport kernel_julia_empty(const Gdms& g, const GridMask& mask, double net_delta = kNetDelta);

struct AreaSample {
    double fraction = 0.0;
    int vertex = 0;
    GridMask mask;
};

/// Non-equicontinuity area under one chain-sampled word of length T.
AreaSample sample_julia_area(const Gdms& g, std::uint64_t seed, int resolution, int depth, double theta = 0.5);

}  // namespace mrds
