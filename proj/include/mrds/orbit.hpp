#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mrds/gdms.hpp"
#include "mrds/sphere.hpp"

namespace mrds {

struct OrbitStep {
    int edge = -1;
    MapChoice choice;
    int vertex = 0;  // vertex after the step
    SpherePoint point;
    double log_deriv = 0.0;  // log of the spherical derivative at the previous point
};

struct OrbitRecord {
    SpherePoint initial;
    int initial_vertex = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<OrbitStep> steps;

    std::size_t size() const { return steps.size() + 1; }
    /// Point with index k; index 0 is the initial point.
    const SpherePoint& point(std::size_t k) const { return k == 0 ? initial : steps[k - 1].point; }
    int vertex(std::size_t k) const { return k == 0 ? initial_vertex : steps[k - 1].vertex; }
};

OrbitRecord run_orbit(const Gdms& g, const SpherePoint& z0, int i0, int n, std::uint64_t seed,
                      std::uint64_t stream = 0);

struct LyapunovEstimate {
    double value = 0.0;
    int n_steps = 0;
    int n_orbits = 0;
    double ci95_halfwidth = 0.0;
    bool clamped = false;
};

inline constexpr double kLyapunovFloor = 1e-300;

/// Ensemble mean of per-orbit Birkhoff averages of log deriv_norm.
LyapunovEstimate lyapunov(const Gdms& g, const SpherePoint& z0, int i0, int n, int n_orbits,
                          std::uint64_t seed);
LyapunovEstimate lyapunov_serial(const Gdms& g, const SpherePoint& z0, int i0, int n, int n_orbits,
                                 std::uint64_t seed);

struct EscapeResult {
    bool escaped = false;
    int index = -1;
    double radius = 0.0;
};

/// Escape radius over the support nets; polynomial systems only.
double escape_radius(const Gdms& g);
EscapeResult escape_check(const Gdms& g, const OrbitRecord& record);

/// Last (1 - burn_in) of the orbit, deduplicated per vertex at chordal 1e-4.
std::vector<std::pair<SpherePoint, int>> omega_tail(const OrbitRecord& record, double burn_in = 0.9);

void write_orbit_csv(std::ostream& os, const OrbitRecord& record);

}  // namespace mrds
