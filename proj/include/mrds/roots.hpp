#pragma once

#include <span>
#include <vector>

#include "mrds/sphere.hpp"

namespace mrds {

struct RootResult {
    std::vector<cplx> roots;
    bool converged = true;
    int iterations = 0;
};

/// Simultaneous Aberth-Ehrlich iteration for a polynomial with ascending
/// coefficients and nonzero leading coefficient. Starts on a perturbed circle
/// of Cauchy-bound radius; falls back to deflated Newton if the iteration cap
/// is reached.
RootResult polynomial_roots(std::span<const cplx> coeffs, int max_iterations = 200);

struct SphereRoot {
    SpherePoint point;
    int multiplicity = 1;
};

/// All roots on the sphere of a polynomial of formal degree coeffs.size()-1:
/// missing leading terms count as roots at infinity. The chart is chosen so
/// that the leading coefficient dominates the constant one. Roots within
/// `cluster_tol` (chordal) are merged and their multiplicities summed.
std::vector<SphereRoot> sphere_roots(std::span<const cplx> coeffs, bool& converged,
                                     double cluster_tol = 1e-5);

}  // namespace mrds
