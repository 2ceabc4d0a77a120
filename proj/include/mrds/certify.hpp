#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mrds/cover.hpp"
#include "mrds/gdms.hpp"

namespace mrds {

struct Enclosure {
    int vertex = 0;
    Chart chart = Chart::Standard;
    cplx center{0.0, 0.0};
    double radius = 0.0;
};

struct CertifyParams {
    int n_max = 8;
    double net_delta = kNetDelta;
    std::size_t budget = 1'000'000;  // enclosures per step
    double max_radius = 0.25;
    int u_dilate = 2;
    int w_dilate = 4;
};

struct StabilityCertificate {
    bool ok = false;
    int N = 0;
    double delta = 0.0;
    double net_delta = kNetDelta;
    BoxSet U;
    BoxSet W;
    double margin = 0.0;       // chart-coordinate clearance of G^N(W) inside U
    double contraction = 0.0;  // (max final radius / initial radius)^(1/N)
    std::size_t enclosures = 0;
    std::string failure;
};

/// Called per W box; false means the box is not known to be Fatou.
using FatouCheck = std::function<bool(BoxKey)>;

/// Set-valued iteration of disk enclosures of W over the support nets until
/// G^n(W) lies inside U, for n = 1..n_max. Throws BudgetExceeded.
StabilityCertificate certify_attracting(const Gdms& g, const MinimalSetCover& cover, const CertifyParams& p,
                                        const FatouCheck& fatou = {});

/// Independent serial re-fold of a stored certificate; true iff it
/// reproduces containment and the stored margin exactly.
bool replay_certificate(const Gdms& g, const StabilityCertificate& cert);

/// Disk containment in U and clearance to the nearest non-U box.
bool disk_inside(const BoxGrid& grid, const BoxSet& U, const Enclosure& e, double& clearance);

}  // namespace mrds
