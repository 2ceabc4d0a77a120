#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mrds/gdms.hpp"
#include "mrds/minimal.hpp"

namespace mrds {

/// Parametric noise family Phi(lambda, s) with a fixed graph.
class NoiseFamily {
public:
    using Builder = std::function<Gdms(cplx lambda, double s)>;

    explicit NoiseFamily(Builder b, std::string name = "custom") : builder_(std::move(b)), name_(std::move(name)) {}
    /// z^2 + c with c uniform on the disk of radius s about lambda.
    static NoiseFamily quadratic();
    /// Every disk family of `base` rescaled to s times its relative radius; lambda unused.
    static NoiseFamily from_template(const Gdms& base);

    Gdms build(cplx lambda, double s) const { return builder_(lambda, s); }
    const std::string& name() const { return name_; }

private:
    Builder builder_;
    std::string name_;
};

struct ScanEntry {
    double s = 0.0;
    int count = 0;
    bool mean_stable = false;
    bool undecided = false;
};

struct ScanResult {
    std::vector<ScanEntry> entries;
    bool monotone = true;  // counts non-increasing in s
};

ScanResult scan_s(const NoiseFamily& fam, cplx lambda, const std::vector<double>& s_grid, const VerdictParams& p);

/// Number of detected minimal sets at (lambda, s).
int minimal_count(const NoiseFamily& fam, cplx lambda, double s, const DetectParams& p);

struct BifReport {
    cplx lambda{0.0, 0.0};
    std::vector<double> points;  // ascending, 0 first when present
    std::vector<ScanEntry> evaluations;
    long alpha = 0;
    bool bound_ok = true;
};

/// Bisection on minimal-set count drops over [s_lo, s_hi]; s = 0 is added
/// from the verdict of the deterministic system. Throws Resolution on a
/// count increase.
BifReport find_bif_points(const NoiseFamily& fam, cplx lambda, double s_lo, double s_hi, double tol,
                          const VerdictParams& p);

struct BifMeasureEntry {
    cplx lambda{0.0, 0.0};
    bool mean_stable = false;
    bool undecided = false;
    int n_bif = 0;
    bool bound_ok = true;
    bool resolution_error = false;
    std::vector<double> points;
};

struct BifMeasure {
    double fraction = 0.0;  // of lambda samples not mean stable at s_fixed
    std::vector<BifMeasureEntry> entries;
};

/// n x n cell centers of the square [lo, hi]^2 in the parameter plane, row-major in Im.
std::vector<cplx> parameter_grid(int n, double lo = -1.0, double hi = 1.0);

BifMeasure bif_measure_experiment(const NoiseFamily& fam, const std::vector<cplx>& lambdas, double s_fixed,
                                  double tol, const VerdictParams& p, double s_lo = 0.01, double s_hi = 2.0);

}  // namespace mrds
