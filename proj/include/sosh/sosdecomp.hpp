#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sosh/holderlab.hpp"

namespace sosh {

struct CoverBall {
    int i = 0, j = 0;  // grid index of the center
    double x = 0, y = 0;
    double r = 0;
    double radius = 0;  // nu * r
};

// normalized psi_j on the index box [i0, i0 + rows) x [j0, j0 + cols)
struct BallPatch {
    int i0 = 0, j0 = 0;
    Eigen::ArrayXXd psi;
};

struct PartitionOfUnity {
    std::vector<CoverBall> balls;
    std::vector<BallPatch> patches;
    std::vector<int> color;
    int colors = 0;
    Eigen::ArrayXXd denominator;  // sum of the raw bumps squared
    Eigen::ArrayXXd sum_sq;       // sum of psi_j^2 after normalization
    Eigen::ArrayXXi overlap;
    int max_overlap = 0;
    double identity_error = 0;  // max |sum psi^2 - 1| on {r > 0}, plus sum psi^2 on {r = 0}
};

// 1 on |t| <= 1/2, supported in |t| < 1
double bump(double t);

std::vector<CoverBall> build_cover(const ControlField& r, double nu);
std::vector<int> color_classes(const std::vector<CoverBall>& cover);
PartitionOfUnity partition_functions(const std::vector<CoverBall>& cover, const ControlField& r);

struct DecomposeOptions {
    std::optional<double> nu;
    std::optional<double> omega;
    double nu_start = 0.25;
    double nu_floor = 1e-3;
    bool normalize = true;  // divide f by its top Hoelder semi-norm before building the cover
};

struct BranchStats {
    int a = 0;
    int b = 0;
    int unresolved = 0;  // branch B balls narrower than the grid, handled with a constant minimum
};

// branch B minimum of one 1d ball
struct BallMinimum {
    double center = 0;
    double radius = 0;
    double X = 0;
    double F = 0;
};

struct Decomposition {
    int n = 1;
    int k = 2;
    double alpha = 1;
    double nu = 0;
    double omega = 0;
    double epsilon = 0;  // partial decompositions only
    double scale = 1;    // f was decomposed as scale * (f / scale); r refers to f / scale
    bool partial = false;
    Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    double h = 1;
    std::vector<Eigen::ArrayXXd> squares;
    std::vector<BallMinimum> minima;  // n = 1 only
    Eigen::ArrayXXd residual;
    Eigen::ArrayXXd r;
    MaskXX region;  // where the reconstruction is verified
    int balls = 0;
    int colors = 0;
    int max_overlap = 0;
    int sub_squares = 0;  // largest square count of a 1d sub-decomposition (n = 2)
    double identity_error = 0;
    BranchStats stats;
    int clamped = 0;
    double clamp_depth = 0;
    std::vector<std::string> notes;
};

Decomposition decompose(const SampledFunction& f, int k, double alpha, const DecomposeOptions& opt = {});
Decomposition partial_decompose(const SampledFunction& f, int k, double alpha, double eps,
                                const DecomposeOptions& opt = {});

struct VerifyReport {
    double error = 0;  // sup |sum g^2 + h - f| on the region
    int region_points = 0;
    double g_exponent = 1;
    double gprime_exponent = 0.5;
    std::vector<double> g_seminorm;
    std::vector<double> gprime_seminorm;
    double g_constant = 0;       // sup |g| / r^((k+a)/2)
    double gprime_constant = 0;  // sup |g'| / r^((k+a)/2 - 1)
    int squares = 0;
    int bound = 0;
    bool residual_ok = true;
    bool ok = false;
};

VerifyReport verify(const Decomposition& d, const SampledFunction& f, double tolerance = 1e-6);

// square count bound: 30 for n = 1, 15^2 * 31 for n = 2
int square_bound(int n);

std::string to_json(const Decomposition& d, const VerifyReport& v, bool include_squares = true);

}  // namespace sosh
