#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sosh {

using MaskXX = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// values(i, j) sits at origin + h * (i, j); n = 1 keeps one column
struct SampledFunction {
    int n = 1;
    Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    double h = 1.0;
    Eigen::ArrayXXd values;
    std::string name;

    int nx() const { return static_cast<int>(values.rows()); }
    int ny() const { return static_cast<int>(values.cols()); }
    double x(int i) const { return origin(0) + h * i; }
    double y(int j) const { return origin(1) + h * j; }
    void validate() const;
};

SampledFunction sample_1d(const std::function<double(double)>& f, double a, double b, int count,
                          const std::string& name = "");
// square grid [a, b]^2 with count points per axis
SampledFunction sample_2d(const std::function<double(double, double)>& f, double a, double b, int count,
                          const std::string& name = "");

std::string to_json(const SampledFunction& f);
SampledFunction sampled_from_json(const std::string& text);

// Fornberg weights for the order-th derivative at x0 on the given nodes
Eigen::VectorXd fornberg_weights(int order, const Eigen::VectorXd& nodes, double x0 = 0.0);
// half width of the central stencil used for a derivative order (4th order accurate)
int stencil_half(int order);

struct DerivativeField {
    Eigen::ArrayXXd values;
    MaskXX valid;  // central stencil fits
};

// d_x^ax d_y^ay f by tensor central differences
DerivativeField derivative(const SampledFunction& f, int ax, int ay = 0);
// order-j directional derivative along (cos t, sin t); n = 1 ignores t
DerivativeField directional_derivative(const SampledFunction& f, int order, double theta);

struct HolderEstimate {
    double alpha = 1;
    double estimate = 0;
    double window = 0;
    Eigen::ArrayXXd pointwise;  // empty unless requested
};

constexpr double kFullWindow = std::numeric_limits<double>::infinity();

// max |v(x) - v(y)| / |x - y|^alpha over valid pairs with 0 < |x - y| <= window;
// several fields are combined with the euclidean norm
double pair_seminorm(const std::vector<const Eigen::ArrayXXd*>& fields, const MaskXX& valid, int n, double h,
                     double alpha, double window);

HolderEstimate estimate_seminorm(const SampledFunction& f, double alpha, double window = kFullWindow,
                                 bool pointwise = false);
HolderEstimate estimate_seminorm(const SampledFunction& f, double alpha, std::array<int, 2> beta,
                                 double window = kFullWindow, bool pointwise = false);
// smallest of the 3, 5, 9 step windows at each point
Eigen::ArrayXXd pointwise_seminorm(const Eigen::ArrayXXd& v, const MaskXX& valid, int n, double h, double alpha,
                                   int steps);

// max over order-k partials of [d^beta f]_alpha; 0 when indistinguishable from difference noise
double top_seminorm(const SampledFunction& f, int k, double alpha, double window = kFullWindow);

struct ControlField {
    int n = 1;
    int k = 0;
    double alpha = 1;
    int directions = 64;
    double h = 1;
    Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    Eigen::ArrayXXd r;
    MaskXX valid;  // computed from full stencils; elsewhere copied from the nearest valid point
};

ControlField control_field(const SampledFunction& f, int k, double alpha, int directions = 64);

struct SlowVariation {
    bool ok = true;
    double worst = 0;  // max |r(x) - r(y)| / r(x)
};

SlowVariation check_slow_variation(const ControlField& r, double nu);

struct CheckReport {
    bool ok = false;
    double value = 0;  // ratio or empirical constant
    double slack = 0.05;
    std::string detail;
    std::vector<double> constants;
};

double malgrange_constant(double alpha);
CheckReport check_malgrange(const SampledFunction& f, double alpha, double slack = 0.05);
CheckReport check_derivative_control(const SampledFunction& f, int k, double alpha, int ell);
CheckReport check_interpolation(const SampledFunction& f, double alpha, double gamma, double beta,
                                double slack = 0.02);
CheckReport check_induc(const SampledFunction& f, int k, double alpha, double eta);

struct RefinementStudy {
    double coarse = 0;
    double fine = 0;
    double ratio = 0;
    bool stable = false;
};

// metric evaluated at count and 2 * count - 1 points per axis
RefinementStudy refinement_study(const std::function<double(int)>& metric, int count, double factor = 1.5);

}  // namespace sosh
