#include "sosh/sosdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sosh {

using Eigen::ArrayXXd;

double bump(double t) {
    double u = std::clamp(2 * std::abs(t) - 1, 0.0, 1.0);
    if (u >= 1) return 0;
    if (u <= 0) return 1;
    return std::exp(1 - 1 / (1 - u * u));
}

int square_bound(int n) { return n == 1 ? 30 : 225 * 31; }

std::vector<CoverBall> build_cover(const ControlField& r, double nu) {
    if (!(nu > 0)) throw std::invalid_argument("cover: nu must be positive");
    int nx = static_cast<int>(r.r.rows()), ny = static_cast<int>(r.r.cols());
    MaskXX covered = MaskXX::Constant(nx, ny, false);
    std::vector<CoverBall> out;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (covered(i, j) || !(r.r(i, j) > 0)) continue;
            CoverBall b;
            b.i = i;
            b.j = j;
            b.x = r.origin(0) + r.h * i;
            b.y = r.n == 2 ? r.origin(1) + r.h * j : 0.0;
            b.r = r.r(i, j);
            b.radius = nu * b.r;
            double half = 0.5 * b.radius / r.h;
            int s = static_cast<int>(std::floor(half));
            for (int a = std::max(0, i - s); a <= std::min(nx - 1, i + s); ++a)
                for (int c = (r.n == 2 ? std::max(0, j - s) : 0); c <= (r.n == 2 ? std::min(ny - 1, j + s) : 0); ++c)
                    if (std::hypot(a - i, c - j) < half - 1e-9) covered(a, c) = true;
            covered(i, j) = true;
            out.push_back(b);
        }
    return out;
}

std::vector<int> color_classes(const std::vector<CoverBall>& cover) {
    std::vector<int> color(cover.size(), -1);
    double rmax = 0;
    for (const auto& b : cover) rmax = std::max(rmax, b.radius);
    // centers come in row-major order, so x is non-decreasing
    for (std::size_t a = 0; a < cover.size(); ++a) {
        std::vector<char> used;
        for (std::size_t b = a; b-- > 0;) {
            if (cover[a].x - cover[b].x >= 2 * rmax) break;
            double d = std::hypot(cover[a].x - cover[b].x, cover[a].y - cover[b].y);
            if (d < cover[a].radius + cover[b].radius) {
                if (static_cast<int>(used.size()) <= color[b]) used.resize(color[b] + 1, 0);
                used[color[b]] = 1;
            }
        }
        int c = 0;
        while (c < static_cast<int>(used.size()) && used[c]) ++c;
        color[a] = c;
    }
    return color;
}

PartitionOfUnity partition_functions(const std::vector<CoverBall>& cover, const ControlField& r) {
    if (cover.empty()) throw std::invalid_argument("partition: empty cover");
    int nx = static_cast<int>(r.r.rows()), ny = static_cast<int>(r.r.cols());
    PartitionOfUnity p;
    p.balls = cover;
    p.denominator = ArrayXXd::Zero(nx, ny);
    p.overlap = Eigen::ArrayXXi::Zero(nx, ny);
    for (const auto& b : cover) {
        int s = static_cast<int>(std::ceil(b.radius / r.h));
        BallPatch patch;
        patch.i0 = std::max(0, b.i - s);
        int i1 = std::min(nx - 1, b.i + s);
        patch.j0 = r.n == 2 ? std::max(0, b.j - s) : 0;
        int j1 = r.n == 2 ? std::min(ny - 1, b.j + s) : 0;
        patch.psi = ArrayXXd::Zero(i1 - patch.i0 + 1, j1 - patch.j0 + 1);
        for (int a = patch.i0; a <= i1; ++a)
            for (int c = patch.j0; c <= j1; ++c) {
                double d = r.h * std::hypot(a - b.i, c - b.j);
                double v = bump(d / b.radius);
                if (v <= 0) continue;
                patch.psi(a - patch.i0, c - patch.j0) = v;
                p.denominator(a, c) += v * v;
                p.overlap(a, c) += 1;
            }
        p.patches.push_back(std::move(patch));
    }
    for (int a = 0; a < nx; ++a)
        for (int c = 0; c < ny; ++c)
            if (r.r(a, c) > 0 && p.denominator(a, c) < 1 - 1e-12)
                throw std::logic_error("partition: normalization below 1 at a covered point");
    ArrayXXd total = ArrayXXd::Zero(nx, ny);
    for (auto& patch : p.patches)
        for (int a = 0; a < patch.psi.rows(); ++a)
            for (int c = 0; c < patch.psi.cols(); ++c) {
                int ga = patch.i0 + a, gc = patch.j0 + c;
                double& v = patch.psi(a, c);
                v = r.r(ga, gc) > 0 && p.denominator(ga, gc) > 0 ? v / std::sqrt(p.denominator(ga, gc)) : 0.0;
                total(ga, gc) += v * v;
            }
    for (int a = 0; a < nx; ++a)
        for (int c = 0; c < ny; ++c)
            p.identity_error = std::max(p.identity_error, r.r(a, c) > 0 ? std::abs(total(a, c) - 1) : total(a, c));
    p.sum_sq = std::move(total);
    p.max_overlap = p.overlap.maxCoeff();
    p.color = color_classes(cover);
    p.colors = p.color.empty() ? 0 : *std::max_element(p.color.begin(), p.color.end()) + 1;
    return p;
}

namespace {

constexpr double kNegTol = 1e-12;

// halving schedule whose last step lands on the floor; 0 when exhausted
double next_nu(double nu, double floor) { return nu <= floor * (1 + 1e-12) ? 0.0 : std::max(nu / 2, floor); }

// sup |f(x) - f(y)| / (nu r(x)^(k+a)) over |x - y| <= nu r(x)
double omega_hat(const SampledFunction& f, const ControlField& r, double nu) {
    int nx = f.nx(), ny = f.ny();
    double best = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double rx = r.r(i, j);
            if (rx <= 0) continue;
            double rad = nu * rx / f.h;
            int s = static_cast<int>(std::floor(rad + 1e-12));
            if (s == 0) continue;
            double m = 0;
            for (int a = std::max(0, i - s); a <= std::min(nx - 1, i + s); ++a)
                for (int c = (f.n == 2 ? std::max(0, j - s) : 0); c <= (f.n == 2 ? std::min(ny - 1, j + s) : 0); ++c)
                    if (std::hypot(a - i, c - j) <= rad + 1e-12) m = std::max(m, std::abs(f.values(a, c) - f.values(i, j)));
            best = std::max(best, m / (nu * std::pow(rx, r.k + r.alpha)));
        }
    return best;
}

// piecewise quintic through six neighbouring samples
double interp1(const Eigen::ArrayXd& v, double origin, double h, double s) {
    int n = static_cast<int>(v.size());
    double u = (s - origin) / h;
    int i = static_cast<int>(std::floor(u));
    int lo = std::clamp(i - 2, 0, std::max(0, n - 6));
    int hi = std::min(n - 1, lo + 5);
    double acc = 0;
    for (int a = lo; a <= hi; ++a) {
        double w = 1;
        for (int b = lo; b <= hi; ++b)
            if (b != a) w *= (u - b) / double(a - b);
        acc += w * v(a);
    }
    return acc;
}

template <class F>
std::pair<double, double> golden(F&& fn, double a, double b, int iters = 80) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int it = 0; it < iters && b - a > 1e-15 * (1 + std::abs(a)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = fn(d);
        }
    }
    return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

struct Plan1D {
    double origin = 0, h = 1;
    int k = 2;
    double alpha = 1, nu = 0, omega = 0;
    std::vector<CoverBall> balls;
    std::vector<int> color;
    int colors = 0;
    std::vector<char> branch_b;
    std::vector<double> X, F;
    Eigen::ArrayXd r;
    double rmax = 0;
    double scale = 1;  // the plan was built for v / scale
    BranchStats stats;

    int slots() const { return 2 * colors; }

    // squares at s for the sampled value v; slot 2c holds the root part, 2c + 1 the constant part
    void eval(double s, double v, std::vector<double>& out, int& clamped, double& depth) const {
        out.assign(slots(), 0.0);
        if (balls.empty()) return;
        int idx = static_cast<int>(std::lround((s - origin) / h));
        idx = std::clamp(idx, 0, static_cast<int>(r.size()) - 1);
        if (!(r(idx) > 0)) return;
        auto first = std::lower_bound(balls.begin(), balls.end(), s - rmax - h,
                                      [](const CoverBall& b, double x) { return b.x < x; });
        double sum = 0;
        std::vector<std::pair<std::size_t, double>> raw;
        auto collect = [&](double p) {
            for (auto it = first; it != balls.end() && it->x <= p + rmax; ++it) {
                double w = bump((p - it->x) / it->radius);
                if (w > 0) {
                    raw.push_back({static_cast<std::size_t>(it - balls.begin()), w});
                    sum += w * w;
                }
            }
        };
        collect(s);
        // balls narrower than the grid only see grid points
        if (sum <= 0) collect(origin + h * idx);
        if (sum <= 0) return;
        double norm = std::sqrt(sum) / std::sqrt(scale);
        v /= scale;
        for (auto [j, w] : raw) {
            double psi = w / norm;
            int c = color[j];
            if (!branch_b[j]) {
                if (v < -kNegTol) {
                    ++clamped;
                    depth = std::max(depth, -v);
                }
                out[2 * c] += psi * std::sqrt(std::max(0.0, v));
            } else {
                double d = v - F[j];
                if (d < -kNegTol) {
                    ++clamped;
                    depth = std::max(depth, -d);
                }
                double sg = s > X[j] ? 1.0 : (s < X[j] ? -1.0 : 0.0);
                out[2 * c] += psi * sg * std::sqrt(std::max(0.0, d));
                out[2 * c + 1] += psi * std::sqrt(std::max(0.0, F[j]));
            }
        }
    }
};

// branch data for one ball of a 1d plan; false with a reason when the ball has no interior minimum
bool branch_b_1d(const SampledFunction& g, const CoverBall& b, double hw, double& X, double& F, bool& unresolved,
                 std::string& why) {
    int n = g.nx();
    int w = static_cast<int>(std::floor(hw / g.h + 1e-12));
    int lo = std::max(0, b.i - w), hi = std::min(n - 1, b.i + w);
    int m = lo;
    for (int a = lo; a <= hi; ++a)
        if (g.values(a, 0) < g.values(m, 0)) m = a;
    unresolved = hi - lo < 4;
    if (unresolved) {
        X = g.x(m);
        F = g.values(m, 0);
        return true;
    }
    // refine on the continuous window [c - hw, c + hw]
    double wl = std::max(g.x(0), b.x - hw), wr = std::min(g.x(n - 1), b.x + hw);
    double left = m > 0 ? std::max(g.x(m - 1), wl) : g.x(m);
    double right = m < n - 1 ? std::min(g.x(m + 1), wr) : g.x(m);
    X = g.x(m);
    F = g.values(m, 0);
    if (right > left) {
        Eigen::ArrayXd v = g.values.col(0);
        auto fn = [&](double s) { return interp1(v, g.origin(0), g.h, s); };
        auto [xs, fs] = golden(fn, left, right);
        if (fs < F) {
            X = xs;
            F = fs;
        }
    }
    double tol = 1e-9 * g.h;
    if (X <= wl + tol || X >= wr - tol) {
        std::ostringstream os;
        os << "branch B ball at " << b.x << " has no interior minimum";
        why = os.str();
        return false;
    }
    return true;
}

Plan1D plan_1d(const SampledFunction& g, const ControlField& r, int k, double alpha, const DecomposeOptions& opt,
               std::vector<std::string>* notes) {
    Plan1D plan;
    plan.origin = g.origin(0);
    plan.h = g.h;
    plan.k = k;
    plan.alpha = alpha;
    plan.r = r.r.col(0);
    if (!(r.r.maxCoeff() > 0)) return plan;
    std::string last;
    double nu = opt.nu.value_or(opt.nu_start);
    for (; nu > 0; nu = next_nu(nu, opt.nu_floor)) {
        auto sv = check_slow_variation(r, nu);
        if (!sv.ok) {
            std::ostringstream os;
            os << "slow variation fails at nu=" << nu << " (worst " << sv.worst << ")";
            last = os.str();
        } else {
            double omega = opt.omega.value_or(2 * omega_hat(g, r, nu));
            auto balls = build_cover(r, nu);
            bool ok = true;
            plan.branch_b.assign(balls.size(), 0);
            plan.X.assign(balls.size(), 0.0);
            plan.F.assign(balls.size(), 0.0);
            plan.stats = {};
            double hw_factor = std::sqrt(nu * nu + 3 * nu * omega);
            for (std::size_t j = 0; j < balls.size() && ok; ++j) {
                const auto& b = balls[j];
                if (g.values(b.i, 0) >= omega * nu * std::pow(b.r, k + alpha)) {
                    ++plan.stats.a;
                    continue;
                }
                plan.branch_b[j] = 1;
                ++plan.stats.b;
                bool unresolved = false;
                ok = branch_b_1d(g, b, std::max(hw_factor * b.r, b.radius), plan.X[j], plan.F[j], unresolved, last);
                if (unresolved) ++plan.stats.unresolved;
            }
            if (!ok) {
                std::ostringstream os;
                os << " at nu=" << nu << ", omega=" << omega;
                last += os.str();
            }
            if (ok) {
                plan.nu = nu;
                plan.omega = omega;
                plan.balls = std::move(balls);
                plan.color = color_classes(plan.balls);
                plan.colors = plan.color.empty() ? 0 : *std::max_element(plan.color.begin(), plan.color.end()) + 1;
                for (const auto& b : plan.balls) plan.rmax = std::max(plan.rmax, b.radius);
                return plan;
            }
        }
        if (notes) notes->push_back(last);
        if (opt.nu) break;
    }
    throw std::runtime_error("no admissible nu" + std::string(opt.nu ? "" : " above the floor") + ": " + last);
}

SampledFunction clamp_input(const SampledFunction& f) {
    f.validate();
    if (f.values.minCoeff() < -kNegTol) throw std::invalid_argument("decompose: f is negative beyond tolerance");
    SampledFunction g = f;
    g.values = g.values.max(0.0);
    return g;
}

// points of {r > 0} at least one stencil away from {r = 0}, inside the control field margins
MaskXX verified_region(const ControlField& r, int margin) {
    int nx = static_cast<int>(r.r.rows()), ny = static_cast<int>(r.r.cols());
    MaskXX zero = r.r <= 0;
    MaskXX out = r.valid && (r.r > 0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (!zero(i, j)) continue;
            for (int a = std::max(0, i - margin); a <= std::min(nx - 1, i + margin); ++a)
                for (int c = (r.n == 2 ? std::max(0, j - margin) : 0); c <= (r.n == 2 ? std::min(ny - 1, j + margin) : 0); ++c)
                    out(a, c) = false;
        }
    return out;
}

Decomposition skeleton(const SampledFunction& f, const ControlField& r, int k, double alpha) {
    Decomposition d;
    d.n = f.n;
    d.k = k;
    d.alpha = alpha;
    d.origin = f.origin;
    d.h = f.h;
    d.r = r.r;
    d.residual = ArrayXXd::Zero(f.nx(), f.ny());
    d.region = verified_region(r, stencil_half(k));
    return d;
}

void drop_zero_squares(Decomposition& d) {
    std::vector<ArrayXXd> keep;
    for (auto& g : d.squares)
        if ((g != 0).any()) keep.push_back(std::move(g));
    d.squares = std::move(keep);
}

void check_args(const SampledFunction& f, int k, double alpha) {
    if (k != 2 && k != 3) throw std::invalid_argument("decompose: k must be 2 or 3");
    if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("decompose: alpha must be in (0, 1]");
    if (f.n != 1 && f.n != 2) throw std::invalid_argument("decompose: n must be 1 or 2");
}

Decomposition decompose_1d(const SampledFunction& f, int k, double alpha, const DecomposeOptions& opt) {
    auto r = control_field(f, k, alpha);
    Decomposition d = skeleton(f, r, k, alpha);
    auto plan = plan_1d(f, r, k, alpha, opt, &d.notes);
    d.nu = plan.nu;
    d.omega = plan.omega;
    d.stats = plan.stats;
    d.balls = static_cast<int>(plan.balls.size());
    if (plan.balls.empty()) return d;
    auto pou = partition_functions(plan.balls, r);
    d.colors = pou.colors;
    d.max_overlap = pou.max_overlap;
    d.identity_error = pou.identity_error;
    for (std::size_t j = 0; j < plan.balls.size(); ++j)
        if (plan.branch_b[j]) d.minima.push_back({plan.balls[j].x, plan.balls[j].radius, plan.X[j], plan.F[j]});
    d.squares.assign(plan.slots(), ArrayXXd::Zero(f.nx(), 1));
    std::vector<double> slots;
    for (int i = 0; i < f.nx(); ++i) {
        plan.eval(f.x(i), f.values(i, 0), slots, d.clamped, d.clamp_depth);
        for (int s = 0; s < plan.slots(); ++s) d.squares[s](i, 0) = slots[s];
    }
    drop_zero_squares(d);
    return d;
}

// ---- two dimensions ----

double keys(double t) {
    t = std::abs(t);
    if (t < 1) return (1.5 * t - 2.5) * t * t + 1;
    if (t < 2) return ((-0.5 * t + 2.5) * t - 4) * t + 2;
    return 0;
}

// bicubic (Keys) interpolation with replicated edges; false outside the grid
bool bicubic(const SampledFunction& f, double x, double y, double& out) {
    double u = (x - f.origin(0)) / f.h, v = (y - f.origin(1)) / f.h;
    const double eps = 1e-9;
    if (u < -eps || v < -eps || u > f.nx() - 1 + eps || v > f.ny() - 1 + eps) return false;
    int i = std::clamp(static_cast<int>(std::floor(u)), 0, f.nx() - 2);
    int j = std::clamp(static_cast<int>(std::floor(v)), 0, f.ny() - 2);
    double acc = 0;
    for (int a = i - 1; a <= i + 2; ++a) {
        double wa = keys(u - a);
        if (wa == 0) continue;
        int ca = std::clamp(a, 0, f.nx() - 1);
        for (int b = j - 1; b <= j + 2; ++b) acc += wa * keys(v - b) * f.values(ca, std::clamp(b, 0, f.ny() - 1));
    }
    out = acc;
    return true;
}

struct Fiber {
    bool ok = false;
    bool interior = false;
    double X = 0, F = 0;
};

Fiber fiber_min(const SampledFunction& f, const Eigen::Vector2d& c, const Eigen::Vector2d& xi,
                const Eigen::Vector2d& eta, double s, double hw) {
    Fiber out;
    auto val = [&](double t, double& v) {
        Eigen::Vector2d p = c + s * eta + t * xi;
        return bicubic(f, p(0), p(1), v);
    };
    double step = 0.5 * f.h;
    int m = static_cast<int>(std::ceil(hw / step));
    std::vector<double> ts, vs;
    for (int q = -m; q <= m; ++q) {
        double t = std::clamp(q * step, -hw, hw), v;
        if (val(t, v)) {
            ts.push_back(t);
            vs.push_back(v);
        }
    }
    if (ts.size() < 3) return out;
    std::size_t best = std::min_element(vs.begin(), vs.end()) - vs.begin();
    out.ok = true;
    out.interior = best > 0 && best + 1 < ts.size();
    if (!out.interior) {
        out.X = ts[best];
        out.F = vs[best];
        return out;
    }
    auto fn = [&](double t) {
        double v;
        return val(t, v) ? v : std::numeric_limits<double>::infinity();
    };
    auto [x, v] = golden(fn, ts[best - 1], ts[best + 1]);
    if (v < vs[best]) {
        out.X = x;
        out.F = v;
    } else {
        out.X = ts[best];
        out.F = vs[best];
    }
    return out;
}

struct Ball2D {
    bool b = false;
    bool unresolved = false;
    Eigen::Vector2d xi, eta;
    double hw = 0;
    double Fconst = 0;
    Plan1D sub;
    SampledFunction sub_f;
    // per patch point: fiber value and position
    ArrayXXd F, X;
};

bool process_b_2d(const SampledFunction& f, const CoverBall& ball, const BallPatch& patch, const ArrayXXd& fxx,
                  const ArrayXXd& fxy, const ArrayXXd& fyy, int directions, double hw, int k, double alpha,
                  Ball2D& out, std::string& why) {
    out.b = true;
    out.hw = hw;
    if (hw < 2 * f.h) {
        out.unresolved = true;
        double m = std::numeric_limits<double>::infinity();
        for (int a = 0; a < patch.psi.rows(); ++a)
            for (int c = 0; c < patch.psi.cols(); ++c)
                if (patch.psi(a, c) > 0) m = std::min(m, f.values(patch.i0 + a, patch.j0 + c));
        out.Fconst = std::isfinite(m) ? m : 0.0;
        return true;
    }
    double best = -std::numeric_limits<double>::infinity(), theta = 0;
    for (int q = 0; q < directions / 2; ++q) {
        double t = 2 * M_PI * q / directions, cs = std::cos(t), sn = std::sin(t);
        double v = cs * cs * fxx(ball.i, ball.j) + 2 * cs * sn * fxy(ball.i, ball.j) + sn * sn * fyy(ball.i, ball.j);
        if (v > best) {
            best = v;
            theta = t;
        }
    }
    out.xi = {std::cos(theta), std::sin(theta)};
    out.eta = {-std::sin(theta), std::cos(theta)};
    Eigen::Vector2d c(ball.x, ball.y);
    std::ostringstream os;
    os << "fiber minimum of the ball at (" << ball.x << ", " << ball.y << ") ";
    out.F = ArrayXXd::Zero(patch.psi.rows(), patch.psi.cols());
    out.X = ArrayXXd::Zero(patch.psi.rows(), patch.psi.cols());
    for (int a = 0; a < patch.psi.rows(); ++a)
        for (int q = 0; q < patch.psi.cols(); ++q) {
            if (patch.psi(a, q) <= 0) continue;
            Eigen::Vector2d y(f.x(patch.i0 + a), f.y(patch.j0 + q));
            double s = (y - c).dot(out.eta);
            auto fb = fiber_min(f, c, out.xi, out.eta, s, hw);
            if (!fb.ok || !fb.interior) {
                why = os.str() + (fb.ok ? "hits the fiber boundary" : "leaves the grid");
                return false;
            }
            out.F(a, q) = std::min(fb.F, f.values(patch.i0 + a, patch.j0 + q));
            out.X(a, q) = fb.X;
        }
    // 1d restriction phi F, phi = 1 on the ball
    const int m = 201;
    double span = 2.5 * ball.radius;
    auto G = [&](double s) {
        double phi = bump(std::abs(s) / (2 * ball.radius));
        if (phi <= 0) return 0.0;
        auto fb = fiber_min(f, c, out.xi, out.eta, s, hw);
        return fb.ok ? phi * std::max(0.0, fb.F) : 0.0;
    };
    out.sub_f = sample_1d(G, -span, span, m);
    try {
        SampledFunction gn = out.sub_f;
        double lam = top_seminorm(gn, k, alpha);
        if (lam > 0) gn.values /= lam;
        auto rs = control_field(gn, k, alpha);
        out.sub = plan_1d(gn, rs, k, alpha, {}, nullptr);
        if (lam > 0) out.sub.scale = lam;
    } catch (const std::exception& e) {
        why = os.str() + "restriction: " + e.what();
        return false;
    }
    return true;
}

Decomposition decompose_2d(const SampledFunction& f, int k, double alpha, const DecomposeOptions& opt) {
    const int directions = 64;
    auto r = control_field(f, k, alpha, directions);
    Decomposition d = skeleton(f, r, k, alpha);
    if (!(r.r.maxCoeff() > 0)) return d;
    auto fxx = derivative(f, 2, 0).values, fxy = derivative(f, 1, 1).values, fyy = derivative(f, 0, 2).values;
    std::string last;
    double nu = opt.nu.value_or(opt.nu_start);
    for (; nu > 0; nu = next_nu(nu, opt.nu_floor)) {
        auto sv = check_slow_variation(r, nu);
        if (!sv.ok) {
            std::ostringstream os;
            os << "slow variation fails at nu=" << nu << " (worst " << sv.worst << ")";
            last = os.str();
            d.notes.push_back(last);
            if (opt.nu) break;
            continue;
        }
        double omega = opt.omega.value_or(2 * omega_hat(f, r, nu));
        auto balls = build_cover(r, nu);
        auto pou = partition_functions(balls, r);
        std::vector<Ball2D> info(balls.size());
        BranchStats stats;
        double hw_factor = std::sqrt(nu * nu + 3 * nu * omega);
        bool ok = true;
        for (std::size_t j = 0; j < balls.size() && ok; ++j) {
            const auto& b = balls[j];
            if (f.values(b.i, b.j) >= omega * nu * std::pow(b.r, k + alpha)) {
                ++stats.a;
                continue;
            }
            ++stats.b;
            ok = process_b_2d(f, b, pou.patches[j], fxx, fxy, fyy, directions, std::max(hw_factor * b.r, b.radius), k,
                              alpha, info[j], last);
            if (info[j].unresolved) ++stats.unresolved;
        }
        if (!ok) {
            d.notes.push_back(last);
            if (opt.nu) break;
            continue;
        }
        d.nu = nu;
        d.omega = omega;
        d.stats = stats;
        d.balls = static_cast<int>(balls.size());
        d.colors = pou.colors;
        d.max_overlap = pou.max_overlap;
        d.identity_error = pou.identity_error;
        int m1 = 0;
        for (const auto& bi : info)
            if (bi.b) m1 = std::max(m1, bi.unresolved ? 1 : bi.sub.slots());
        d.sub_squares = m1;
        int per = 1 + m1;
        d.squares.assign(pou.colors * per, ArrayXXd::Zero(f.nx(), f.ny()));
        std::vector<double> sub;
        for (std::size_t j = 0; j < balls.size(); ++j) {
            const auto& patch = pou.patches[j];
            const auto& bi = info[j];
            int base = pou.color[j] * per;
            Eigen::Vector2d c(balls[j].x, balls[j].y);
            for (int a = 0; a < patch.psi.rows(); ++a)
                for (int q = 0; q < patch.psi.cols(); ++q) {
                    double psi = patch.psi(a, q);
                    if (psi <= 0) continue;
                    int gi = patch.i0 + a, gj = patch.j0 + q;
                    double v = f.values(gi, gj);
                    if (!bi.b) {
                        d.squares[base](gi, gj) += psi * std::sqrt(v);
                        continue;
                    }
                    if (bi.unresolved) {
                        d.squares[base](gi, gj) += psi * std::sqrt(std::max(0.0, v - bi.Fconst));
                        d.squares[base + 1](gi, gj) += psi * std::sqrt(std::max(0.0, bi.Fconst));
                        continue;
                    }
                    Eigen::Vector2d y(f.x(gi), f.y(gj));
                    double s = (y - c).dot(bi.eta), t = (y - c).dot(bi.xi);
                    double F = bi.F(a, q), X = bi.X(a, q);
                    double sg = t > X ? 1.0 : (t < X ? -1.0 : 0.0);
                    d.squares[base](gi, gj) += psi * sg * std::sqrt(std::max(0.0, v - F));
                    bi.sub.eval(s, F, sub, d.clamped, d.clamp_depth);
                    for (std::size_t u = 0; u < sub.size(); ++u) d.squares[base + 1 + u](gi, gj) += psi * sub[u];
                }
        }
        drop_zero_squares(d);
        return d;
    }
    throw std::runtime_error("no admissible nu" + std::string(opt.nu ? "" : " above the floor") + ": " + last);
}

}  // namespace

namespace {

double normalization(SampledFunction& g, int k, double alpha, const DecomposeOptions& opt) {
    if (!opt.normalize) return 1;
    double lam = top_seminorm(g, k, alpha, g.n == 1 ? kFullWindow : 20 * g.h);
    if (!(lam > 0)) return 1;
    g.values /= lam;
    return lam;
}

void rescale(Decomposition& d) {
    if (d.scale == 1) return;
    double s = std::sqrt(d.scale);
    for (auto& g : d.squares) g *= s;
    d.residual *= d.scale;
    d.clamp_depth *= d.scale;
    for (auto& m : d.minima) m.F *= d.scale;
}

}  // namespace

Decomposition decompose(const SampledFunction& f, int k, double alpha, const DecomposeOptions& opt) {
    check_args(f, k, alpha);
    auto g = clamp_input(f);
    double lam = normalization(g, k, alpha, opt);
    auto d = g.n == 1 ? decompose_1d(g, k, alpha, opt) : decompose_2d(g, k, alpha, opt);
    d.scale = lam;
    rescale(d);
    return d;
}

Decomposition partial_decompose(const SampledFunction& f, int k, double alpha, double eps,
                                const DecomposeOptions& opt) {
    check_args(f, k, alpha);
    if (!(eps > 0)) throw std::invalid_argument("partial: epsilon must be positive");
    auto g = clamp_input(f);
    double lam = normalization(g, k, alpha, opt);
    auto r = control_field(g, k, alpha);
    Decomposition d = skeleton(g, r, k, alpha);
    d.partial = true;
    d.epsilon = eps;
    d.scale = lam;
    if (!(r.r.maxCoeff() > 0)) return d;
    double floor = opt.nu ? *opt.nu : 1e-6;
    std::string last;
    for (double nu = opt.nu.value_or(opt.nu_start); nu > 0; nu = next_nu(nu, floor)) {
        auto sv = check_slow_variation(r, nu);
        if (!sv.ok) {
            std::ostringstream os;
            os << "slow variation fails at nu=" << nu;
            last = os.str();
            d.notes.push_back(last);
            if (opt.nu) break;
            continue;
        }
        double omega = opt.omega.value_or(2 * omega_hat(g, r, nu));
        auto balls = build_cover(r, nu);
        auto pou = partition_functions(balls, r);
        ArrayXXd res = ArrayXXd::Zero(g.nx(), g.ny());
        std::vector<ArrayXXd> sq(pou.colors, ArrayXXd::Zero(g.nx(), g.ny()));
        BranchStats stats;
        for (std::size_t j = 0; j < balls.size(); ++j) {
            const auto& b = balls[j];
            bool is_b = g.values(b.i, b.j) < omega * nu * std::pow(b.r, k + alpha);
            ++(is_b ? stats.b : stats.a);
            const auto& patch = pou.patches[j];
            for (int a = 0; a < patch.psi.rows(); ++a)
                for (int q = 0; q < patch.psi.cols(); ++q) {
                    double psi = patch.psi(a, q);
                    if (psi <= 0) continue;
                    int gi = patch.i0 + a, gj = patch.j0 + q;
                    double v = g.values(gi, gj);
                    if (is_b)
                        res(gi, gj) += psi * psi * v;
                    else
                        sq[pou.color[j]](gi, gj) += psi * std::sqrt(v);
                }
        }
        double sup = res.maxCoeff() * lam;
        if (sup > eps) {
            std::ostringstream os;
            os << "residual " << sup << " exceeds " << eps << " at nu=" << nu;
            last = os.str();
            d.notes.push_back(last);
            if (opt.nu) break;
            continue;
        }
        d.nu = nu;
        d.omega = omega;
        d.stats = stats;
        d.balls = static_cast<int>(balls.size());
        d.colors = pou.colors;
        d.max_overlap = pou.max_overlap;
        d.identity_error = pou.identity_error;
        d.residual = res;
        d.squares = std::move(sq);
        drop_zero_squares(d);
        rescale(d);
        return d;
    }
    throw std::runtime_error("partial: nu reached its floor: " + last);
}

VerifyReport verify(const Decomposition& d, const SampledFunction& f, double tolerance) {
    VerifyReport v;
    int nx = f.nx(), ny = f.ny();
    if (d.r.rows() != nx || d.r.cols() != ny) throw std::invalid_argument("verify: grid mismatch");
    ArrayXXd sum = d.residual;
    for (const auto& g : d.squares) sum += g.square();
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (!d.region(i, j)) continue;
            ++v.region_points;
            v.error = std::max(v.error, std::abs(sum(i, j) - f.values(i, j)));
        }
    v.residual_ok = (d.residual >= -kNegTol).all() && (!d.partial || d.residual.maxCoeff() <= d.epsilon);
    v.g_exponent = 1;
    v.gprime_exponent = d.k == 2 ? d.alpha / 2 : (1 + d.alpha) / 2;
    double half = (d.k + d.alpha) / 2;
    // bounded pair windows keep the scans linear in the grid size
    double window = f.h * (d.n == 1 ? 1000 : 10);
    for (const auto& g : d.squares) {
        SampledFunction gs;
        gs.n = d.n;
        gs.origin = d.origin;
        gs.h = d.h;
        gs.values = g;
        v.g_seminorm.push_back(pair_seminorm({&g}, d.region, d.n, d.h, v.g_exponent, window));
        std::vector<DerivativeField> grad{derivative(gs, 1, 0)};
        if (d.n == 2) grad.push_back(derivative(gs, 0, 1));
        MaskXX valid = d.region;
        std::vector<const ArrayXXd*> comps;
        ArrayXXd norm = ArrayXXd::Zero(nx, ny);
        for (const auto& gr : grad) {
            valid = valid && gr.valid;
            comps.push_back(&gr.values);
            norm += gr.values.square();
        }
        norm = norm.sqrt();
        v.gprime_seminorm.push_back(pair_seminorm(comps, valid, d.n, d.h, v.gprime_exponent, window));
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                if (!valid(i, j)) continue;
                double rr = d.r(i, j);
                v.g_constant = std::max(v.g_constant, std::abs(g(i, j)) / std::pow(rr, half));
                v.gprime_constant = std::max(v.gprime_constant, norm(i, j) / std::pow(rr, half - 1));
            }
    }
    v.squares = static_cast<int>(d.squares.size());
    v.bound = square_bound(d.n);
    bool finite = std::isfinite(v.g_constant) && std::isfinite(v.gprime_constant);
    for (double s : v.g_seminorm) finite = finite && std::isfinite(s);
    for (double s : v.gprime_seminorm) finite = finite && std::isfinite(s);
    v.ok = v.error <= tolerance && v.squares <= v.bound && v.residual_ok && finite && d.identity_error <= 1e-10 &&
           d.max_overlap <= (d.n == 1 ? 15 : 225);
    return v;
}

std::string to_json(const Decomposition& d, const VerifyReport& v, bool include_squares) {
    using nlohmann::json;
    auto flat = [](const ArrayXXd& a) {
        std::vector<double> out;
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) out.push_back(a(i, j));
        return out;
    };
    json j;
    j["grid"] = {{"n", d.n},
                 {"origin", d.n == 1 ? std::vector<double>{d.origin(0)} : std::vector<double>{d.origin(0), d.origin(1)}},
                 {"spacing", d.h},
                 {"shape", d.n == 1 ? std::vector<long>{d.r.rows()} : std::vector<long>{d.r.rows(), d.r.cols()}}};
    j["parameters"] = {{"k", d.k}, {"alpha", d.alpha}, {"nu", d.nu}, {"omega", d.omega}, {"scale", d.scale}};
    if (d.partial) j["parameters"]["epsilon"] = d.epsilon;
    j["cover"] = {{"balls", d.balls},
                  {"colors", d.colors},
                  {"max_overlap", d.max_overlap},
                  {"identity_error", d.identity_error},
                  {"branch_a", d.stats.a},
                  {"branch_b", d.stats.b},
                  {"unresolved", d.stats.unresolved},
                  {"sub_squares", d.sub_squares},
                  {"clamped", d.clamped},
                  {"clamp_depth", d.clamp_depth}};
    j["report"] = {{"error", v.error},
                   {"region_points", v.region_points},
                   {"g_exponent", v.g_exponent},
                   {"gprime_exponent", v.gprime_exponent},
                   {"g_seminorm", v.g_seminorm},
                   {"gprime_seminorm", v.gprime_seminorm},
                   {"g_constant", v.g_constant},
                   {"gprime_constant", v.gprime_constant},
                   {"squares", v.squares},
                   {"bound", v.bound},
                   {"residual_ok", v.residual_ok},
                   {"ok", v.ok}};
    j["notes"] = d.notes;
    if (include_squares) {
        json sq = json::array();
        for (const auto& g : d.squares) sq.push_back(flat(g));
        j["squares"] = sq;
        j["residual"] = flat(d.residual);
    }
    return j.dump();
}

}  // namespace sosh
