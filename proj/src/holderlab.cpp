#include "sosh/holderlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "sosh/multiindex.hpp"

namespace sosh {

using Eigen::ArrayXXd;
using Eigen::VectorXd;

void SampledFunction::validate() const {
    if (n != 1 && n != 2) throw std::invalid_argument("sampled function: n must be 1 or 2");
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("sampled function: spacing must be positive");
    if (values.size() == 0) throw std::invalid_argument("sampled function: no values");
    if (n == 1 && values.cols() != 1) throw std::invalid_argument("sampled function: 1d grid has one column");
    if (!values.allFinite()) throw std::invalid_argument("sampled function: non-finite value");
}

SampledFunction sample_1d(const std::function<double(double)>& f, double a, double b, int count,
                          const std::string& name) {
    if (count < 2 || !(b > a)) throw std::invalid_argument("sample_1d: need count >= 2 and b > a");
    SampledFunction s;
    s.n = 1;
    s.origin << a, 0.0;
    s.h = (b - a) / (count - 1);
    s.values.resize(count, 1);
    for (int i = 0; i < count; ++i) s.values(i, 0) = f(i == count - 1 ? b : a + s.h * i);
    s.name = name;
    s.validate();
    return s;
}

SampledFunction sample_2d(const std::function<double(double, double)>& f, double a, double b, int count,
                          const std::string& name) {
    if (count < 2 || !(b > a)) throw std::invalid_argument("sample_2d: need count >= 2 and b > a");
    SampledFunction s;
    s.n = 2;
    s.origin << a, a;
    s.h = (b - a) / (count - 1);
    s.values.resize(count, count);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j) s.values(i, j) = f(a + s.h * i, a + s.h * j);
    s.name = name;
    s.validate();
    return s;
}

std::string to_json(const SampledFunction& f) {
    nlohmann::json j;
    j["n"] = f.n;
    j["origin"] = f.n == 1 ? std::vector<double>{f.origin(0)} : std::vector<double>{f.origin(0), f.origin(1)};
    j["spacing"] = f.h;
    j["shape"] = f.n == 1 ? std::vector<int>{f.nx()} : std::vector<int>{f.nx(), f.ny()};
    std::vector<double> v;
    v.reserve(f.values.size());
    for (int i = 0; i < f.nx(); ++i)
        for (int c = 0; c < f.ny(); ++c) v.push_back(f.values(i, c));
    j["values"] = v;
    if (!f.name.empty()) j["name"] = f.name;
    return j.dump();
}

SampledFunction sampled_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("sampled function json: ") + e.what());
    }
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("sampled function json: missing ") + key);
        return j[key];
    };
    SampledFunction s;
    try {
        s.n = need("n").get<int>();
        auto origin = need("origin").get<std::vector<double>>();
        s.h = need("spacing").get<double>();
        auto shape = need("shape").get<std::vector<int>>();
        auto vals = need("values").get<std::vector<double>>();
        if (s.n != 1 && s.n != 2) throw std::invalid_argument("sampled function json: n must be 1 or 2");
        if (static_cast<int>(origin.size()) != s.n || static_cast<int>(shape.size()) != s.n)
            throw std::invalid_argument("sampled function json: origin/shape length differs from n");
        int nx = shape[0], ny = s.n == 2 ? shape[1] : 1;
        if (nx < 1 || ny < 1 || static_cast<long>(nx) * ny != static_cast<long>(vals.size()))
            throw std::invalid_argument("sampled function json: value count does not match shape");
        s.origin << origin[0], s.n == 2 ? origin[1] : 0.0;
        s.values.resize(nx, ny);
        for (int i = 0; i < nx; ++i)
            for (int c = 0; c < ny; ++c) s.values(i, c) = vals[static_cast<std::size_t>(i) * ny + c];
        if (j.contains("name")) s.name = j["name"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("sampled function json: ") + e.what());
    }
    s.validate();
    return s;
}

VectorXd fornberg_weights(int order, const VectorXd& nodes, double x0) {
    int m = static_cast<int>(nodes.size());
    if (order < 0 || order >= m) throw std::invalid_argument("fornberg: need more nodes than the order");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, order + 1);
    double c1 = 1, c4 = nodes(0) - x0;
    c(0, 0) = 1;
    for (int i = 1; i < m; ++i) {
        int mn = std::min(i, order);
        double c2 = 1, c5 = c4;
        c4 = nodes(i) - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = nodes(i) - nodes(j);
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(order);
}

int stencil_half(int order) { return order == 0 ? 0 : (order + 1) / 2 + 1; }

namespace {

VectorXd central_weights(int order) {
    int half = stencil_half(order);
    VectorXd nodes(2 * half + 1);
    for (int m = -half; m <= half; ++m) nodes(m + half) = m;
    return fornberg_weights(order, nodes, 0.0);
}

// roundoff level of an order-j difference of data bounded by fmax
double fd_noise(double fmax, int order, double h, int n) {
    if (order == 0) return 0;
    double w = central_weights(order).cwiseAbs().sum();
    return 64 * std::numeric_limits<double>::epsilon() * fmax * std::pow(w, n) / std::pow(h, order);
}

void apply_axis(const ArrayXXd& in, ArrayXXd& out, MaskXX& valid, int axis, int order, double h) {
    out = in;
    if (order == 0) return;
    VectorXd w = central_weights(order);
    int half = stencil_half(order);
    double scale = std::pow(h, -order);
    int nx = static_cast<int>(in.rows()), ny = static_cast<int>(in.cols());
    int len = axis == 0 ? nx : ny;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int p = axis == 0 ? i : j;
            if (p < half || p >= len - half) {
                out(i, j) = 0;
                valid(i, j) = false;
                continue;
            }
            double acc = 0;
            for (int m = -half; m <= half; ++m)
                acc += w(m + half) * (axis == 0 ? in(i + m, j) : in(i, j + m));
            out(i, j) = acc * scale;
        }
}

// soft threshold keeps r continuous across the noise level
double clamp_pos(double v, double floor) { return v > floor ? v - floor : 0.0; }

}  // namespace

DerivativeField derivative(const SampledFunction& f, int ax, int ay) {
    f.validate();
    if (ax < 0 || ay < 0) throw std::invalid_argument("derivative: negative order");
    if (f.n == 1 && ay != 0) throw std::invalid_argument("derivative: 1d grid has no y direction");
    DerivativeField d;
    d.valid = MaskXX::Constant(f.nx(), f.ny(), true);
    ArrayXXd tmp;
    apply_axis(f.values, tmp, d.valid, 0, ax, f.h);
    apply_axis(tmp, d.values, d.valid, 1, ay, f.h);
    if (2 * stencil_half(ax) >= f.nx() || (f.n == 2 && 2 * stencil_half(ay) >= f.ny()))
        throw std::invalid_argument("derivative: insufficient grid margin");
    return d;
}

namespace {

// partials d_x^a d_y^(j-a), a = 0..j
std::vector<DerivativeField> partials(const SampledFunction& f, int j) {
    std::vector<DerivativeField> out;
    for (int a = 0; a <= j; ++a) out.push_back(derivative(f, a, j - a));
    return out;
}

DerivativeField combine_direction(const std::vector<DerivativeField>& parts, int j, double theta) {
    DerivativeField d;
    d.values = ArrayXXd::Zero(parts[0].values.rows(), parts[0].values.cols());
    d.valid = MaskXX::Constant(d.values.rows(), d.values.cols(), true);
    double c = std::cos(theta), s = std::sin(theta);
    for (const auto& t : directional_expand(j, 2)) {
        int a = t.beta[0], b = t.beta[1];
        double coef = t.coeff.get_d() * std::pow(c, a) * std::pow(s, b);
        d.values += coef * parts[a].values;
        d.valid = d.valid && parts[a].valid;
    }
    (void)j;
    return d;
}

}  // namespace

DerivativeField directional_derivative(const SampledFunction& f, int order, double theta) {
    if (f.n == 1) {
        auto d = derivative(f, order);
        if (std::cos(theta) < 0 && order % 2) d.values = -d.values;
        return d;
    }
    return combine_direction(partials(f, order), order, theta);
}

double pair_seminorm(const std::vector<const ArrayXXd*>& fields, const MaskXX& valid, int n, double h,
                     double alpha, double window) {
    if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("seminorm: alpha must be in (0, 1]");
    if (window < h * (1 - 1e-12)) throw std::invalid_argument("seminorm: window smaller than one grid step");
    int nx = static_cast<int>(valid.rows()), ny = static_cast<int>(valid.cols());
    auto diff = [&](int i0, int j0, int i1, int j1) {
        double s = 0;
        for (const auto* f : fields) {
            double d = (*f)(i1, j1) - (*f)(i0, j0);
            s += d * d;
        }
        return std::sqrt(s);
    };
    double best = 0;
    if (n == 1) {
        int dmax = static_cast<int>(std::min<double>(nx - 1, std::floor(window / h + 1e-9)));
        for (int d = 1; d <= dmax; ++d) {
            double den = std::pow(d * h, alpha);
            double m = 0;
            for (int i = 0; i + d < nx; ++i)
                if (valid(i, 0) && valid(i + d, 0)) m = std::max(m, diff(i, 0, i + d, 0));
            best = std::max(best, m / den);
        }
        return best;
    }
    int reach = static_cast<int>(std::min<double>(std::max(nx, ny), std::floor(window / h + 1e-9)));
    auto scan = [&](int stride, int rmin, int rmax) {
        for (int di = 0; di <= rmax; di += stride)
            for (int dj = -rmax; dj <= rmax; dj += stride) {
                if (di == 0 && dj <= 0) continue;
                double dist = std::hypot(di, dj);
                if (dist > rmax + 1e-9 || dist <= rmin || dist * h > window * (1 + 1e-12)) continue;
                double den = std::pow(dist * h, alpha);
                double m = 0;
                for (int i = 0; i + di < nx; i += stride)
                    for (int j = std::max(0, -dj); j < ny && j + dj < ny; j += stride)
                        if (valid(i, j) && valid(i + di, j + dj)) m = std::max(m, diff(i, j, i + di, j + dj));
                best = std::max(best, m / den);
            }
    };
    double cost = double(reach + 1) * (2 * reach + 1) * nx * ny;
    if (cost <= 4e8) {
        scan(1, 0, reach);
    } else {
        // exact near pairs, far pairs on a coarsened lattice
        const int near = 12;
        scan(1, 0, std::min(near, reach));
        int stride = std::max(1, std::max(nx, ny) / 80);
        scan(stride, near, reach);
    }
    return best;
}

Eigen::ArrayXXd pointwise_seminorm(const ArrayXXd& v, const MaskXX& valid, int n, double h, double alpha,
                                   int steps) {
    int nx = static_cast<int>(v.rows()), ny = static_cast<int>(v.cols());
    ArrayXXd out = ArrayXXd::Zero(nx, ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (!valid(i, j)) continue;
            double m = 0;
            for (int di = -steps; di <= steps; ++di)
                for (int dj = (n == 2 ? -steps : 0); dj <= (n == 2 ? steps : 0); ++dj) {
                    if (di == 0 && dj == 0) continue;
                    double dist = std::hypot(di, dj);
                    if (dist > steps + 1e-9) continue;
                    int a = i + di, b = j + dj;
                    if (a < 0 || a >= nx || b < 0 || b >= ny || !valid(a, b)) continue;
                    m = std::max(m, std::abs(v(a, b) - v(i, j)) / std::pow(dist * h, alpha));
                }
            out(i, j) = m;
        }
    return out;
}

HolderEstimate estimate_seminorm(const SampledFunction& f, double alpha, double window, bool pointwise) {
    return estimate_seminorm(f, alpha, {0, 0}, window, pointwise);
}

HolderEstimate estimate_seminorm(const SampledFunction& f, double alpha, std::array<int, 2> beta, double window,
                                 bool pointwise) {
    auto d = derivative(f, beta[0], beta[1]);
    HolderEstimate e;
    e.alpha = alpha;
    double diam = f.h * std::hypot(f.nx() - 1, f.ny() - 1);
    e.window = std::min(window, diam);
    e.estimate = pair_seminorm({&d.values}, d.valid, f.n, f.h, alpha, window);
    if (pointwise) {
        e.pointwise = pointwise_seminorm(d.values, d.valid, f.n, f.h, alpha, 3);
    }
    return e;
}

double top_seminorm(const SampledFunction& f, int k, double alpha, double window) {
    f.validate();
    double fmax = f.values.abs().maxCoeff();
    double noise = 2 * fd_noise(fmax, k, f.h, f.n) / std::pow(f.h, alpha);
    double best = 0;
    for (int a = 0; a <= k; ++a) {
        if (f.n == 1 && a != k) continue;
        auto d = derivative(f, a, k - a);
        best = std::max(best, pair_seminorm({&d.values}, d.valid, f.n, f.h, alpha, window));
    }
    return best > 10 * noise ? best : 0.0;
}

ControlField control_field(const SampledFunction& f, int k, double alpha, int directions) {
    f.validate();
    if (k < 0) throw std::invalid_argument("control_field: k must be non-negative");
    if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("control_field: alpha must be in (0, 1]");
    if (f.n == 2 && (directions < 2 || directions % 2))
        throw std::invalid_argument("control_field: directions must be even and >= 2");
    ControlField c;
    c.n = f.n;
    c.k = k;
    c.alpha = alpha;
    c.directions = directions;
    c.h = f.h;
    c.origin = f.origin;
    int nx = f.nx(), ny = f.ny();
    int margin = stencil_half(k - k % 2);
    if (2 * margin >= nx || (f.n == 2 && 2 * margin >= ny))
        throw std::invalid_argument("control_field: insufficient grid margin");
    c.valid = MaskXX::Constant(nx, ny, true);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            if (i < margin || i >= nx - margin || (f.n == 2 && (j < margin || j >= ny - margin))) c.valid(i, j) = false;
    double fmax = f.values.abs().maxCoeff();
    c.r = ArrayXXd::Zero(nx, ny);
    for (int j = 0; j <= k; j += 2) {
        double e = 1.0 / (k - j + alpha);
        ArrayXXd best;
        if (j == 0) {
            best = f.values.max(0.0);
        } else if (f.n == 1) {
            best = derivative(f, j).values;
        } else {
            auto parts = partials(f, j);
            best = ArrayXXd::Constant(nx, ny, -std::numeric_limits<double>::infinity());
            // even order: xi and -xi agree, half of the circle suffices
            for (int m = 0; m < directions / 2; ++m) {
                double theta = 2 * M_PI * m / directions;
                best = best.max(combine_direction(parts, j, theta).values);
            }
        }
        double floor = fd_noise(fmax, j, f.h, f.n);
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b) {
                if (!c.valid(a, b)) continue;
                double v = clamp_pos(best(a, b), floor);
                if (v > 0) c.r(a, b) = std::max(c.r(a, b), std::pow(v, e));
            }
    }
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b) {
            if (c.valid(a, b)) continue;
            int ca = std::clamp(a, margin, nx - 1 - margin);
            int cb = f.n == 2 ? std::clamp(b, margin, ny - 1 - margin) : 0;
            c.r(a, b) = c.r(ca, cb);
        }
    return c;
}

SlowVariation check_slow_variation(const ControlField& r, double nu) {
    if (!(nu > 0)) throw std::invalid_argument("slow variation: nu must be positive");
    SlowVariation out;
    int nx = static_cast<int>(r.r.rows()), ny = static_cast<int>(r.r.cols());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double rx = r.r(i, j);
            if (rx <= 0) continue;
            double rad = nu * rx / r.h;
            int s = static_cast<int>(std::floor(rad + 1e-12));
            for (int di = -s; di <= s; ++di)
                for (int dj = (r.n == 2 ? -s : 0); dj <= (r.n == 2 ? s : 0); ++dj) {
                    if (std::hypot(di, dj) > rad + 1e-12) continue;
                    int a = i + di, b = j + dj;
                    if (a < 0 || a >= nx || b < 0 || b >= ny) continue;
                    out.worst = std::max(out.worst, std::abs(r.r(a, b) - rx) / rx);
                }
        }
    out.ok = out.worst <= 0.25;
    return out;
}

double malgrange_constant(double alpha) { return (alpha + 1) / std::pow(alpha, alpha / (1 + alpha)); }

namespace {

void require_nonneg(const SampledFunction& f) {
    if (f.values.minCoeff() < -1e-12) throw std::invalid_argument("not non-negative");
}

// sup over sampled unit directions of |d^l_xi f|
DerivativeField derivative_norm(const SampledFunction& f, int ell, int directions = 64) {
    if (f.n == 1 || ell == 0) {
        auto d = derivative(f, ell);
        d.values = d.values.abs();
        return d;
    }
    auto parts = partials(f, ell);
    DerivativeField out;
    out.values = ArrayXXd::Zero(f.nx(), f.ny());
    out.valid = MaskXX::Constant(f.nx(), f.ny(), true);
    for (int m = 0; m < directions / 2; ++m) {
        auto d = combine_direction(parts, ell, 2 * M_PI * m / directions);
        out.values = out.values.max(d.values.abs());
        out.valid = d.valid;
    }
    return out;
}

double safe_ratio(double num, double den) {
    if (num == 0) return 0;
    if (den <= 0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

CheckReport check_malgrange(const SampledFunction& f, double alpha, double slack) {
    f.validate();
    if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("malgrange: alpha must be in (0, 1]");
    require_nonneg(f);
    std::vector<DerivativeField> grad;
    grad.push_back(derivative(f, 1, 0));
    if (f.n == 2) grad.push_back(derivative(f, 0, 1));
    MaskXX valid = grad[0].valid;
    std::vector<const ArrayXXd*> comps;
    for (const auto& g : grad) {
        valid = valid && g.valid;
        comps.push_back(&g.values);
    }
    double semi = pair_seminorm(comps, valid, f.n, f.h, alpha, kFullWindow);
    ArrayXXd lhs = ArrayXXd::Zero(f.nx(), f.ny()), err = ArrayXXd::Zero(f.nx(), f.ny());
    for (const auto& g : grad) lhs += g.values.square();
    lhs = lhs.sqrt();
    // truncation error estimate: distance to the 3-point difference
    for (int i = 1; i + 1 < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j) {
            double e = 0, d = (f.values(i + 1, j) - f.values(i - 1, j)) / (2 * f.h) - grad[0].values(i, j);
            e += d * d;
            if (f.n == 2 && j >= 1 && j + 1 < f.ny()) {
                d = (f.values(i, j + 1) - f.values(i, j - 1)) / (2 * f.h) - grad[1].values(i, j);
                e += d * d;
            }
            err(i, j) = std::sqrt(e);
        }
    lhs = (lhs - err).max(0.0);
    double lmax = 0;
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j)
            if (valid(i, j)) lmax = std::max(lmax, lhs(i, j));
    double floor = std::max(1e-9 * lmax, fd_noise(f.values.abs().maxCoeff(), 1, f.h, f.n));
    double cst = malgrange_constant(alpha);
    CheckReport rep;
    rep.slack = slack;
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j) {
            if (!valid(i, j) || lhs(i, j) <= floor) continue;
            double rhs = cst * std::pow(semi, 1 / (1 + alpha)) * std::pow(std::max(0.0, f.values(i, j)), alpha / (1 + alpha));
            rep.value = std::max(rep.value, safe_ratio(lhs(i, j), rhs));
        }
    rep.constants = {semi, cst};
    rep.ok = rep.value <= 1 + slack;
    rep.detail = "max (|grad f| - fd error) / (C [grad f]_a^(1/(1+a)) f^(a/(1+a)))";
    return rep;
}

CheckReport check_derivative_control(const SampledFunction& f, int k, double alpha, int ell) {
    if (ell < 0 || ell > k) throw std::invalid_argument("derivative control: need 0 <= l <= k");
    auto r = control_field(f, k, alpha);
    auto num = derivative_norm(f, ell);
    double nmax = 0;
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j)
            if (num.valid(i, j) && r.valid(i, j)) nmax = std::max(nmax, num.values(i, j));
    double floor = std::max(1e-9 * nmax, fd_noise(f.values.abs().maxCoeff(), ell, f.h, f.n));
    CheckReport rep;
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j) {
            if (!num.valid(i, j) || !r.valid(i, j)) continue;
            double v = num.values(i, j) <= floor ? 0.0 : num.values(i, j);
            rep.value = std::max(rep.value, safe_ratio(v, std::pow(r.r(i, j), k - ell + alpha)));
        }
    rep.ok = std::isfinite(rep.value);
    rep.detail = "sup |grad^l f| / r^(k-l+a)";
    return rep;
}

CheckReport check_interpolation(const SampledFunction& f, double alpha, double gamma, double beta, double slack) {
    if (!(0 < alpha && alpha < gamma && gamma < beta && beta <= 1))
        throw std::invalid_argument("interpolation: need 0 < alpha < gamma < beta <= 1");
    double sa = estimate_seminorm(f, alpha).estimate;
    double sg = estimate_seminorm(f, gamma).estimate;
    double sb = estimate_seminorm(f, beta).estimate;
    double lhs = std::pow(sg, beta - alpha);
    double rhs = std::pow(sa, beta - gamma) * std::pow(sb, gamma - alpha);
    CheckReport rep;
    rep.slack = slack;
    rep.constants = {sa, sg, sb};
    rep.value = lhs == 0 ? 0 : safe_ratio(lhs, rhs);
    rep.ok = lhs <= rhs * (1 + slack);
    rep.detail = "[f]_g^(b-a) / ([f]_a^(b-g) [f]_b^(g-a))";
    return rep;
}

CheckReport check_induc(const SampledFunction& f, int k, double alpha, double eta) {
    if (k < 4) throw std::invalid_argument("induc: k must be at least 4");
    if (!(eta > 0 && eta < (k - 2 + alpha) / (k + alpha)))
        throw std::invalid_argument("induc: eta must lie in (0, (k-2+a)/(k+a))");
    f.validate();
    double fmax = f.values.abs().maxCoeff();
    CheckReport rep;
    auto level = [&](int ell, double power) {
        auto num = derivative_norm(f, ell);
        double nmax = 0;
        for (int i = 0; i < f.nx(); ++i)
            for (int j = 0; j < f.ny(); ++j)
                if (num.valid(i, j)) nmax = std::max(nmax, num.values(i, j));
        double floor = std::max(1e-9 * nmax, fd_noise(fmax, ell, f.h, f.n));
        double c = 0;
        for (int i = 0; i < f.nx(); ++i)
            for (int j = 0; j < f.ny(); ++j) {
                if (!num.valid(i, j)) continue;
                double v = num.values(i, j) <= floor ? 0.0 : num.values(i, j);
                c = std::max(c, safe_ratio(v, std::pow(std::max(0.0, f.values(i, j)), power)));
            }
        return c;
    };
    rep.constants.push_back(level(2, eta));
    for (int ell = 4; ell <= k; ell += 2) rep.constants.push_back(level(ell, (k - ell + alpha) / (k + alpha)));
    rep.value = *std::max_element(rep.constants.begin(), rep.constants.end());
    rep.ok = std::isfinite(rep.value);
    rep.detail = "constants for |grad^2 f| <= C f^eta and even levels l in (2, k]";
    return rep;
}

RefinementStudy refinement_study(const std::function<double(int)>& metric, int count, double factor) {
    RefinementStudy s;
    s.coarse = metric(count);
    s.fine = metric(2 * count - 1);
    double lo = std::min(s.coarse, s.fine), hi = std::max(s.coarse, s.fine);
    s.ratio = hi == 0 ? 1.0 : (lo == 0 ? std::numeric_limits<double>::infinity() : hi / lo);
    s.stable = std::isfinite(s.coarse) && std::isfinite(s.fine) && s.ratio <= factor;
    return s;
}

}  // namespace sosh
