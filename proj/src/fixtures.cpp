#include "sosh/fixtures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sosh {

double power_value(double x, double a) { return std::pow(std::abs(x), a); }

double cantor_value(double x, int iterations) {
    if (iterations <= 0) return x;
    if (x <= 1.0 / 3) return 0.5 * cantor_value(3 * x, iterations - 1);
    if (x < 2.0 / 3) return 0.5;
    return 0.5 * (1 + cantor_value(3 * x - 2, iterations - 1));
}

double bony_value(double x) {
    double ax = std::abs(x);
    if (ax == 0) return 0;
    double s = std::sin(M_PI / ax);
    return std::exp(-1 / ax) * (s * s + std::exp(-1 / (x * x)));
}

double smooth_bump_value(double x) {
    if (std::abs(x) >= 1) return 0;
    return x * x * std::exp(1 / (x * x - 1));
}

const std::vector<FixtureInfo>& fixture_catalog() {
    static const double nan = std::numeric_limits<double>::quiet_NaN();
    static const std::vector<FixtureInfo> cat = {
        {"power", 1, -1, 1, 4001, 0.5, false},
        {"power1a", 1, -1, 1, 4001, 1.0, false},
        {"cantor", 1, 0, 1, 4001, 12, false},
        {"bony", 1, -0.6, 0.6, 12001, nan, true},
        {"smooth_bump", 1, -1.2, 1.2, 4001, nan, true},
        {"square", 1, -2, 2, 4001, nan, true},
        {"constant", 1, 0, 1, 1001, 1.0, true},
        {"paraboloid", 2, -2, 2, 201, nan, true},
        {"radial_bump", 2, -1.2, 1.2, 201, nan, true},
    };
    return cat;
}

const FixtureInfo& fixture_info(const std::string& name) {
    for (const auto& f : fixture_catalog())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown fixture: " + name);
}

SampledFunction make_fixture(const std::string& name, std::optional<double> param, int count,
                             std::optional<std::pair<double, double>> domain) {
    const auto& info = fixture_info(name);
    double p = param.value_or(info.param);
    int c = count > 0 ? count : info.count;
    auto [a, b] = domain.value_or(std::make_pair(info.a, info.b));
    if (name == "power") {
        if (!(p > 0)) throw std::invalid_argument("power: exponent must be positive");
        return sample_1d([p](double x) { return power_value(x, p); }, a, b, c, name);
    }
    if (name == "power1a") {
        if (!(p > 0 && p <= 1)) throw std::invalid_argument("power1a: alpha must be in (0, 1]");
        return sample_1d([p](double x) { return power_value(x, 1 + p); }, a, b, c, name);
    }
    if (name == "cantor") {
        if (!(p >= 0) || p != std::floor(p)) throw std::invalid_argument("cantor: iterations must be a natural number");
        int it = static_cast<int>(p);
        return sample_1d([it](double x) { return cantor_value(x, it); }, a, b, c, name);
    }
    if (name == "bony") return sample_1d(bony_value, a, b, c, name);
    if (name == "smooth_bump") return sample_1d(smooth_bump_value, a, b, c, name);
    if (name == "square") return sample_1d([](double x) { return x * x; }, a, b, c, name);
    if (name == "constant") return sample_1d([p](double) { return p; }, a, b, c, name);
    if (name == "paraboloid") return sample_2d([](double x, double y) { return x * x + y * y; }, a, b, c, name);
    // radial_bump
    return sample_2d([](double x, double y) { return smooth_bump_value(std::hypot(x, y)); }, a, b, c, name);
}

}  // namespace sosh
