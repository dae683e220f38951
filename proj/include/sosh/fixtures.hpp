#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sosh/holderlab.hpp"

namespace sosh {

// |x|^a
double power_value(double x, double a);
// iterate of the middle-thirds map starting from the identity
double cantor_value(double x, int iterations);
double bony_value(double x);
double smooth_bump_value(double x);

struct FixtureInfo {
    std::string name;
    int n;
    double a, b;     // default domain (square for n = 2)
    int count;       // default points per axis
    double param;    // default parameter, NaN when unused
    bool c1alpha;    // non-negative and C^{1,alpha} for every alpha in (0, 1]
};

const std::vector<FixtureInfo>& fixture_catalog();
const FixtureInfo& fixture_info(const std::string& name);

// param: power exponent, power1a alpha, cantor iterations, constant value
SampledFunction make_fixture(const std::string& name, std::optional<double> param = std::nullopt, int count = 0,
                             std::optional<std::pair<double, double>> domain = std::nullopt);

}  // namespace sosh
