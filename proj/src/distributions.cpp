#include "twotier/distributions.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "twotier/stats.hpp"

namespace twotier {

DistributionSpec DistributionSpec::uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
    return {DistFamily::uniform, a, b};
}

DistributionSpec DistributionSpec::normal(double mean, double variance) {
    if (variance < 0.0) throw std::invalid_argument("normal: variance must be >= 0");
    return {DistFamily::normal, mean, variance};
}

DistributionSpec DistributionSpec::degenerate(double point) {
    return {DistFamily::degenerate, point, 0.0};
}

bool DistributionSpec::is_degenerate() const {
    return family == DistFamily::degenerate ||
           (family == DistFamily::normal && p2 == 0.0);
}

double DistributionSpec::variance() const {
    switch (family) {
        case DistFamily::uniform: return (p2 - p1) * (p2 - p1) / 12.0;
        case DistFamily::normal: return p2;
        case DistFamily::degenerate: return 0.0;
    }
    throw std::logic_error("unreachable");
}

std::string DistributionSpec::describe() const {
    char buf[96];
    switch (family) {
        case DistFamily::uniform:
            std::snprintf(buf, sizeof buf, "uniform(%.12g,%.12g)", p1, p2);
            break;
        case DistFamily::normal:
            std::snprintf(buf, sizeof buf, "normal(%.12g,%.12g)", p1, p2);
            break;
        case DistFamily::degenerate:
            std::snprintf(buf, sizeof buf, "degenerate(%.12g)", p1);
            break;
    }
    return buf;
}

double density_at(const DistributionSpec& spec, double x) {
    if (spec.is_degenerate())
        throw std::invalid_argument("density_at: degenerate distribution has no density");
    switch (spec.family) {
        case DistFamily::uniform:
            return (x >= spec.p1 && x <= spec.p2) ? 1.0 / (spec.p2 - spec.p1) : 0.0;
        case DistFamily::normal: {
            const double sd = std::sqrt(spec.p2);
            const double z = (x - spec.p1) / sd;
            return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * 3.14159265358979323846));
        }
        case DistFamily::degenerate: break;
    }
    throw std::logic_error("unreachable");
}

double theoretical_median(const DistributionSpec& spec) {
    switch (spec.family) {
        case DistFamily::uniform: return 0.5 * (spec.p1 + spec.p2);
        case DistFamily::normal: return spec.p1;
        case DistFamily::degenerate: return spec.p1;
    }
    throw std::logic_error("unreachable");
}

double inverse_cdf(const DistributionSpec& spec, double p) {
    if (spec.is_degenerate())
        throw std::invalid_argument("inverse_cdf: degenerate distribution");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_cdf: p must be in (0,1)");
    switch (spec.family) {
        case DistFamily::uniform: return spec.p1 + (spec.p2 - spec.p1) * p;
        case DistFamily::normal: return spec.p1 + std::sqrt(spec.p2) * normal_quantile(p);
        case DistFamily::degenerate: break;
    }
    throw std::logic_error("unreachable");
}

double cdf_at(const DistributionSpec& spec, double x) {
    switch (spec.family) {
        case DistFamily::uniform:
            if (x <= spec.p1) return 0.0;
            if (x >= spec.p2) return 1.0;
            return (x - spec.p1) / (spec.p2 - spec.p1);
        case DistFamily::normal:
            if (spec.p2 == 0.0) return x < spec.p1 ? 0.0 : 1.0;
            return normal_cdf((x - spec.p1) / std::sqrt(spec.p2));
        case DistFamily::degenerate:
            return x < spec.p1 ? 0.0 : 1.0;
    }
    throw std::logic_error("unreachable");
}

DistributionSpec parse_distribution(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw std::invalid_argument("parse_distribution: expected family(args): " + text);
    const std::string family = s.substr(0, open);
    const std::string args = s.substr(open + 1, s.size() - open - 2);

    double a = 0.0, b = 0.0;
    const auto comma = args.find(',');
    auto to_double = [&](const std::string& t) {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size())
            throw std::invalid_argument("parse_distribution: bad number: " + t);
        return v;
    };

    if (family == "degenerate") {
        if (comma != std::string::npos)
            throw std::invalid_argument("parse_distribution: degenerate takes one argument");
        return DistributionSpec::degenerate(to_double(args));
    }
    if (comma == std::string::npos)
        throw std::invalid_argument("parse_distribution: expected two arguments: " + text);
    a = to_double(args.substr(0, comma));
    b = to_double(args.substr(comma + 1));
    if (family == "uniform") return DistributionSpec::uniform(a, b);
    if (family == "normal") return DistributionSpec::normal(a, b);
    throw std::invalid_argument("parse_distribution: unknown family: " + family);
}

}  // namespace twotier
