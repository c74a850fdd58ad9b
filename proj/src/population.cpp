#include "twotier/population.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twotier {

ConstituencyPartition::ConstituencyPartition(std::vector<std::int64_t> s)
    : sizes(std::move(s)) {
    if (sizes.empty()) throw std::invalid_argument("partition needs at least one constituency");
    for (std::int64_t n : sizes) {
        if (n <= 0) throw std::invalid_argument("constituency sizes must be positive");
        if (n % 2 == 0)
            throw std::invalid_argument("constituency sizes must be odd, got " +
                                        std::to_string(n));
    }
}

std::int64_t ConstituencyPartition::total_population() const {
    std::int64_t s = 0;
    for (std::int64_t n : sizes) s += n;
    return s;
}

std::string ConstituencyPartition::describe() const {
    std::ostringstream os;
    os << "m=" << sizes.size() << " sizes=(";
    for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? "," : "") << sizes[i];
    os << ")";
    return os.str();
}

PreferenceModel::PreferenceModel(DistributionSpec g_, DistributionSpec h_, double t)
    : g(g_), h(h_), shock_scale(t) {
    if (g.is_degenerate())
        throw std::invalid_argument("preference model: g must be non-degenerate");
    if (!(shock_scale >= 0.0))
        throw std::invalid_argument("preference model: shock_scale must be >= 0");
}

std::string PreferenceModel::describe() const {
    std::ostringstream os;
    os << "g=" << g.describe() << " h=" << h.describe() << " t=" << shock_scale;
    return os.str();
}

namespace {

double draw_from(const DistributionSpec& spec, RandomStream& rs) {
    switch (spec.family) {
        case DistFamily::uniform: return rs.uniform(spec.p1, spec.p2);
        case DistFamily::normal:
            return spec.p2 == 0.0 ? spec.p1 : rs.normal(spec.p1, std::sqrt(spec.p2));
        case DistFamily::degenerate: return spec.p1;
    }
    throw std::logic_error("unreachable");
}

double median_direct(const DistributionSpec& g, std::int64_t n, RandomStream& rs) {
    thread_local std::vector<double> buf;
    buf.resize(static_cast<std::size_t>(n));
    for (auto& x : buf) x = draw_from(g, rs);
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    return *mid;
}

// The middle order statistic of n i.i.d. draws has quantile rank
// Beta((n+1)/2, (n+1)/2); this route draws the rank, not the sample.
double median_rank(std::int64_t n, RandomStream& rs) {
    const double a = 0.5 * static_cast<double>(n + 1);
    double u = rs.beta(a, a);
    // Keep the rank strictly inside (0,1) for quantile transforms.
    u = std::min(std::max(u, 0x1.0p-53), 1.0 - 0x1.0p-53);
    return u;
}

constexpr std::int64_t kDirectCutoff = 10001;

}  // namespace

double sample_constituency_median(const DistributionSpec& g, std::int64_t n,
                                  RandomStream& rs, MedianPath path) {
    if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("sample_constituency_median: n must be a positive odd integer");
    if (g.is_degenerate())
        throw std::invalid_argument("sample_constituency_median: g must be non-degenerate");

    if (path == MedianPath::auto_select) {
        if (g.family == DistFamily::uniform)
            path = MedianPath::beta_affine;
        else
            path = n <= kDirectCutoff ? MedianPath::direct : MedianPath::beta_quantile;
    }

    switch (path) {
        case MedianPath::direct:
            return median_direct(g, n, rs);
        case MedianPath::beta_affine: {
            if (g.family != DistFamily::uniform)
                throw std::invalid_argument("beta_affine path requires uniform g");
            return g.p1 + (g.p2 - g.p1) * median_rank(n, rs);
        }
        case MedianPath::beta_quantile:
            return inverse_cdf(g, median_rank(n, rs));
        case MedianPath::auto_select: break;
    }
    throw std::logic_error("unreachable");
}

void sample_ideal_points(const PreferenceModel& model,
                         const ConstituencyPartition& partition,
                         std::uint64_t seed, std::uint64_t replication,
                         std::span<double> out) {
    const std::size_t m = partition.size();
    if (out.size() != m)
        throw std::invalid_argument("sample_ideal_points: output span has wrong length");
    const bool iid = model.iid();
    for (std::size_t i = 0; i < m; ++i) {
        RandomStream rs = replication_stream(seed, replication, i);
        double shock = 0.0;
        if (!iid) shock = model.shock_scale * draw_from(model.h, rs);
        const double median = sample_constituency_median(model.g, partition.sizes[i], rs);
        out[i] = shock + median;
    }
}

double asymptotic_median_density(double g_density_at_median, std::int64_t n) {
    if (!(g_density_at_median > 0.0))
        throw std::invalid_argument("asymptotic_median_density: density must be positive");
    if (n <= 0) throw std::invalid_argument("asymptotic_median_density: n must be positive");
    return 2.0 * g_density_at_median * std::sqrt(static_cast<double>(n)) /
           std::sqrt(2.0 * 3.14159265358979323846);
}

double asymptotic_median_variance(double g_density_at_median, std::int64_t n) {
    if (!(g_density_at_median > 0.0))
        throw std::invalid_argument("asymptotic_median_variance: density must be positive");
    if (n <= 0) throw std::invalid_argument("asymptotic_median_variance: n must be positive");
    const double d = 2.0 * g_density_at_median;
    return 1.0 / (static_cast<double>(n) * d * d);
}

double ideal_point_density_ratio(std::int64_t n_i, std::int64_t n_j,
                                 double sigma_g_sq, double sigma_h_sq) {
    if (n_i <= 0 || n_j <= 0)
        throw std::invalid_argument("ideal_point_density_ratio: sizes must be positive");
    if (!(sigma_g_sq > 0.0))
        throw std::invalid_argument("ideal_point_density_ratio: sigma_g_sq must be positive");
    if (sigma_h_sq < 0.0)
        throw std::invalid_argument("ideal_point_density_ratio: sigma_h_sq must be >= 0");
    const double pi = 3.14159265358979323846;
    const double vi = pi * sigma_g_sq / (2.0 * static_cast<double>(n_i)) + sigma_h_sq;
    const double vj = pi * sigma_g_sq / (2.0 * static_cast<double>(n_j)) + sigma_h_sq;
    return std::sqrt(vj / vi);
}

std::int64_t round_to_odd(double x) {
    if (!(x > 0.0)) return 1;
    const auto k = static_cast<std::int64_t>(std::llround(x));
    if (k <= 1) return 1;
    if (k % 2 != 0) return k;
    // k even: pick the nearer odd neighbor, ties upward.
    return (x >= static_cast<double>(k)) ? k + 1 : k - 1;
}

ConstituencyPartition load_partition_file(const std::string& path, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("population scale must be positive");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open population file: " + path);
    std::vector<std::int64_t> sizes;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double value;
        if (!(ls >> value)) continue;
        sizes.push_back(round_to_odd(value / scale));
    }
    if (sizes.empty())
        throw std::invalid_argument("population file has no entries: " + path);
    return ConstituencyPartition(std::move(sizes));
}

ConstituencyPartition partition_from_config(const KeyValueFile& kv,
                                            const std::string& base_dir) {
    if (kv.has("sizes")) {
        std::vector<std::int64_t> sizes;
        for (double x : kv.get_doubles("sizes"))
            sizes.push_back(static_cast<std::int64_t>(std::llround(x)));
        return ConstituencyPartition(std::move(sizes));
    }
    if (kv.has("population_file")) {
        std::filesystem::path p = kv.get_string("population_file");
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        return load_partition_file(p.string(), kv.get_double("population_scale", 1.0));
    }
    throw std::invalid_argument("config needs either 'sizes' or 'population_file'");
}

PreferenceModel model_from_config(const KeyValueFile& kv) {
    const DistributionSpec g = parse_distribution(kv.get_string("g"));
    DistributionSpec h = DistributionSpec::degenerate(0.0);
    if (kv.has("h")) h = parse_distribution(kv.get_string("h"));
    const double t = kv.get_double("shock_scale", 0.0);
    return PreferenceModel(g, h, t);
}

}  // namespace twotier
