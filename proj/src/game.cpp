#include "twotier/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace twotier {

namespace {

constexpr int kExactCap = 20;       // subset enumeration bound
constexpr int kDpPlayerCap = 50;    // keeps coalition counts exact in doubles
constexpr std::int64_t kDpTableBudget = 30'000'000;

// Positional coefficients s!(m-1-s)!/m! built without factorial overflow.
std::vector<double> shapley_coefficients(std::size_t m) {
    std::vector<double> coef(m);
    coef[0] = 1.0 / static_cast<double>(m);
    for (std::size_t s = 1; s < m; ++s)
        coef[s] = coef[s - 1] * static_cast<double>(s) / static_cast<double>(m - s);
    return coef;
}

void validate_shapley_sum(PowerIndexVector& v) {
    double sum = 0.0;
    for (double x : v.values) sum += x;
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::logic_error("shapley: efficiency violated, sum = " + std::to_string(sum));
}

std::vector<std::int64_t> integer_weights_or_throw(const WeightedVotingGame& game) {
    if (!game.integral_weights())
        throw std::invalid_argument("integer weights required (see rationalize_weights)");
    std::vector<std::int64_t> w(game.size());
    for (std::size_t i = 0; i < game.size(); ++i)
        w[i] = static_cast<std::int64_t>(std::llround(game.weights[i]));
    return w;
}

}  // namespace

WeightedVotingGame::WeightedVotingGame(double quota, std::vector<double> w)
    : quota_fraction(quota), weights(std::move(w)) {
    if (!(quota_fraction >= 0.5 && quota_fraction < 1.0))
        throw std::invalid_argument("quota_fraction must lie in [0.5, 1)");
    if (weights.empty()) throw std::invalid_argument("game needs at least one weight");
    bool any_positive = false;
    for (double x : weights) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("weights must be finite and nonnegative");
        any_positive |= x > 0.0;
    }
    if (!any_positive)
        throw std::invalid_argument("degenerate game: all weights are zero");
}

double WeightedVotingGame::total_weight() const {
    double s = 0.0;
    for (double x : weights) s += x;
    return s;
}

bool WeightedVotingGame::integral_weights() const {
    return weights_are_integral(weights);
}

std::string WeightedVotingGame::describe() const {
    std::ostringstream os;
    os << "[q=" << quota_fraction << "; w=(";
    for (std::size_t i = 0; i < weights.size(); ++i)
        os << (i ? "," : "") << weights[i];
    os << ")]";
    return os.str();
}

bool exceeds_quota(double sum, double absolute_quota) {
    const double eps = 1e-9 * std::max(1.0, std::fabs(absolute_quota));
    return sum > absolute_quota + eps;
}

std::int64_t winning_threshold(double quota_fraction, std::int64_t total_weight) {
    const long double qw = static_cast<long double>(quota_fraction) *
                           static_cast<long double>(total_weight);
    const std::int64_t nearest = static_cast<std::int64_t>(llroundl(qw));
    if (fabsl(qw - static_cast<long double>(nearest)) <
        1e-9L * std::max<long double>(1.0L, fabsl(qw)))
        return nearest + 1;
    return static_cast<std::int64_t>(floorl(qw)) + 1;
}

bool is_winning(const WeightedVotingGame& game, const Coalition& coalition) {
    const int m = static_cast<int>(game.size());
    std::vector<bool> seen(game.size(), false);
    double sum = 0.0;
    for (int i : coalition.members) {
        if (i < 0 || i >= m) throw std::invalid_argument("invalid coalition: index out of range");
        if (seen[static_cast<std::size_t>(i)])
            throw std::invalid_argument("invalid coalition: duplicate index");
        seen[static_cast<std::size_t>(i)] = true;
        sum += game.weights[static_cast<std::size_t>(i)];
    }
    return exceeds_quota(sum, game.absolute_quota());
}

PowerIndexVector shapley_exact(const WeightedVotingGame& game) {
    const std::size_t m = game.size();
    if (m > kExactCap)
        throw std::invalid_argument("shapley_exact: m exceeds enumeration cap 20");
    const double qm = game.absolute_quota();
    const auto coef = shapley_coefficients(m);

    PowerIndexVector out;
    out.kind = IndexKind::shapley;
    out.values.assign(m, 0.0);

    std::vector<double> others;
    others.reserve(m - 1);
    std::vector<std::uint64_t> swings(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        others.clear();
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) others.push_back(game.weights[j]);
        const std::size_t k = others.size();
        std::fill(swings.begin(), swings.end(), 0);

        // Gray-code walk over subsets of the other players, updating the
        // subset sum and cardinality incrementally.
        double sum = 0.0;
        int card = 0;
        std::uint64_t gray = 0;
        const std::uint64_t total = 1ULL << k;
        for (std::uint64_t step = 0;; ++step) {
            const bool losing = !exceeds_quota(sum, qm);
            if (losing && exceeds_quota(sum + game.weights[i], qm))
                ++swings[static_cast<std::size_t>(card)];
            if (step + 1 == total) break;
            const std::uint64_t next_gray = (step + 1) ^ ((step + 1) >> 1);
            const std::uint64_t changed = gray ^ next_gray;
            const int bit = std::countr_zero(changed);
            if (next_gray & changed) {
                sum += others[static_cast<std::size_t>(bit)];
                ++card;
            } else {
                sum -= others[static_cast<std::size_t>(bit)];
                --card;
            }
            gray = next_gray;
        }

        double phi = 0.0;
        for (std::size_t s = 0; s < m; ++s)
            phi += coef[s] * static_cast<double>(swings[s]);
        out.values[i] = phi;
    }
    validate_shapley_sum(out);
    return out;
}

namespace {

// Coalition counts by (cardinality, weight) for all m players, plus the
// deconvolution that removes one player. Counts stay exact in doubles
// for m <= kDpPlayerCap.
struct DpTables {
    std::size_t m = 0;
    std::int64_t W = 0;
    std::vector<double> all;  // (m+1) x (W+1)

    double& at(std::vector<double>& t, std::size_t s, std::int64_t x) const {
        return t[s * static_cast<std::size_t>(W + 1) + static_cast<std::size_t>(x)];
    }
    double get(const std::vector<double>& t, std::size_t s, std::int64_t x) const {
        return t[s * static_cast<std::size_t>(W + 1) + static_cast<std::size_t>(x)];
    }

    explicit DpTables(std::span<const std::int64_t> w) {
        m = w.size();
        W = std::accumulate(w.begin(), w.end(), std::int64_t{0});
        if (m > kDpPlayerCap)
            throw std::invalid_argument("shapley_dp: player count exceeds cap 50");
        if (static_cast<std::int64_t>(m + 1) * (W + 1) > kDpTableBudget)
            throw std::invalid_argument("shapley_dp: weight total exceeds arithmetic budget");
        all.assign((m + 1) * static_cast<std::size_t>(W + 1), 0.0);
        all[0] = 1.0;
        std::int64_t partial = 0;
        std::size_t count = 0;
        for (std::int64_t wi : w) {
            partial += wi;
            ++count;
            for (std::size_t s = count; s >= 1; --s) {
                for (std::int64_t x = partial; x >= wi; --x)
                    at(all, s, x) += get(all, s - 1, x - wi);
            }
        }
    }

    // Counts over subsets that exclude player i, via
    // without[s][x] = all[s][x] - without[s-1][x - w_i].
    void without_player(std::int64_t wi, std::vector<double>& without) const {
        without.assign(m * static_cast<std::size_t>(W + 1), 0.0);
        for (std::int64_t x = 0; x <= W; ++x)
            without[static_cast<std::size_t>(x)] = all[static_cast<std::size_t>(x)];
        for (std::size_t s = 1; s < m; ++s) {
            for (std::int64_t x = 0; x <= W; ++x) {
                double v = get(all, s, x);
                if (x >= wi)
                    v -= without[(s - 1) * static_cast<std::size_t>(W + 1) +
                                 static_cast<std::size_t>(x - wi)];
                without[s * static_cast<std::size_t>(W + 1) + static_cast<std::size_t>(x)] = v;
            }
        }
    }
};

}  // namespace

PowerIndexVector shapley_dp(const WeightedVotingGame& game) {
    const auto w = integer_weights_or_throw(game);
    const std::size_t m = w.size();
    DpTables dp(w);
    const std::int64_t T = winning_threshold(game.quota_fraction, dp.W);
    const auto coef = shapley_coefficients(m);

    PowerIndexVector out;
    out.kind = IndexKind::shapley;
    out.values.assign(m, 0.0);

    std::vector<double> without;
    for (std::size_t i = 0; i < m; ++i) {
        if (w[i] == 0) continue;  // swing window empty
        dp.without_player(w[i], without);
        double phi = 0.0;
        const std::int64_t lo = std::max<std::int64_t>(0, T - w[i]);
        for (std::size_t s = 0; s < m; ++s) {
            double cnt = 0.0;
            for (std::int64_t x = lo; x < T && x <= dp.W; ++x)
                cnt += without[s * static_cast<std::size_t>(dp.W + 1) +
                               static_cast<std::size_t>(x)];
            phi += coef[s] * cnt;
        }
        out.values[i] = phi;
    }
    validate_shapley_sum(out);
    return out;
}

PowerIndexVector banzhaf(const WeightedVotingGame& game) {
    const auto w = integer_weights_or_throw(game);
    const std::size_t m = w.size();
    DpTables dp(w);
    const std::int64_t T = winning_threshold(game.quota_fraction, dp.W);

    PowerIndexVector out;
    out.kind = IndexKind::banzhaf;
    out.values.assign(m, 0.0);

    const double denom = std::ldexp(1.0, static_cast<int>(m) - 1);
    std::vector<double> without;
    for (std::size_t i = 0; i < m; ++i) {
        if (w[i] == 0) continue;
        dp.without_player(w[i], without);
        double swings = 0.0;
        const std::int64_t lo = std::max<std::int64_t>(0, T - w[i]);
        for (std::size_t s = 0; s < m; ++s)
            for (std::int64_t x = lo; x < T && x <= dp.W; ++x)
                swings += without[s * static_cast<std::size_t>(dp.W + 1) +
                                  static_cast<std::size_t>(x)];
        out.values[i] = swings / denom;
    }
    return out;
}

int pivotal_index(const WeightedVotingGame& game, std::span<const double> ideal_points,
                  SweepDirection direction) {
    const std::size_t m = game.size();
    if (ideal_points.size() != m)
        throw std::invalid_argument("pivotal_index: ideal point count != weight count");
    const double qm = game.absolute_quota();

    thread_local std::vector<std::pair<double, int>> order;
    order.clear();
    order.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        order.emplace_back(ideal_points[i], static_cast<int>(i));
    if (direction == SweepDirection::left_to_right) {
        std::sort(order.begin(), order.end());
    } else {
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
    }

    double cum = 0.0;
    for (const auto& [point, idx] : order) {
        cum += game.weights[static_cast<std::size_t>(idx)];
        if (exceeds_quota(cum, qm)) return idx;
    }
    // Unreachable for q < 1: the grand coalition always wins.
    return order.back().second;
}

bool weights_are_integral(std::span<const double> weights) {
    for (double x : weights) {
        if (!(x >= 0.0) || x > 9e15) return false;
        if (std::fabs(x - std::llround(x)) > 1e-9) return false;
    }
    return true;
}

std::vector<std::int64_t> rationalize_weights(std::span<const double> weights,
                                              std::int64_t resolution) {
    if (resolution < 1) throw std::invalid_argument("rationalize_weights: resolution >= 1");
    double total = 0.0;
    for (double x : weights) {
        if (!(x >= 0.0)) throw std::invalid_argument("rationalize_weights: negative weight");
        total += x;
    }
    if (total <= 0.0) throw std::invalid_argument("rationalize_weights: all weights zero");

    std::vector<std::int64_t> out(weights.size());
    std::int64_t g = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out[i] = std::llround(weights[i] / total * static_cast<double>(resolution));
        g = std::gcd(g, out[i]);
    }
    if (g == 0) {
        // Every entry rounded to zero; keep the largest weight alive.
        const auto it = std::max_element(weights.begin(), weights.end());
        out[static_cast<std::size_t>(it - weights.begin())] = 1;
        return out;
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

WeightedVotingGame parse_game_text(std::istream& in) {
    double quota;
    if (!(in >> quota)) throw std::invalid_argument("game record: missing quota fraction");
    std::vector<double> w;
    double x;
    while (in >> x) w.push_back(x);
    if (w.empty()) throw std::invalid_argument("game record: missing weights");
    return WeightedVotingGame(quota, std::move(w));
}

WeightedVotingGame load_game_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open game file: " + path);
    return parse_game_text(in);
}

std::string game_to_text(const WeightedVotingGame& game) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", game.quota_fraction);
    std::string s = buf;
    s += '\n';
    for (std::size_t i = 0; i < game.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", game.weights[i]);
        if (i) s += ' ';
        s += buf;
    }
    s += '\n';
    return s;
}

std::string power_index_csv(std::span<const PowerIndexVector> vectors) {
    std::string s = "index,value,kind\n";
    char buf[64];
    for (const auto& v : vectors) {
        const char* kind = v.kind == IndexKind::shapley ? "shapley" : "banzhaf";
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.12g,%s\n", i + 1, v.values[i], kind);
            s += buf;
        }
    }
    return s;
}

}  // namespace twotier
