#pragma once

#include <cmath>
#include <cstdint>

namespace twotier {

// splitmix64 finalizer; used only for seed derivation, never as a generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for independent runs (grid points, t-steps, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Counter-based generator (Philox2x64-10). A stream is addressed by a
// 64-bit key and a 64-bit cell id; successive outputs walk a block counter.
// Streams for distinct (key, cell) pairs are independent by construction,
// so replications can be assigned to any number of threads and still
// produce bit-identical draws.
class RandomStream {
public:
    RandomStream(std::uint64_t key, std::uint64_t cell)
        : key_(key), cell_(cell) {}

    std::uint64_t next_u64() {
        if (pos_ == 2) refill();
        return out_[pos_++];
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; safe as a log() argument.
    double uniform01_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal, Box-Muller with the second variate cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Marsaglia-Tsang; exact for any shape > 0.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform01_open();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01_open();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    void refill() {
        std::uint64_t c0 = block_;
        std::uint64_t c1 = cell_;
        std::uint64_t k = key_;
        for (int r = 0; r < 10; ++r) {
            const unsigned __int128 prod =
                static_cast<unsigned __int128>(0xd2b74407b1ce6e93ULL) * c0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            c0 = hi ^ k ^ c1;
            c1 = lo;
            k += 0x9e3779b97f4a7c15ULL;
        }
        out_[0] = c0;
        out_[1] = c1;
        ++block_;
        pos_ = 0;
    }

    std::uint64_t key_;
    std::uint64_t cell_;
    std::uint64_t block_ = 0;
    std::uint64_t out_[2] = {0, 0};
    int pos_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream for one (replication, constituency) pair of a run.
// rep and sub must each fit in 32 bits; that bounds a single run at
// 2^32 replications of 2^32 constituencies, far beyond desk scale.
inline RandomStream replication_stream(std::uint64_t seed, std::uint64_t rep,
                                       std::uint64_t sub) {
    return RandomStream(mix64(seed), (rep << 32) | (sub & 0xffffffffULL));
}

}  // namespace twotier
