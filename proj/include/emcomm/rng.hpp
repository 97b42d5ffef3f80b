#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace emcomm {

// splitmix64 step; used to whiten seeds and derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_index) {
    return mix64(mix64(master) ^ mix64(stream_index + 0x51ED2700FFD4A9D5ULL));
}

// Random stream with hand-rolled distributions on top of mt19937_64.
// The engine is fully specified by the standard and the samplers below use
// only its raw output, so a given seed yields the same draw sequence on
// every platform. Each simulation replicate owns exactly one stream.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(mix64(seed)) {}

    static RngStream derive(std::uint64_t master, std::uint64_t stream_index) {
        return RngStream(derive_seed(master, stream_index));
    }

    std::uint64_t raw() { return eng_(); }

    // uniform in [0,1) with 53-bit resolution
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in (0,1); safe under log()
    double u01_pos() {
        double u;
        do { u = u01(); } while (u <= 0.0);
        return u;
    }

    // uniform integer in [0,n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // Lemire-style rejection to avoid modulo bias.
        std::uint64_t x = eng_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = eng_();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return u01() < p; }

    // standard normal, Marsaglia polar method
    double normal() {
        for (;;) {
            const double x = 2.0 * u01() - 1.0;
            const double y = 2.0 * u01() - 1.0;
            const double s = x * x + y * y;
            if (s > 0.0 && s < 1.0) {
                return x * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

    // Gamma(shape, 1). Marsaglia-Tsang for shape >= 1; Ahrens-Dieter GS for
    // shape < 1, which needs no normal variates and stays fast for the very
    // small shapes produced by high certainty values.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
        if (shape < 1.0) return gamma_lt1(shape);
        return gamma_ge1(shape);
    }

    // Symmetric Dirichlet: normalized Gamma(concentration) variates.
    void dirichlet_symmetric(double concentration, std::span<double> out) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            double total = 0.0;
            for (double& w : out) {
                w = gamma(concentration);
                total += w;
            }
            if (total > 1e-280) {
                for (double& w : out) w /= total;
                return;
            }
            // all components underflowed (possible only for tiny shapes); redraw
        }
        throw std::runtime_error("dirichlet_symmetric: persistent underflow");
    }

    void dirichlet(std::span<const double> concentration, std::span<double> out) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            double total = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] = gamma(concentration[i]);
                total += out[i];
            }
            if (total > 1e-280) {
                for (double& w : out) w /= total;
                return;
            }
        }
        throw std::runtime_error("dirichlet: persistent underflow");
    }

    // index ~ weights / total; weights need not be normalized
    std::size_t categorical(std::span<const double> weights, double total) {
        double target = u01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            target -= weights[i];
            if (target < 0.0) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    double gamma_lt1(double shape) {
        const double b = 1.0 + shape * 0.36787944117144233;  // 1 + a/e
        const double inv_shape = 1.0 / shape;
        for (;;) {
            const double p = b * u01();
            if (p <= 1.0) {
                const double x = std::pow(p, inv_shape);
                if (u01() <= std::exp(-x)) return x;
            } else {
                const double x = -std::log((b - p) * inv_shape);
                if (u01() <= std::pow(x, shape - 1.0)) return x;
            }
        }
    }

    double gamma_ge1(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = u01_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::mt19937_64 eng_;
};

}  // namespace emcomm
