#include "mfts/random.hpp"

#include <cmath>
#include <stdexcept>

namespace mfts {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a, std::uint64_t b) {
    // FNV-1a over the tag, then splitmix rounds folding in the indices.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = root;
    std::uint64_t mixed = splitmix64(state) ^ h;
    state = mixed + a;
    mixed = splitmix64(state);
    state = mixed + b;
    return splitmix64(state);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t bounded_int(Rng& rng, std::uint64_t n) {
    // Lemire's multiply-shift; bias is negligible for our n << 2^64.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

double normal01(Rng& rng) {
    double u1 = 1.0 - uniform01(rng); // (0, 1], keeps log finite
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double gamma_sample(Rng& rng, double shape) {
    if (!(shape > 0.0)) {
        throw std::invalid_argument("gamma_sample: shape must be > 0");
    }
    if (shape < 1.0) {
        // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
        double u = 1.0 - uniform01(rng);
        return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal01(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(rng);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double beta_sample(Rng& rng, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("beta_sample: shapes must be > 0");
    }
    const double x = gamma_sample(rng, a);
    const double y = gamma_sample(rng, b);
    double w = (x + y > 0.0) ? x / (x + y) : 0.5;
    // For tiny shapes the gamma draws can underflow; keep weights strictly
    // inside (0, 1) so cascade masses never collapse to exact zero.
    constexpr double kFloor = 1e-12;
    if (w < kFloor) w = kFloor;
    if (w > 1.0 - kFloor) w = 1.0 - kFloor;
    return w;
}

} // namespace mfts
