#pragma once

#include "isac/core.hpp"

#include <cstdint>
#include <random>

namespace isac {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded generator with its own Gaussian sampler so draws do not depend on
// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    // Circularly symmetric CN(0, 1).
    cd cnormal() {
        const double re = normal();
        const double im = normal();
        return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
    }

    CVec cnormal_vec(int n) {
        CVec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = cnormal();
        return v;
    }

    CMat cnormal_mat(int rows, int cols) {
        CMat m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i)
                m(i, j) = cnormal();
        return m;
    }

    int uniform_int(int n) { return static_cast<int>(uniform() * n); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace isac
