#pragma once

#include <cmath>
#include <cstdint>

#include "degenlab/linalg.hpp"

namespace degen {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: draw k of stream s under seed is mix(seed, s, k), so
// sample i can be regenerated without replaying samples 0..i-1.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    // Log-uniform on [a, b], a > 0.
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

    Vec normal_vec(int n) {
        Vec v(n);
        for (double& x : v) x = normal();
        return v;
    }
    Vec unit_vec(int n) {
        Vec v = normal_vec(n);
        double r = norm(v);
        while (r < 1e-12) {
            v = normal_vec(n);
            r = norm(v);
        }
        return scaled(v, 1.0 / r);
    }
    SymMat sym(int n, double scale = 1.0) {
        SymMat m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m.set(i, j, scale * normal());
        return m;
    }
    SymMat psd(int n, double scale = 1.0) {
        SymMat m(n);
        for (int k = 0; k < n; ++k) m += SymMat::outer(normal_vec(n)) * scale;
        return m;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace degen
