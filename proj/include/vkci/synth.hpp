#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "vkci/grid.hpp"
#include "vkci/norms.hpp"

namespace vkci {

namespace detail {

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

/// Phase in [0, 2pi) as a pure function of (seed, tag, k1, k2). Phases do not
/// depend on the grid, so a coarse grid samples a truncation of the same
/// random function that a fine grid sees.
inline double mode_phase(std::uint64_t seed, std::uint64_t tag, long k1, long k2) {
    std::uint64_t h = hash_combine(seed, tag);
    h = hash_combine(h, std::uint64_t(k1));
    h = hash_combine(h, std::uint64_t(k2) * 0x100000001B3ull);
    return (double(h >> 11) / double(1ull << 53)) * 2.0 * std::numbers::pi;
}

/// Random Fourier sum over modes 0 < |k|, |k1|,|k2| <= kmax with per-mode
/// amplitude |k|^-(beta+1). Evaluated separably: one pass builds per-k1
/// y-profiles, a second combines them along x. O(kmax * N) total.
inline std::vector<double> fourier_component(const GridSpec& g, double beta,
                                             std::uint64_t seed, std::uint64_t tag) {
    const long kmax = long(std::min(g.nx, g.ny) - 1) / 2;
    const std::size_t nx = g.nx, ny = g.ny;
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<std::complex<double>> profile((kmax + 1) * ny, {0.0, 0.0});
    for (long k1 = 0; k1 <= kmax; ++k1) {
        for (long k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;  // half-lattice; conjugates folded into cos
            const double kk = std::hypot(double(k1), double(k2));
            const double amp = std::pow(kk, -(beta + 1.0));
            const double phi = mode_phase(seed, tag, k1, k2);
            const std::complex<double> c = amp * std::polar(1.0, phi);
            for (std::size_t iy = 0; iy < ny; ++iy) {
                const double arg = two_pi * double(k2) * g.y(iy);
                profile[std::size_t(k1) * ny + iy] += c * std::polar(1.0, arg);
            }
        }
    }

    std::vector<double> out(nx * ny, 0.0);
    for (long k1 = 0; k1 <= kmax; ++k1) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double arg = two_pi * double(k1) * g.x(ix);
            const std::complex<double> e = std::polar(1.0, arg);
            for (std::size_t iy = 0; iy < ny; ++iy) {
                const std::complex<double> z = profile[std::size_t(k1) * ny + iy] * e;
                out[iy * nx + ix] += z.real();
            }
        }
    }
    return out;
}

} // namespace detail

/// Synthetic symmetric tensor field with Holder regularity beta: each
/// component is a seeded random Fourier sum with spectral decay |k|^-(beta+1),
/// modes up to the grid Nyquist, scaled so the field's sup (spectral) norm
/// equals `amplitude`. Deterministic in all arguments.
inline SymTensorField synth_holder_tensor(double beta, std::uint64_t seed, double amplitude,
                                          const GridSpec& spec) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("synth_holder_tensor: beta in (0,1)");
    SymTensorField out(spec);
    if (amplitude == 0.0) return out;

    const std::uint64_t tags[3] = {11, 12, 22};
    for (std::size_t c = 0; c < 3; ++c) {
        const std::vector<double> comp = detail::fourier_component(spec, beta, seed, tags[c]);
        for (std::size_t n = 0; n < spec.nodes(); ++n) out.at(n, c) = comp[n];
    }
    const double sup = norm_sup(out);
    if (sup > 0.0) {
        const double s = amplitude / sup;
        for (double& v : out.values) v *= s;
    }
    return out;
}

/// Small smooth test field: trig polynomial with modes |k1|,|k2| <= 2 and
/// fast decay, normalized to the requested sup norm. Used by generators and
/// tests that need seeded C-infinity data.
inline ScalarField smooth_scalar(const GridSpec& spec, std::uint64_t seed, double amplitude,
                                 std::uint64_t tag = 0) {
    const double two_pi = 2.0 * std::numbers::pi;
    ScalarField out(spec);
    if (amplitude == 0.0) return out;
    for (long k1 = 0; k1 <= 2; ++k1)
        for (long k2 = -2; k2 <= 2; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            const double kk = std::hypot(double(k1), double(k2));
            const double amp = 1.0 / ((1.0 + kk * kk) * (1.0 + kk * kk));
            const double phi = detail::mode_phase(seed, 1000 + tag, k1, k2);
            for (std::size_t iy = 0; iy < spec.ny; ++iy)
                for (std::size_t ix = 0; ix < spec.nx; ++ix)
                    out.at(ix, iy, 0) +=
                        amp * std::cos(two_pi * (double(k1) * spec.x(ix) + double(k2) * spec.y(iy)) + phi);
        }
    const double sup = norm_sup(out);
    if (sup > 0.0)
        for (double& v : out.values) v *= amplitude / sup;
    return out;
}

inline PlanarMapField smooth_map(const GridSpec& spec, std::uint64_t seed, double amplitude,
                                 std::uint64_t tag = 0) {
    const ScalarField c0 = smooth_scalar(spec, seed, amplitude, 2 * tag + 40);
    const ScalarField c1 = smooth_scalar(spec, seed, amplitude, 2 * tag + 41);
    PlanarMapField out(spec);
    for (std::size_t n = 0; n < spec.nodes(); ++n) {
        out.at(n, 0) = c0.at(n, 0);
        out.at(n, 1) = c1.at(n, 0);
    }
    return out;
}

} // namespace vkci
