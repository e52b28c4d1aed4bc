#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "vkci/grid.hpp"

namespace vkci {

namespace detail {

inline double magnitude(const ScalarField& f, std::size_t n) { return std::abs(f.at(n, 0)); }
inline double magnitude(const PlanarMapField& f, std::size_t n) {
    return std::hypot(f.at(n, 0), f.at(n, 1));
}
inline double magnitude(const SymTensorField& f, std::size_t n) { return f.sym(n).spectral(); }
inline double magnitude(const Tensor2Field& f, std::size_t n) { return f.mat(n).spectral(); }
inline double magnitude(const ImmersionField& f, std::size_t n) {
    return std::sqrt(f.at(n, 0) * f.at(n, 0) + f.at(n, 1) * f.at(n, 1) + f.at(n, 2) * f.at(n, 2));
}

// Per-kind difference magnitude between two nodes of the same field.
inline double diff_magnitude(const ScalarField& f, std::size_t a, std::size_t b) {
    return std::abs(f.at(a, 0) - f.at(b, 0));
}
inline double diff_magnitude(const PlanarMapField& f, std::size_t a, std::size_t b) {
    return std::hypot(f.at(a, 0) - f.at(b, 0), f.at(a, 1) - f.at(b, 1));
}
inline double diff_magnitude(const SymTensorField& f, std::size_t a, std::size_t b) {
    return (f.sym(a) - f.sym(b)).spectral();
}
inline double diff_magnitude(const Tensor2Field& f, std::size_t a, std::size_t b) {
    return (f.mat(a) - f.mat(b)).spectral();
}
inline double diff_magnitude(const ImmersionField& f, std::size_t a, std::size_t b) {
    const double d0 = f.at(a, 0) - f.at(b, 0);
    const double d1 = f.at(a, 1) - f.at(b, 1);
    const double d2 = f.at(a, 2) - f.at(b, 2);
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

// splitmix64: deterministic, platform-independent stream for sampling.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Sup norm: max over nodes of the pointwise magnitude (spectral norm for
/// tensors, Euclidean for vectors).
template <typename FieldT>
double norm_sup(const FieldT& f) {
    double m = 0.0;
    for (std::size_t n = 0; n < f.spec.nodes(); ++n)
        m = std::max(m, detail::magnitude(f, n));
    return m;
}

/// L^p norm with trapezoidal quadrature weights (1/2 on edges, 1/4 on
/// corners). Reduction order is fixed row-major so results are bit-stable.
template <typename FieldT>
double norm_lp(const FieldT& f, double p) {
    if (!(p >= 1.0)) throw ConfigError("norm_lp requires p >= 1");
    const GridSpec& g = f.spec;
    const double cell = g.hx() * g.hy();
    double acc = 0.0;
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        const double wy = (iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0;
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
            const double m = detail::magnitude(f, g.node(ix, iy));
            acc += wx * wy * cell * std::pow(m, p);
        }
    }
    return std::pow(acc, 1.0 / p);
}

/// Holder seminorm estimate: max difference quotient |f(x)-f(y)| / |x-y|^beta
/// over a deterministic sample. Each of `samples` seeded base points is paired
/// with the dyadic offsets (2^j h, 0), (0, 2^j h), (2^j h, 2^j h) that stay in
/// the grid. Exhaustive pairing would be O(N^2); the sample is enough for the
/// bookkeeping this feeds.
template <typename FieldT>
double holder_seminorm(const FieldT& f, double beta, std::size_t samples = 2048,
                       std::uint64_t seed = 0x00c0ffee) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("holder_seminorm requires beta in (0,1)");
    const GridSpec& g = f.spec;
    std::uint64_t state = seed;
    double best = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t ix = std::size_t(detail::splitmix64(state) % g.nx);
        const std::size_t iy = std::size_t(detail::splitmix64(state) % g.ny);
        const std::size_t base = g.node(ix, iy);
        for (std::size_t d = 1; d < std::max(g.nx, g.ny); d *= 2) {
            const bool okx = ix + d < g.nx;
            const bool oky = iy + d < g.ny;
            if (okx) {
                const double r = double(d) * g.hx();
                best = std::max(best, detail::diff_magnitude(f, g.node(ix + d, iy), base) /
                                          std::pow(r, beta));
            }
            if (oky) {
                const double r = double(d) * g.hy();
                best = std::max(best, detail::diff_magnitude(f, g.node(ix, iy + d), base) /
                                          std::pow(r, beta));
            }
            if (okx && oky) {
                const double r = std::hypot(double(d) * g.hx(), double(d) * g.hy());
                best = std::max(best, detail::diff_magnitude(f, g.node(ix + d, iy + d), base) /
                                          std::pow(r, beta));
            }
        }
    }
    return best;
}

} // namespace vkci
