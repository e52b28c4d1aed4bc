#include <catch2/catch_amalgamated.hpp>

#include "vkci/grid.hpp"
#include "vkci/mollify.hpp"
#include "vkci/norms.hpp"
#include "vkci/synth.hpp"

using namespace vkci;

TEST_CASE("sup norm basics") {
    const GridSpec g(17, 17);
    const ScalarField c = make_scalar(g, [](double, double) { return -3.0; });
    CHECK(norm_sup(c) == 3.0);
    CHECK(holder_seminorm(c, 0.5) == 0.0);

    SECTION("absolute homogeneity and subadditivity") {
        const ScalarField f = smooth_scalar(g, 3, 1.0);
        const ScalarField h = smooth_scalar(g, 4, 0.7);
        ScalarField sf = f;
        for (double& v : sf.values) v *= -2.5;
        CHECK(norm_sup(sf) == Catch::Approx(2.5 * norm_sup(f)).epsilon(1e-14));
        CHECK(norm_sup(axpy(1.0, f, h)) <= norm_sup(f) + norm_sup(h) + 1e-14);
    }

    SECTION("spectral norm for tensors") {
        const SymTensorField t =
            make_sym_tensor(g, [](double, double) { return Sym2{1.0, 0.25, 1.0}; });
        CHECK(norm_sup(t) == Catch::Approx(1.25));  // eigenvalues 1 +- 0.25
    }
}

TEST_CASE("Lp norm with trapezoidal weights") {
    const GridSpec g(257, 257);
    SECTION("unit constant has unit L2 norm") {
        const ScalarField one = make_scalar(g, [](double, double) { return 1.0; });
        CHECK(norm_lp(one, 2.0) == Catch::Approx(1.0).epsilon(1e-14));
        CHECK(norm_lp(one, 5.0) == Catch::Approx(1.0).epsilon(1e-13));
    }
    SECTION("f = x has L2 norm 1/sqrt(3) up to quadrature error") {
        const ScalarField f = make_scalar(g, [](double x, double) { return x; });
        CHECK(norm_lp(f, 2.0) == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-5));
    }
    CHECK_THROWS_AS(norm_lp(ScalarField(g), 0.5), ConfigError);
}

TEST_CASE("Holder seminorm estimator") {
    CHECK_THROWS_AS(holder_seminorm(ScalarField(GridSpec(9, 9)), 1.5), ConfigError);

    SECTION("sqrt-distance cusp: analytic seminorm 1, estimate in [0.8, 1]") {
        const GridSpec g(129, 129);
        const ScalarField f = make_scalar(g, [](double x, double y) {
            return std::sqrt(std::hypot(x - 0.5, y - 0.5));
        });
        const double est = holder_seminorm(f, 0.5);
        CHECK(est >= 0.8);
        CHECK(est <= 1.0 + 1e-12);
    }

    SECTION("lipschitz field measured at weaker exponent stays finite") {
        const GridSpec g(65, 65);
        const ScalarField f = make_scalar(g, [](double x, double y) { return x + 2.0 * y; });
        // |f(x)-f(y)| <= sqrt(5) |x-y|, so the 0.5-quotient peaks at the
        // largest sampled separation sqrt(2)
        CHECK(holder_seminorm(f, 0.5) <= std::sqrt(5.0) * std::pow(2.0, 0.25) + 1e-12);
    }

    SECTION("deterministic: same field, same estimate") {
        const GridSpec g(65, 65);
        const ScalarField f = smooth_scalar(g, 11, 1.0);
        CHECK(holder_seminorm(f, 0.7) == holder_seminorm(f, 0.7));
    }
}

TEST_CASE("mollify") {
    const GridSpec g(65, 65);
    const double h = g.h();

    CHECK_THROWS_AS(mollify(ScalarField(g), 1.5 * h), ConfigError);

    SECTION("constants are reproduced exactly") {
        const ScalarField c = make_scalar(g, [](double, double) { return 2.5; });
        const ScalarField m = mollify(c, 4.0 * h);
        for (double v : m.values) CHECK(v == Catch::Approx(2.5).margin(1e-13));
    }

    SECTION("linear fields are unchanged away from the boundary band") {
        const double len = 3.0 * h;
        const ScalarField f = make_scalar(g, [](double x, double y) { return x - 0.5 * y; });
        const ScalarField m = mollify(f, len);
        const double band = 4.0 * len;
        for (std::size_t iy = 0; iy < g.ny; ++iy)
            for (std::size_t ix = 0; ix < g.nx; ++ix) {
                const double x = g.x(ix), y = g.y(iy);
                if (x < band || x > 1.0 - band || y < band || y > 1.0 - band) continue;
                CHECK(m.at(ix, iy, 0) == Catch::Approx(f.at(ix, iy, 0)).margin(1e-13));
            }
    }

    SECTION("sup norm never increases; strictly decreases on noise") {
        const GridSpec gn(129, 129);
        ScalarField noise(gn);
        std::uint64_t state = 99;
        for (double& v : noise.values)
            v = double(detail::splitmix64(state) >> 11) / double(1ull << 53) - 0.5;
        const ScalarField m = mollify(noise, 8.0 * gn.h());
        CHECK(norm_sup(m) < norm_sup(noise));
    }

    SECTION("commutes with linear combinations") {
        const ScalarField f = smooth_scalar(g, 5, 1.0);
        const ScalarField p = smooth_scalar(g, 6, 0.4);
        const double len = 4.0 * h;
        const ScalarField lhs = mollify(axpy(2.0, f, p), len);
        const ScalarField rhs = axpy(2.0, mollify(f, len), mollify(p, len));
        for (std::size_t i = 0; i < lhs.values.size(); ++i)
            CHECK(lhs.values[i] == Catch::Approx(rhs.values[i]).margin(1e-13));
    }
}
