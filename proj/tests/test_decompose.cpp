#include <catch2/catch_amalgamated.hpp>

#include "vkci/decompose.hpp"
#include "vkci/norms.hpp"
#include "vkci/synth.hpp"

using namespace vkci;

namespace {

SymTensorField constant_tensor(const GridSpec& g, Sym2 m) {
    return make_sym_tensor(g, [m](double, double) { return m; });
}

std::array<double, 4> coeffs_at(const std::array<Primitive, 4>& prims, std::size_t node) {
    return {prims[0].coeff.at(node, 0), prims[1].coeff.at(node, 0), prims[2].coeff.at(node, 0),
            prims[3].coeff.at(node, 0)};
}

} // namespace

TEST_CASE("decompose on constant matrices") {
    const GridSpec g(9, 9);

    SECTION("identity -> (1, 1, 0, 0)") {
        const auto prims = decompose(constant_tensor(g, Sym2::identity(1.0)));
        const auto c = coeffs_at(prims, 0);
        CHECK(c[0] == Catch::Approx(1.0));
        CHECK(c[1] == Catch::Approx(1.0));
        CHECK(c[2] == 0.0);
        CHECK(c[3] == 0.0);
    }
    SECTION("positive off-diagonal -> (0.75, 0.75, 0.5, 0)") {
        const auto prims = decompose(constant_tensor(g, Sym2{1.0, 0.25, 1.0}));
        const auto c = coeffs_at(prims, 17);
        CHECK(c[0] == Catch::Approx(0.75));
        CHECK(c[1] == Catch::Approx(0.75));
        CHECK(c[2] == Catch::Approx(0.5));
        CHECK(c[3] == 0.0);
    }
    SECTION("negative off-diagonal -> (0.5, 1.5, 0, 1.0)") {
        const auto prims = decompose(constant_tensor(g, Sym2{1.0, -0.5, 2.0}));
        const auto c = coeffs_at(prims, 3);
        CHECK(c[0] == Catch::Approx(0.5));
        CHECK(c[1] == Catch::Approx(1.5));
        CHECK(c[2] == 0.0);
        CHECK(c[3] == Catch::Approx(1.0));
    }
}

TEST_CASE("cone admissibility is checked exactly") {
    const GridSpec g(9, 9);
    CHECK_THROWS_AS(decompose(constant_tensor(g, Sym2{1.0, 1.1, 2.0})), ConeViolationError);
    // |d12| = min(d11, d22) is on the cone boundary: coefficient hits zero
    const auto prims = decompose(constant_tensor(g, Sym2{1.0, 1.0, 2.0}));
    CHECK(prims[0].coeff.at(0, 0) == 0.0);

    // eigenvalue positivity is NOT enough:
    // diag-dominance fails though the matrix is PSD with margin
    const Sym2 bad{0.1, 0.3, 2.0};
    CHECK(bad.eig_min() > 0.0);
    CHECK_THROWS_AS(decompose(constant_tensor(g, bad)), ConeViolationError);
}

TEST_CASE("reconstruct is the exact inverse on admissible fields") {
    const GridSpec g(33, 33);

    SECTION("random admissible field round-trips to 1e-14") {
        // build an admissible field: diag parts >= |offdiag| by construction
        SymTensorField d(g);
        const SymTensorField raw = synth_holder_tensor(0.6, 5, 1.0, g);
        for (std::size_t n = 0; n < g.nodes(); ++n) {
            const double off = raw.at(n, 1);
            d.at(n, 0) = std::abs(off) + std::abs(raw.at(n, 0));
            d.at(n, 1) = off;
            d.at(n, 2) = std::abs(off) + std::abs(raw.at(n, 2));
        }
        const SymTensorField back = reconstruct(decompose(d));
        for (std::size_t i = 0; i < d.values.size(); ++i)
            CHECK(back.values[i] == Catch::Approx(d.values[i]).margin(1e-14));
    }

    SECTION("single primitive reconstructs a diagonal") {
        ScalarField c(g);
        for (double& v : c.values) v = 4.0;
        const Primitive p{primitive_directions()[0], c};
        const SymTensorField s = reconstruct(std::array<Primitive, 1>{p});
        for (std::size_t n = 0; n < g.nodes(); ++n) {
            CHECK(s.at(n, 0) == 4.0);
            CHECK(s.at(n, 1) == 0.0);
            CHECK(s.at(n, 2) == 0.0);
        }
    }

    SECTION("diagonal primitives with equal weight sum to the identity") {
        ScalarField c(g);
        for (double& v : c.values) v = 0.7;
        const std::array<Primitive, 2> ps = {Primitive{primitive_directions()[2], c},
                                             Primitive{primitive_directions()[3], c}};
        const SymTensorField s = reconstruct(ps);
        for (std::size_t n = 0; n < g.nodes(); ++n) {
            CHECK(s.at(n, 0) == Catch::Approx(0.7).margin(1e-15));
            CHECK(s.at(n, 1) == Catch::Approx(0.0).margin(1e-15));
            CHECK(s.at(n, 2) == Catch::Approx(0.7).margin(1e-15));
        }
    }
}

TEST_CASE("decompose is pointwise-local and nonnegative") {
    const GridSpec g(17, 17);
    SymTensorField d(g);
    std::uint64_t state = 7;
    for (std::size_t n = 0; n < g.nodes(); ++n) {
        const double off = (double(detail::splitmix64(state) >> 11) / double(1ull << 53) - 0.5);
        d.at(n, 0) = std::abs(off) + 0.1;
        d.at(n, 1) = off;
        d.at(n, 2) = std::abs(off) + 0.2;
    }
    const auto prims = decompose(d);
    for (const Primitive& p : prims)
        for (double v : p.coeff.values) CHECK(v >= 0.0);

    // locality: a node's coefficients depend only on that node's entries
    const std::size_t probe = g.node(5, 9);
    SymTensorField d2 = d;
    d2.at(g.node(11, 2), 1) = 0.0;  // poke a different node
    const auto prims2 = decompose(d2);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(prims2[i].coeff.at(probe, 0) == prims[i].coeff.at(probe, 0));
}
