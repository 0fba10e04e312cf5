#include <catch_amalgamated.hpp>

#include <random>

#include "ramiflow/resultant.hpp"

using namespace ramiflow;

namespace {

ValuedSeries mono(const CoeffModel& M, long unit, const Rat& pi_exp, long xi_exp) {
    return ValuedSeries::monomial(M, Coeff::monomial(M, M.residue->from_int(unit), pi_exp),
                                  xi_exp);
}

}  // namespace

TEST_CASE("coefficient valuations") {
    auto M3 = CoeffModel::equal_char(3);
    auto c = Coeff::monomial(M3, M3.residue->from_int(2), Rat(5, 2));
    REQUIRE(coeff_valuation(c) == Rat(5, 2));

    auto M5 = CoeffModel::mixed_char(5);
    REQUIRE(coeff_valuation(Coeff::from_rational(M5, 50)) == 2);
    REQUIRE(coeff_valuation(Coeff::from_rational(M5, Rat(3, 5))) == -1);
    REQUIRE_THROWS_AS(Coeff::zero(M5).valuation(), Error);

    // additive under multiplication
    auto a = Coeff::monomial(M3, M3.residue->from_int(1), Rat(1, 3));
    auto b = Coeff::monomial(M3, M3.residue->from_int(2), Rat(7, 2));
    REQUIRE((a * b).valuation() == a.valuation() + b.valuation());
}

TEST_CASE("gauss valuations at a radius") {
    auto M = CoeffModel::equal_char(3);
    ValuedSeries f = mono(M, 1, Rat(1), 0) + mono(M, 1, Rat(0), 2);  // pi + xi^2
    REQUIRE(*f.gauss_valuation_at(Rat(0)) == 0);
    REQUIRE(*f.gauss_valuation_at(Rat(1)) == 1);
    ValuedSeries g = mono(M, 1, Rat(-2), 1);  // xi pi^{-2}
    REQUIRE(*g.gauss_valuation_at(Rat(1, 2)) == Rat(-3, 2));

    // z2 examples
    REQUIRE(mono(M, 1, Rat(1), 3).gauss_z2_valuation_at(Rat(2)) == Z2Val{Rat(7), Rat(3)});
    ValuedSeries h = mono(M, 1, Rat(0), 1) + mono(M, 1, Rat(1), 0);  // xi + pi
    REQUIRE(h.gauss_z2_valuation_at(Rat(0)) == Z2Val{Rat(0), Rat(1)});
    auto M5 = CoeffModel::equal_char(5);
    ValuedSeries k = mono(M5, 2, Rat(0), 3) + mono(M5, 2, Rat(1), 4);  // 2 xi^3 (1 + pi xi)
    REQUIRE(k.gauss_z2_valuation_at(Rat(1)) == Z2Val{Rat(3), Rat(3)});
}

TEST_CASE("gauss valuation additivity and ultrametric", "[property]") {
    auto M = CoeffModel::equal_char(3);
    std::mt19937 rng(7);
    auto rand_series = [&](bool nonzero) {
        ValuedSeries f(M);
        int terms = 1 + rng() % 4;
        for (int i = 0; i < terms; ++i) {
            long unit = 1 + rng() % 2;
            long pi_n = (long)(rng() % 9) - 4;
            long xi = rng() % 6;
            f = f + mono(M, unit, Rat(pi_n, 1 + (long)(rng() % 2)), xi);
        }
        if (nonzero && f.terms().empty()) f = mono(M, 1, Rat(0), 0);
        return f;
    };
    for (int trial = 0; trial < 60; ++trial) {
        ValuedSeries f = rand_series(true), g = rand_series(true);
        Rat t(rng() % 8, 1 + rng() % 5);
        auto vf = f.gauss_valuation_at(t), vg = g.gauss_valuation_at(t);
        if (!vf || !vg) continue;
        auto fg = f * g;
        REQUIRE(*fg.gauss_valuation_at(t) == *vf + *vg);
        // z2 additivity
        REQUIRE(fg.gauss_z2_valuation_at(t) ==
                f.gauss_z2_valuation_at(t) + g.gauss_z2_valuation_at(t));
        // ultrametric with equality when values differ
        auto sum = f + g;
        auto vs = sum.gauss_valuation_at(t);
        if (vs) {
            REQUIRE(*vs >= rat_min(*vf, *vg));
            if (*vf != *vg) REQUIRE(*vs == rat_min(*vf, *vg));
        }
    }
}

TEST_CASE("precision model") {
    auto M = CoeffModel::equal_char(3);
    ValuedSeries f = mono(M, 1, Rat(1), 0) + mono(M, 1, Rat(0), 2);
    f.truncate(5, Rat(0));
    REQUIRE(*f.gauss_valuation_at(Rat(1)) == 1);  // floor 0 + 5*1 = 5 > 1
    ValuedSeries g = mono(M, 1, Rat(3), 0);
    g.truncate(2, Rat(0));
    // floor at t=0 is 0 < 3: the tail could undercut
    REQUIRE_THROWS_AS(g.gauss_valuation_at(Rat(0)), Error);

    // re-running with higher precision never changes a non-error answer
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        ValuedSeries base(M);
        for (int i = 0; i < 4; ++i)
            base = base + mono(M, 1 + rng() % 2, Rat((long)(rng() % 7) - 2), rng() % 7);
        if (base.terms().empty()) continue;
        ValuedSeries lowp = base, highp = base;
        lowp.truncate(4, Rat(-1));
        highp.truncate(7, Rat(-1));
        Rat t(rng() % 6, 1 + rng() % 3);
        std::optional<Rat> vlow;
        try {
            vlow = lowp.gauss_valuation_at(t);
        } catch (const Error&) {
            continue;
        }
        REQUIRE(*highp.gauss_valuation_at(t) == *vlow);
    }
}

TEST_CASE("resultants of the standard shapes") {
    auto M = CoeffModel::equal_char(3);
    // P = y^2 - xi, disc = -4 xi
    PolyY P{{mono(M, -1, Rat(0), 1), ValuedSeries::zero(M), mono(M, 1, Rat(0), 0)}};
    auto disc = discriminant_in_y(P, M);
    REQUIRE(disc.terms().size() == 1);
    REQUIRE(disc.terms().at(1).leading_unit() == M.residue->from_int(-4));

    // P = y^3 - xi, res(P, 3y^2) = 27 xi^2 = 0 in char 3; try char 5
    auto M5 = CoeffModel::equal_char(5);
    PolyY Q{{ValuedSeries::monomial(M5, Coeff::from_rational(M5, -1), 1), ValuedSeries::zero(M5),
             ValuedSeries::zero(M5), ValuedSeries::monomial(M5, Coeff::from_rational(M5, 1), 0)}};
    auto disc5 = discriminant_in_y(Q, M5);
    REQUIRE(disc5.terms().size() == 1);
    REQUIRE(disc5.terms().at(2).leading_unit() == M5.residue->from_int(27));

    // Artin-Schreier: y^p - y - g has unit discriminant
    ValuedSeries g = mono(M, 1, Rat(-2), 1);
    PolyY AS{{-g, -ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 0),
              ValuedSeries::zero(M), ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 0)}};
    auto discAS = discriminant_in_y(AS, M);
    REQUIRE(discAS.terms().size() == 1);
    REQUIRE(discAS.terms().begin()->first == 0);
    REQUIRE(discAS.terms().begin()->second.valuation() == 0);
}

TEST_CASE("resultant product rule", "[property]") {
    // res(P1 P2, (P1 P2)') = res(P1,P1') res(P2,P2') res(P1,P2)^2 up to sign
    auto M = CoeffModel::equal_char(5);
    std::mt19937 rng(23);
    auto rand_poly = [&](long deg) {
        PolyY P;
        for (long k = 0; k < deg; ++k)
            P.coeffs.push_back(
                mono(M, 1 + rng() % 4, Rat((long)(rng() % 3)), rng() % 3));
        P.coeffs.push_back(ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 0));
        return P;
    };
    auto mul_poly = [&](const PolyY& A, const PolyY& B) {
        PolyY C;
        C.coeffs.assign(A.coeffs.size() + B.coeffs.size() - 1, ValuedSeries::zero(M));
        for (size_t i = 0; i < A.coeffs.size(); ++i)
            for (size_t j = 0; j < B.coeffs.size(); ++j)
                C.coeffs[i + j] = C.coeffs[i + j] + A.coeffs[i] * B.coeffs[j];
        return C;
    };
    for (int trial = 0; trial < 8; ++trial) {
        PolyY P1 = rand_poly(2), P2 = rand_poly(2);
        auto lhs = discriminant_in_y(mul_poly(P1, P2), M);
        auto r12 = resultant_in_y(P1, P2, M);
        auto rhs = discriminant_in_y(P1, M) * discriminant_in_y(P2, M) * r12 * r12;
        bool equal = lhs == rhs;
        bool equal_neg = lhs == -rhs;
        REQUIRE((equal || equal_neg));
    }
}
