#include <catch_amalgamated.hpp>

#include "ramiflow/cycles.hpp"

using namespace ramiflow;

namespace {

struct ASContext {
    CoverSpec cover;
    FiberData fd;
    CharacterTable table;
};

ASContext as_context(const Rat& t) {
    auto M = CoeffModel::equal_char(3);
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    auto cover = CoverSpec::artin_schreier(M, g);
    auto fd = fiber_branches(cover, t);
    auto table = CharacterTable::build(fd.stab);
    return ASContext{cover, fd, table};
}

}  // namespace

TEST_CASE("the logarithmic filtration and slope decompositions") {
    auto ctx = as_context(Rat(1, 2));
    auto filt = as_filtration(ctx.fd.profile);
    // single positive AS break at b - t
    for (int s = 1; s < 3; ++s) REQUIRE(filt.r[s] == Rat(3, 2));
    // trivial module
    auto triv = slope_decompose(ctx.table.trivial(), filt, 2, 3);
    REQUIRE(triv.parts == std::vector<std::pair<Rat, Rat>>{{Rat(0), Rat(1)}});
    REQUIRE(sw_as(triv) == 0);
    // rank one at the break
    auto one = slope_decompose(ctx.table.irreducibles[1], filt, 2, 3);
    REQUIRE(one.parts == std::vector<std::pair<Rat, Rat>>{{Rat(3, 2), Rat(1)}});
    REQUIRE(sw_as(one) == Rat(3, 2));
    // regular representation: [(0, 1), (r, p-1)]
    auto reg = cf_add(cf_add(ctx.table.irreducibles[0], ctx.table.irreducibles[1]),
                      ctx.table.irreducibles[2]);
    auto rd = slope_decompose(reg, filt, 2, 3);
    REQUIRE(rd.parts ==
            std::vector<std::pair<Rat, Rat>>{{Rat(0), Rat(1)}, {Rat(3, 2), Rat(2)}});
    REQUIRE(sw_as(rd) == 3);
    REQUIRE_THROWS_AS(slope_decompose(reg, filt, 3, 3), Error);  // ell = p rejected

    // tame profile: filtration jumps only at 0
    auto M = CoeffModel::equal_char(3);
    ValuedSeries u1(M);
    u1.set_term(0, Coeff::pi_power(M, Rat(1)));
    u1.set_term(1, Coeff::from_rational(M, 1));
    auto tame_fd = fiber_branches(CoverSpec::kummer(M, 2, u1), Rat(1, 2));
    auto tf = as_filtration(tame_fd.profile);
    for (int s = 1; s < tame_fd.stab->size(); ++s) REQUIRE(tf.r[s] == 0);
}

TEST_CASE("s-values in coordinates") {
    auto ctx = as_context(Rat(1, 2));
    auto s = s_values(ctx.fd);
    REQUIRE(s.Gp->size() == 3);
    for (int e = 1; e < 3; ++e) {
        REQUIRE(s.diff_pi_exp[e] == Rat(1, 2));  // (b - t)/p
        REQUIRE(s.diff_unit_ord[e] == 0);
    }
    // s(sigma) = s(sigma^{-1}) through i(sigma) = i(sigma^{-1}) and the units
    REQUIRE(s.diff_unit[1] == ctx.fd.field.residue->from_int(-1));
    REQUIRE(s.diff_unit[2] == ctx.fd.field.residue->from_int(-2));
    // tame branches are not of wild type (II)
    auto M = CoeffModel::equal_char(3);
    ValuedSeries u1(M);
    u1.set_term(0, Coeff::pi_power(M, Rat(1)));
    u1.set_term(1, Coeff::from_rational(M, 1));
    auto tame_fd = fiber_branches(CoverSpec::kummer(M, 2, u1), Rat(1, 2));
    REQUIRE_THROWS_AS(s_values(tame_fd), Error);
}

TEST_CASE("kato conductors with differential values") {
    auto ctx = as_context(Rat(1, 2));
    // trivial character: the zero element
    auto dc0 = sw_zeta(ctx.table.trivial(), ctx.fd);
    REQUIRE(dc0.is_zero());
    // rank 1: sw_zeta = -[d a-bar] + (b - t) [pi], trivial unit
    auto dc = sw_zeta(ctx.table.irreducibles[1], ctx.fd);
    auto k = kcc(dc, ctx.fd);
    REQUIRE(k.m == 1);
    REQUIRE(k.c == Rat(3, 2));
    REQUIRE(k.ord_kcc == 0);
    REQUIRE(k.delta_leading_known);
    // zeta-change identity for every r in F_p^*
    for (long r = 1; r < 3; ++r) REQUIRE(zeta_change_holds(ctx.table.irreducibles[1], ctx.fd, r));
    // generator independence at leading order: h' = w + w^2 gives the same
    // orbit leading data (sigma(h') - h' = (sigma w - w)(1 + (sigma w + w)))
    // so s-values agree; exercised through the two zeta powers above and the
    // pi/unit coordinates checked in "s-values in coordinates".
}

TEST_CASE("comparison identities on the AS fixture", "[acceptance-support]") {
    for (long num : {1L, 2L, 3L}) {
        auto ctx = as_context(Rat(num, 2));
        for (const auto& chi : ctx.table.irreducibles) {
            auto rep = compare_identities(chi, ctx.fd, 2);
            REQUIRE(rep.alpha_identity);
            REQUIRE(rep.beta_identity);
            REQUIRE(rep.skl_integral);
        }
        // regular representation too
        auto reg = cf_add(cf_add(ctx.table.irreducibles[0], ctx.table.irreducibles[1]),
                          ctx.table.irreducibles[2]);
        auto rep = compare_identities(reg, ctx.fd, 2);
        REQUIRE(rep.alpha_identity);
        REQUIRE(rep.beta_identity);
    }
}

TEST_CASE("comparison identities on the composite fixture") {
    auto M = CoeffModel::equal_char(3);
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    ValuedSeries u(M);
    u.set_term(0, Coeff::pi_power(M, Rat(1)));
    u.set_term(1, Coeff::from_rational(M, 1));
    auto comp = CoverSpec::composite(M, g, 2, u);
    for (long num : {1L, 3L}) {
        auto fd = fiber_branches(comp, Rat(num, 4));
        auto T = CharacterTable::build(fd.stab);
        for (const auto& chi : T.irreducibles) {
            auto rep = compare_identities(chi, fd, 2);
            INFO("t = " << num << "/4");
            REQUIRE(rep.alpha_identity);
            REQUIRE(rep.beta_identity);
            REQUIRE(rep.skl_integral);
        }
    }
}

TEST_CASE("cartan lift independence") {
    // perturbing a characteristic-zero lift by a kernel element of the
    // Cartan map changes no conductor pairing (ell = 2 divides |stab| via
    // the tame factor of the composite)
    auto M = CoeffModel::equal_char(3);
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    ValuedSeries u(M);
    u.set_term(0, Coeff::pi_power(M, Rat(1)));
    u.set_term(1, Coeff::from_rational(M, 1));
    auto comp = CoverSpec::composite(M, g, 2, u);
    auto fd = fiber_branches(comp, Rat(1, 2));
    auto T = CharacterTable::build(fd.stab);
    // the C2-factor characters: trivial minus sign vanishes on 2-regular
    // classes, i.e. lies in the kernel of d_G for ell = 2
    ClassFunction kernel = T.trivial();
    bool found = false;
    for (const auto& c : T.irreducibles) {
        if (c.dim() != 1) continue;
        bool wild_triv = true, tame_sign = false;
        auto wp = fd.profile.wild_subgroup();
        for (int w : wp)
            if (c.values[w] != c.values[0]) wild_triv = false;
        for (int s = 0; s < fd.stab->size(); ++s) {
            auto [a, cc] = fd.stab->product_decode(s);
            if (cc != 0 && a == 0 && !T.F->is_rational(c.values[s])) tame_sign = false;
        }
        if (wild_triv && !(c.values == T.trivial().values)) {
            kernel = cf_sub(T.trivial(), c);
            found = true;
            break;
        }
        (void)tame_sign;
    }
    REQUIRE(found);
    auto d = artin_swan(fd.profile);
    auto chi = T.irreducibles[2];
    auto perturbed = cf_add(chi, kernel);
    REQUIRE(pair_rational(d.a_alpha, chi) == pair_rational(d.a_alpha, perturbed));
    REQUIRE(pair_rational(d.sw_beta, chi) == pair_rational(d.sw_beta, perturbed));
}
