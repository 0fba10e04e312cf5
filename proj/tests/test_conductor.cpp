#include <catch_amalgamated.hpp>

#include "ramiflow/conductor.hpp"

using namespace ramiflow;

namespace {

CoverSpec as_cover(const CoeffModel& M) {
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    return CoverSpec::artin_schreier(M, g);
}

CoverSpec composite_cover(const CoeffModel& M) {
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    ValuedSeries u(M);
    u.set_term(0, Coeff::pi_power(M, Rat(1)));
    u.set_term(1, Coeff::from_rational(M, 1));
    return CoverSpec::composite(M, g, 2, u);
}

}  // namespace

TEST_CASE("trivial sheaf has vanishing conductors") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_cover(M);
    auto T = CharacterTable::build(cov.group());
    auto rep = sw_as_function(cov, T.trivial(), Rat(0), Rat(3), Rat(1, 2));
    for (const auto& s : rep.samples) {
        REQUIRE(s.sw_as == 0);
        REQUIRE(s.phi_s == 0);
    }
}

TEST_CASE("AS fixture: sw_AS = max(0, 2 - t) at grid step 1/8", "[acceptance-support]") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_cover(M);
    auto T = CharacterTable::build(cov.group());
    auto rep = sw_as_function(cov, T.irreducibles[1], Rat(0), Rat(3), Rat(1, 8));
    for (const auto& s : rep.samples) {
        REQUIRE(s.sw_as == rat_max(Rat(0), Rat(2) - s.t));
        REQUIRE(s.phi_s == (s.t < 2 ? Rat(-1) : Rat(0)));
        REQUIRE(s.sw_as_direct == s.sw_as);  // slope-decomposition route
    }
    auto v = verify_main_theorem(rep);
    REQUIRE(v.all());
    REQUIRE(rep.sw_as_fn.breaks() == std::vector<Rat>{Rat(2)});
    REQUIRE(rep.sw_as_fn.slopes() == std::vector<Rat>{Rat(-1), Rat(0)});
    REQUIRE(rep.monotone_nonincreasing);
}

TEST_CASE("tau independence and rationality") {
    auto M = CoeffModel::equal_char(3);
    // split fiber: conductor functions recomputed through a conjugated branch
    auto fd = fiber_branches(as_cover(M), Rat(5, 2));
    REQUIRE(fd.branch_count == 3);
    REQUIRE_NOTHROW(conductor_class_functions(fd));
}

TEST_CASE("kummer cross-pipeline values") {
    auto M = CoeffModel::equal_char(3);
    ValuedSeries u(M);
    u.set_term(0, Coeff::pi_power(M, Rat(1)));
    u.set_term(1, Coeff::from_rational(M, 1));
    auto kum = CoverSpec::kummer(M, 2, u);
    ValuedSeries disc = naive_discriminant_series(kum);
    for (long k = 0; k <= 10; ++k) {
        Rat t(k, 4);
        auto dl = verify_discriminant_link_at(kum, QuotientChoice::Trivial, t, Rat(4));
        // order lane: <a~naive, r_G> = v_t(disc_y P) = min(1, t)
        REQUIRE(dl.order_lane_ok);
        REQUIRE(dl.resultant_disc == rat_min(Rat(1), t));
        // paper lane: the normalized discriminant pairs to 0 on this tame cover
        REQUIRE(dl.paper_lane_ok);
        REQUIRE(dl.pairing_alpha == 0);
        REQUIRE(dl.derivative_lane_ok);
    }
}

TEST_CASE("main theorem on the composite tower") {
    auto M = CoeffModel::equal_char(3);
    auto comp = composite_cover(M);
    auto T = CharacterTable::build(comp.group());
    int tested = 0;
    for (const auto& chi : T.irreducibles) {
        auto rep = sw_as_function(comp, chi, Rat(0), Rat(3), Rat(1, 4));
        auto v = verify_main_theorem(rep);
        INFO("character of dim " << rat_str(chi.dim()));
        REQUIRE(v.all());
        ++tested;
    }
    REQUIRE(tested == 6);
}

TEST_CASE("discriminant link on factor quotients") {
    auto M = CoeffModel::equal_char(3);
    auto comp = composite_cover(M);
    for (long num : {1L, 3L, 9L}) {
        Rat t(num, 4);
        for (auto q : {QuotientChoice::Trivial, QuotientChoice::Full, QuotientChoice::WildFactor,
                       QuotientChoice::TameFactor}) {
            auto dl = verify_discriminant_link_at(comp, q, t, Rat(4));
            INFO("t = " << rat_str(t) << " choice " << (int)q);
            REQUIRE(dl.order_lane_ok);
            REQUIRE(dl.paper_lane_ok);
            REQUIRE(dl.derivative_lane_ok);
        }
    }
}

TEST_CASE("change of cover compatibility") {
    auto M = CoeffModel::equal_char(3);
    auto comp = composite_cover(M);
    for (long num : {1L, 2L, 5L}) {
        Rat t(num, 4);
        REQUIRE(change_of_cover_holds(comp, QuotientChoice::WildFactor, t));
        REQUIRE(change_of_cover_holds(comp, QuotientChoice::TameFactor, t));
    }
}

TEST_CASE("grid refinement and precision doubling change nothing",
          "[acceptance-support]") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_cover(M);
    auto T = CharacterTable::build(cov.group());
    auto coarse = sw_as_function(cov, T.irreducibles[1], Rat(0), Rat(3), Rat(1, 4));
    auto fine = sw_as_function(cov, T.irreducibles[1], Rat(0), Rat(3), Rat(1, 8));
    for (const auto& s : coarse.samples) REQUIRE(fine.sw_as_fn.eval(s.t) == s.sw_as);
    REQUIRE(coarse.sw_as_fn == fine.sw_as_fn);

    // doubling the xi-precision of a truncated input leaves the report fixed
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    ValuedSeries g1 = g, g2 = g;
    g1.truncate(6, Rat(0));
    g2.truncate(12, Rat(0));
    auto r1 = sw_as_function(CoverSpec::artin_schreier(M, g1), T.irreducibles[1], Rat(0), Rat(3),
                             Rat(1, 4));
    auto r2 = sw_as_function(CoverSpec::artin_schreier(M, g2), T.irreducibles[1], Rat(0), Rat(3),
                             Rat(1, 4));
    REQUIRE(r1.sw_as_fn == r2.sw_as_fn);
    for (size_t k = 0; k < r1.samples.size(); ++k) {
        REQUIRE(r1.samples[k].sw_as == r2.samples[k].sw_as);
        REQUIRE(r1.samples[k].phi_s == r2.samples[k].phi_s);
    }
}
