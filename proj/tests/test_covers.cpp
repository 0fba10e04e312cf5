#include <catch_amalgamated.hpp>

#include "ramiflow/covers.hpp"

using namespace ramiflow;

namespace {

CoverSpec as_fixture(const CoeffModel& M, long b = 2) {
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-b)));
    return CoverSpec::artin_schreier(M, g);
}

CoverSpec kummer_sqrt(const CoeffModel& M) {
    ValuedSeries u(M);
    u.set_term(0, Coeff::pi_power(M, Rat(1)));
    u.set_term(1, Coeff::from_rational(M, 1));
    return CoverSpec::kummer(M, 2, u);
}

// brute-force oracle: over monomial candidates a = z_A^i T^k pi^q in W, the
// orbit valuations v(sigma a - a) are minimized by the engine's generator.
// The candidate orbit values are expanded binomially and evaluated exactly.
Z2Val candidate_orbit_value(long p, const Rat& lambda, long n0, long i, long k, const Rat& q) {
    // sigma_s(z_A^i T^k) - z_A^i T^k = sum_{r<i} C(i,r) z_A^r (s c)^{i-r} T^k (pi^q scaling);
    // the value does not depend on s in F_p^*
    std::optional<Z2Val> best;
    for (long r = i - 1; r >= 0; --r) {
        long c = 1;  // C(i, r) built multiplicatively, exact at each step
        for (long x = 0; x < i - r; ++x) c = c * (i - x) / (x + 1);
        if (c % p == 0) continue;
        Z2Val v{q + Rat(i - r) * lambda / p, Rat(r * n0, p) + Rat(k)};
        if (!best || v < *best) best = v;
    }
    return *best;
}

}  // namespace

TEST_CASE("fiber branches of the Artin-Schreier fixture") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_fixture(M);
    for (long num : {0L, 1L, 2L, 3L}) {
        Rat t(num, 2);  // t < b = 2
        auto fd = fiber_branches(cov, t);
        REQUIRE(fd.branch_count == 1);
        REQUIRE(fd.stab->size() == 3);
        REQUIRE(fd.wild);
        REQUIRE(fd.lambda_alpha == Rat(2) - t);
        for (int s = 1; s < 3; ++s)
            REQUIRE(fd.profile.i[s] == Z2Val{(Rat(2) - t) / 3, Rat(0)});
        REQUIRE((long)fd.branch_count * fd.stab->size() == cov.degree());
    }
    for (long num : {4L, 5L, 6L}) {
        Rat t(num, 2);  // t >= b
        auto fd = fiber_branches(cov, t);
        REQUIRE(fd.branch_count == 3);
        REQUIRE(fd.stab->size() == 1);
        REQUIRE_FALSE(fd.wild);
    }
}

TEST_CASE("generator oracle: engine values are the orbit minima", "[acceptance-support]") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_fixture(M);
    const long p = 3;
    for (long num : {0L, 1L, 2L, 3L, 7L}) {
        Rat t(num, 4);
        auto fd = fiber_branches(cov, t);
        REQUIRE(fd.wild);
        Rat lambda = fd.lambda_alpha;
        Z2Val engine = fd.profile.i[1];
        std::optional<Z2Val> best;
        // move lattice: monomials z_A^i T^k pi^q with value >= 0 (depth <= 4)
        for (long i = 1; i < p; ++i)
            for (long k = -2; k <= 2; ++k)
                for (long qn = -4; qn <= 4; ++qn) {
                    Rat q(qn, 4);
                    // candidate must lie in W: value >= 0
                    if (Z2Val{q, Rat(i * fd.n0, p) + Rat(k)} < Z2Val{0, 0}) continue;
                    Z2Val v = candidate_orbit_value(p, lambda, fd.n0, i, k, q);
                    if (!best || v < *best) best = v;
                }
        REQUIRE(*best == engine);
    }
}

TEST_CASE("kummer fibers") {
    auto M = CoeffModel::equal_char(3);
    auto kum = kummer_sqrt(M);
    for (long num : {0L, 1L}) {
        auto fd = fiber_branches(kum, Rat(num, 2));  // t < 1
        REQUIRE(fd.branch_count == 1);
        REQUIRE(fd.stab->size() == 2);
        REQUIRE(fd.profile.i[1] == Z2Val{Rat(0), Rat(1, 2)});  // = eps_L, tame
        REQUIRE(fd.profile.j(1) == Z2Val{Rat(0), Rat(0)});
    }
    auto split = fiber_branches(kum, Rat(3, 2));
    REQUIRE(split.branch_count == 2);
    REQUIRE(split.stab->size() == 1);

    // unit-u tame cover splits everywhere over the (possibly enlarged) field
    ValuedSeries u1(M);
    u1.set_term(0, Coeff::from_rational(M, 1));
    u1.set_term(1, Coeff::from_rational(M, 1));
    auto tame = CoverSpec::kummer(M, 2, u1);
    for (long num : {0L, 3L}) {
        auto fd = fiber_branches(tame, Rat(num, 2));
        REQUIRE(fd.branch_count == 2);
        REQUIRE(fd.stab->size() == 1);
    }
    // residue-field solvability oracles underneath the splitting
    auto F5 = Fq(5, 1);
    REQUIRE_FALSE(F5.nth_root(F5.from_int(2), 2).has_value());  // 2 is not a QR mod 5
    auto F25 = Fq(5, 2);
    REQUIRE(F25.nth_root(F25.embed_from(F5, F5.from_int(2)), 2).has_value());
    auto F3 = Fq(3, 1);
    REQUIRE_FALSE(F3.artin_schreier_root(F3.from_int(1)).has_value());  // trace 1 != 0
    auto F27 = Fq(3, 3);  // degree-p extension kills the trace obstruction
    REQUIRE(F27.artin_schreier_root(F27.embed_from(F3, F3.from_int(1))).has_value());
}

TEST_CASE("normalized generators") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_fixture(M);
    auto fd = fiber_branches(cov, Rat(1, 2));
    auto gd = normalized_generator(cov, fd);
    REQUIRE(gd.wild_scale == Rat(1, 2));  // (b - t)/p = (3/2)/3
    REQUIRE(gd.x == 1);
    // tame Kummer of a unit: the naive root is already normalized
    ValuedSeries u1(M);
    u1.set_term(0, Coeff::from_rational(M, 1));
    u1.set_term(1, Coeff::from_rational(M, 1));
    auto tame = CoverSpec::kummer(M, 2, u1);
    auto fdt = fiber_branches(tame, Rat(1, 2));
    REQUIRE(fdt.naive_monogenic);
}

TEST_CASE("discriminant pipelines") {
    auto M = CoeffModel::equal_char(3);
    // Kummer y^2 = pi + xi: naive PL = min(1, t), breakpoint 1, slopes [1, 0]
    auto kum = kummer_sqrt(M);
    auto rk = discriminant_fn_resultant(kum, Rat(0), Rat(3));
    REQUIRE(rk.fn.anchor_value() == 0);
    REQUIRE(rk.fn.breaks() == std::vector<Rat>{Rat(1)});
    REQUIRE(rk.fn.slopes() == std::vector<Rat>{Rat(1), Rat(0)});
    REQUIRE_FALSE(rk.monogenic);

    // Kummer of a unit: constant naive discriminant
    ValuedSeries u1(M);
    u1.set_term(0, Coeff::from_rational(M, 1));
    u1.set_term(1, Coeff::from_rational(M, 1));
    auto rt = discriminant_fn_resultant(CoverSpec::kummer(M, 2, u1), Rat(0), Rat(2));
    REQUIRE(rt.fn.breaks().empty());
    REQUIRE(rt.fn.slopes() == std::vector<Rat>{Rat(0)});

    // AS: unit naive discriminant, non-monogenic; normalized = (p-1)(b-t)
    auto cov = as_fixture(M);
    auto ra = discriminant_fn_resultant(cov, Rat(0), Rat(3));
    REQUIRE(ra.fn.slopes() == std::vector<Rat>{Rat(0)});
    REQUIRE_FALSE(ra.monogenic);
    for (long num : {1L, 3L}) {
        Rat t(num, 2);
        REQUIRE(normalized_disc_alpha(fiber_branches(cov, t)) == Rat(2) * (Rat(2) - t));
    }
    // cross-check against the resultant of the normalized model z^p - e z - g~
    {
        Rat t(1, 2);
        auto fd = fiber_branches(cov, t);
        Rat e_exp = fd.lambda_alpha * (3 - 1) / 3;
        PolyY P;
        P.coeffs.assign(4, ValuedSeries::zero(M));
        P.coeffs[3] = ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 0);
        P.coeffs[1] = ValuedSeries::monomial(M, -Coeff::pi_power(M, e_exp), 0);
        P.coeffs[0] = ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 1);  // -T up to unit
        auto disc = discriminant_in_y(P, M);
        REQUIRE(*disc.gauss_valuation_at(Rat(0)) == normalized_disc_alpha(fd));
    }
}

TEST_CASE("annulus closed form") {
    // the d = 3, h = pi xi^2 fixture in characteristic 3: 3 xi^2 vanishes,
    // f' = 2 pi xi^4, sigma = 4, nu = 2, del = 3 v(2 pi) + 2t = 3 + 2t
    auto M = CoeffModel::equal_char(3);
    ValuedSeries h(M);
    h.set_term(2, Coeff::pi_power(M, Rat(1)));
    auto ann = CoverSpec::annulus_map(M, 3, h, Rat(0), Rat(4));
    for (long k = 0; k <= 9; ++k) {
        Rat t(k, 3);
        auto ad = annulus_discriminant(ann, t);
        REQUIRE(ad.sigma == 4);
        REQUIRE(ad.nu == 2);
        REQUIRE(ad.del_alpha == Rat(3) + 2 * t);
    }
    // same h in characteristic 5: the xi^5 derivative term vanishes instead,
    // sigma = 2, nu = 0, del = 3 v(3) = 0
    auto M5 = CoeffModel::equal_char(5);
    ValuedSeries h5(M5);
    h5.set_term(2, Coeff::pi_power(M5, Rat(1)));
    auto ann5 = CoverSpec::annulus_map(M5, 3, h5, Rat(0), Rat(4));
    auto ad5 = annulus_discriminant(ann5, Rat(1));
    REQUIRE(ad5.sigma == 2);
    REQUIRE(ad5.nu == 0);
    REQUIRE(ad5.del_alpha == 0);
    // tame d prime to p, h = 0: del = d v(d) = 0
    auto tame = CoverSpec::annulus_map(M5, 3, ValuedSeries::zero(M5), Rat(0), Rat(2));
    REQUIRE(annulus_discriminant(tame, Rat(1)).del_alpha == 0);
    // mixed characteristic, d = p, h = 0: del = p v(p) = p
    auto MX = CoeffModel::mixed_char(5);
    auto wildann = CoverSpec::annulus_map(MX, 5, ValuedSeries::zero(MX), Rat(0), Rat(2));
    auto adx = annulus_discriminant(wildann, Rat(1, 2));
    REQUIRE(adx.del_alpha == 5);
    REQUIRE(adx.nu == 0);
}

TEST_CASE("annulus closed form agrees with the conductor pipeline on normal forms") {
    // the radius-t normalized models of the family covers are annulus maps;
    // the Lutkebohmert closed form on them must reproduce the normalized
    // discriminant computed from the branch i-values
    auto M = CoeffModel::equal_char(3);
    // Kummer y^2 = pi + xi at t < 1: z^2 = T + pi^{1-t}, i.e. T = z^2 - pi^{1-t},
    // an order-2 annulus map with h = -pi^{1-t} z^{-2}
    auto kum = kummer_sqrt(M);
    for (long num : {1L, 2L}) {
        Rat t(num, 4);
        ValuedSeries h(M);
        h.set_term(-2, -Coeff::pi_power(M, Rat(1) - t));
        auto ann = CoverSpec::annulus_map(M, 2, h, Rat(0), Rat(0));
        auto ad = annulus_discriminant(ann, Rat(0));
        REQUIRE(ad.del_alpha == normalized_disc_alpha(fiber_branches(kum, t)));
    }
    // AS fixture at t < b: z^3 - e z = g~ with e = pi^{lambda(p-1)/p}, so the
    // map is T = z^3 - e z, an order-3 annulus map with h = -e z^{-2}
    auto cov = as_fixture(M);
    for (long num : {1L, 3L}) {
        Rat t(num, 2);
        auto fd = fiber_branches(cov, t);
        ValuedSeries h(M);
        h.set_term(-2, -Coeff::pi_power(M, fd.lambda_alpha * 2 / 3));
        auto ann = CoverSpec::annulus_map(M, 3, h, Rat(0), Rat(0));
        auto ad = annulus_discriminant(ann, Rat(0));
        REQUIRE(ad.nu == -2);
        REQUIRE(ad.del_alpha == normalized_disc_alpha(fd));
    }
}

TEST_CASE("slope decomposition and local constancy") {
    auto M = CoeffModel::equal_char(3);
    auto cov = as_fixture(M);
    auto ivs = slope_decomposition(cov, Rat(0), Rat(3));
    REQUIRE(ivs.size() == 2);
    REQUIRE(ivs[0].hi == 2);
    REQUIRE(ivs[0].delta == 1);
    REQUIRE(ivs[0].nu == -2);  // sigma - d + delta = 0 - 3 + 1
    REQUIRE(ivs[1].delta == 3);
    REQUIRE(ivs[1].nu == 0);

    // locally constant in t: fibers at t +- 1/64 inside an interval agree
    auto a = fiber_branches(cov, Rat(1, 2) - Rat(1, 64));
    auto b = fiber_branches(cov, Rat(1, 2) + Rat(1, 64));
    REQUIRE(a.branch_count == b.branch_count);
    REQUIRE(a.stab->size() == b.stab->size());
    REQUIRE(a.n0 == b.n0);

    auto kivs = slope_decomposition(kummer_sqrt(M), Rat(0), Rat(3));
    REQUIRE(kivs.size() == 2);
    REQUIRE(kivs[0].hi == 1);
    REQUIRE(kivs[0].sigma == 1);  // tame branch of degree 2
    REQUIRE(kivs[0].nu == 0);
    REQUIRE(kivs[1].delta == 2);
}

TEST_CASE("precision is honored through the pipelines") {
    auto M = CoeffModel::equal_char(3);
    ValuedSeries g(M);
    g.set_term(1, Coeff::pi_power(M, Rat(-2)));
    g.truncate(6, Rat(-2));
    auto cov = CoverSpec::artin_schreier(M, g);
    auto exact_cov = as_fixture(M);
    for (long num : {1L, 3L, 5L}) {
        Rat t(num, 2);
        auto fd = fiber_branches(cov, t);
        auto fe = fiber_branches(exact_cov, t);
        REQUIRE(fd.branch_count == fe.branch_count);
        REQUIRE(fd.profile.i == fe.profile.i);
    }
    // a truncation too coarse to see the reduction level errors out
    ValuedSeries bad(M);
    bad.set_term(1, Coeff::pi_power(M, Rat(-2)));
    bad.truncate(2, Rat(-5));
    auto badcov = CoverSpec::artin_schreier(M, bad);
    REQUIRE_THROWS_AS(fiber_branches(badcov, Rat(1, 2)), Error);
}
