#include <catch_amalgamated.hpp>

#include <random>

#include "ramiflow/filtration.hpp"

using namespace ramiflow;

namespace {

// random valid profile: levels assigned along a chain of normal subgroups
FiltrationProfile random_profile(std::shared_ptr<const FiniteGroup> G, std::mt19937& rng) {
    auto normals = G->normal_subgroups();
    // random descending chain starting at G
    std::vector<std::vector<int>> chain;
    std::vector<int> cur(G->size());
    for (int g = 0; g < G->size(); ++g) cur[g] = g;
    chain.push_back(cur);
    while (cur.size() > 1) {
        std::vector<std::vector<int>> options;
        for (const auto& N : normals) {
            if (N.size() >= cur.size()) continue;
            std::set<int> cs(cur.begin(), cur.end());
            bool inside = true;
            for (int x : N)
                if (!cs.count(x)) inside = false;
            if (inside) options.push_back(N);
        }
        if (options.empty()) break;
        cur = options[rng() % options.size()];
        chain.push_back(cur);
    }
    FiltrationProfile p;
    p.G = G;
    p.j.assign(G->size(), Rat(0));
    p.epsilon_L = Rat(1, G->size());
    Rat level = 0;
    std::set<int> deeper(chain.back().begin(), chain.back().end());
    // assign increasing levels from the shallowest difference inward
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        std::set<int> next(chain[k + 1].begin(), chain[k + 1].end());
        level += Rat(1 + (long)(rng() % 5), 1 + (long)(rng() % 3));
        for (int g : chain[k])
            if (g != 0 && !next.count(g) && p.j[g] == 0) p.j[g] = level;
    }
    level += Rat(1 + (long)(rng() % 4));
    for (int g : chain.back())
        if (g != 0) p.j[g] = level;
    if (chain.size() == 1)
        for (int g = 1; g < G->size(); ++g) p.j[g] = level;
    p.validate();
    return p;
}

}  // namespace

TEST_CASE("herbrand functions") {
    auto C1 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(1));
    FiltrationProfile trivial{C1, {Rat(0)}, Rat(1)};
    auto [phi0, psi0] = phi_psi(trivial);
    REQUIRE(phi0.eval(Rat(7, 3)) == Rat(7, 3));  // identity on t >= 0

    auto C2 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
    FiltrationProfile p2{C2, {Rat(0), Rat(1)}, Rat(1, 2)};
    auto [phi, psi] = phi_psi(p2);
    REQUIRE(phi.eval(Rat(1, 2)) == 1);
    REQUIRE(phi.eval(Rat(1)) == 2);
    REQUIRE(phi.eval(Rat(3)) == 4);  // 2 + (t - 1) after the break

    std::mt19937 rng(3);
    for (int k = 0; k < 20; ++k) {
        Rat t(rng() % 40, 1 + rng() % 7);
        REQUIRE(psi.eval(phi.eval(t)) == t);
    }
    // phi increasing with weakly decreasing slopes, phi(0) = 0
    REQUIRE(phi.eval(Rat(0)) == 0);
    for (size_t i = 0; i + 1 < phi.slopes().size(); ++i)
        REQUIRE(phi.slopes()[i] >= phi.slopes()[i + 1]);
}

TEST_CASE("swan conductors: pairing equals the filtration integral") {
    // C3, j = 2: both routes give 6 (Kato normalization integrates |G_t|)
    auto C3 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(3));
    auto T3 = CharacterTable::build(C3);
    FiltrationProfile p{C3, {Rat(0), Rat(2), Rat(2)}, Rat(1, 3)};
    REQUIRE(swan_conductor(p, T3.irreducibles[1]) == 6);
    REQUIRE(swan_conductor_integral(p, T3.irreducibles[1]) == 6);
    REQUIRE(swan_conductor(p, T3.trivial()) == 0);

    // C2, j = 3, regular character: 6 by both routes
    auto C2 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
    auto T2 = CharacterTable::build(C2);
    FiltrationProfile p2{C2, {Rat(0), Rat(3)}, Rat(1, 2)};
    auto reg = cf_add(T2.irreducibles[0], T2.irreducibles[1]);
    REQUIRE(swan_conductor(p2, reg) == 6);
    REQUIRE(swan_conductor_integral(p2, reg) == 6);

    // additivity and the vanishing criterion
    auto chi_sum = cf_add(T3.irreducibles[1], T3.irreducibles[2]);
    REQUIRE(swan_conductor(p, chi_sum) ==
            swan_conductor(p, T3.irreducibles[1]) + swan_conductor(p, T3.irreducibles[2]));
    FiltrationProfile tame{C3, {Rat(0), Rat(0), Rat(0)}, Rat(1, 3)};
    REQUIRE(swan_conductor(tame, T3.irreducibles[1]) == 0);

    // vanishing criterion: sw = 0 whenever j(s) = 0 on every s with chi(s) != chi(1)
    auto C6 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(6));
    auto T6 = CharacterTable::build(C6);
    FiltrationProfile p6{C6, {Rat(0), Rat(0), Rat(2), Rat(0), Rat(2), Rat(0)}, Rat(1, 6)};
    p6.validate();  // j > 0 only on the C3 part
    for (const auto& chi : T6.irreducibles) {
        bool c3_trivial = chi.values[2] == chi.values[0] && chi.values[4] == chi.values[0];
        if (c3_trivial) REQUIRE(swan_conductor(p6, chi) == 0);
    }
}

TEST_CASE("induced filtrations") {
    auto C4 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(4));
    Rat eL(1, 4);
    // i = (eL, 2eL, eL) for (s, s^2, s^3)
    FiltrationProfile p{C4, {Rat(0), Rat(0), eL, Rat(0)}, eL};
    std::vector<int> proj;
    auto Q = std::make_shared<FiniteGroup>(C4->quotient({0, 2}, proj));
    auto q = quotient_profile(p, Q, proj);
    REQUIRE(q.j[1] + q.epsilon_L == 2 * eL);  // Tate sum of the two lifts
    // restriction to the subgroup keeps j
    auto [H, embed] = C4->subgroup_group({0, 2});
    auto r = restrict_profile(p, std::make_shared<FiniteGroup>(H), embed);
    REQUIRE(r.j[1] == eL);
    // H = G and H = 1 degenerate correctly
    std::vector<int> all{0, 1, 2, 3};
    auto [HG, embG] = C4->subgroup_group(all);
    REQUIRE(restrict_profile(p, std::make_shared<FiniteGroup>(HG), embG).j == p.j);
    auto [H1, emb1] = C4->subgroup_group({0});
    REQUIRE(restrict_profile(p, std::make_shared<FiniteGroup>(H1), emb1).j.size() == 1);
}

TEST_CASE("induction identities on randomized profiles", "[acceptance-support]") {
    std::mt19937 rng(17);
    std::vector<std::shared_ptr<FiniteGroup>> groups{
        std::make_shared<FiniteGroup>(FiniteGroup::cyclic(4)),
        std::make_shared<FiniteGroup>(FiniteGroup::cyclic(6)),
        std::make_shared<FiniteGroup>(FiniteGroup::cyclic(9)),
        std::make_shared<FiniteGroup>(FiniteGroup::elementary_abelian(2, 2)),
        std::make_shared<FiniteGroup>(FiniteGroup::elementary_abelian(2, 3)),
        std::make_shared<FiniteGroup>(FiniteGroup::metacyclic(3, 2, 2)),
        std::make_shared<FiniteGroup>(FiniteGroup::metacyclic(5, 4, 2)),
        std::make_shared<FiniteGroup>(
            FiniteGroup::product(FiniteGroup::cyclic(3), FiniteGroup::cyclic(4))),
    };
    int trials = 0;
    while (trials < 100) {
        auto G = groups[rng() % groups.size()];
        auto p = random_profile(G, rng);
        auto T = CharacterTable::build(G);
        auto subs = G->all_subgroups();
        const auto& H = subs[rng() % subs.size()];
        auto rep = check_induction_identities(p, T, H);
        INFO("group " << G->name() << " |H| = " << H.size());
        REQUIRE(rep.regular_identity);
        REQUIRE(rep.induction_identity);
        REQUIRE(rep.quotient_identity);
        REQUIRE(rep.herbrand_composition);
        REQUIRE(rep.upper_intersection);
        REQUIRE(rep.dim_zero_identity);
        ++trials;
    }
}

TEST_CASE("profile validation rejects junk") {
    auto C3 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(3));
    FiltrationProfile bad{C3, {Rat(0), Rat(1), Rat(2)}, Rat(1, 3)};  // j(s) != j(s^2)
    REQUIRE_THROWS_AS(bad.validate(), Error);
    // level sets must be normal subgroups
    auto S3 = std::make_shared<FiniteGroup>(FiniteGroup::metacyclic(3, 2, 2));
    FiltrationProfile nn{S3, std::vector<Rat>(6, Rat(0)), Rat(1, 6)};
    for (int g = 1; g < 6; ++g)
        if (S3->element_order(g) == 2) nn.j[g] = 1;  // reflections: not normal
    REQUIRE_THROWS_AS(nn.validate(), Error);
}
