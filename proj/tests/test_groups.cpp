#include <catch_amalgamated.hpp>

#include "ramiflow/class_function.hpp"

using namespace ramiflow;

namespace {

void check_axioms(const FiniteGroup& G) {
    long n = G.size();
    for (int a = 0; a < n; ++a) {
        REQUIRE(G.mul(a, 0) == a);
        REQUIRE(G.mul(0, a) == a);
        REQUIRE(G.mul(a, G.inv(a)) == 0);
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                REQUIRE(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
    }
    // classes partition
    long total = 0;
    for (const auto& cls : G.classes()) total += (long)cls.size();
    REQUIRE(total == n);
}

void check_orthogonality(const CharacterTable& T) {
    auto G = T.G;
    for (size_t i = 0; i < T.irreducibles.size(); ++i)
        for (size_t k = 0; k < T.irreducibles.size(); ++k) {
            Cyclo::Elem acc = T.F->zero();
            for (int g = 0; g < G->size(); ++g)
                acc = T.F->add(acc, T.F->mul(T.irreducibles[i].values[G->inv(g)],
                                             T.irreducibles[k].values[g]));
            REQUIRE(T.F->rational_part(acc) / G->size() == Rat(i == k ? 1 : 0));
        }
}

}  // namespace

TEST_CASE("group families satisfy the axioms") {
    for (long n : {1L, 2L, 6L, 8L}) check_axioms(FiniteGroup::cyclic(n));
    check_axioms(FiniteGroup::elementary_abelian(2, 3));
    check_axioms(FiniteGroup::elementary_abelian(3, 2));
    check_axioms(FiniteGroup::metacyclic(3, 2, 2));   // S3
    check_axioms(FiniteGroup::metacyclic(5, 4, 2));   // F20
    check_axioms(FiniteGroup::metacyclic(9, 2, 8));   // D9
    check_axioms(FiniteGroup::product(FiniteGroup::cyclic(3), FiniteGroup::cyclic(2)));
    // order-64 boundary case
    check_axioms(FiniteGroup::product(FiniteGroup::elementary_abelian(2, 3),
                                      FiniteGroup::cyclic(8)));
}

TEST_CASE("character tables are orthonormal") {
    check_orthogonality(CharacterTable::build(std::make_shared<FiniteGroup>(FiniteGroup::cyclic(6))));
    check_orthogonality(
        CharacterTable::build(std::make_shared<FiniteGroup>(FiniteGroup::elementary_abelian(3, 2))));
    check_orthogonality(
        CharacterTable::build(std::make_shared<FiniteGroup>(FiniteGroup::metacyclic(3, 2, 2))));
    check_orthogonality(
        CharacterTable::build(std::make_shared<FiniteGroup>(FiniteGroup::metacyclic(5, 4, 2))));
    check_orthogonality(CharacterTable::build(std::make_shared<FiniteGroup>(
        FiniteGroup::product(FiniteGroup::cyclic(3), FiniteGroup::cyclic(2)))));
}

TEST_CASE("pairing identities") {
    auto G = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(4));
    auto T = CharacterTable::build(G);
    auto u = augmentation_character(G);
    auto r = regular_character(G);
    REQUIRE(pair_rational(u, T.trivial()) == 0);
    for (const auto& chi : T.irreducibles) REQUIRE(pair_rational(r, chi) == chi.dim());

    // <sw_G, r_G> = sum of j over nonidentity, for C2 with j = 3
    auto C2 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
    RatClassFunction sw(C2, Rat(0));
    sw[1] = Rat(-3);
    sw[0] = Rat(3);
    REQUIRE(pair_rational(sw, regular_character(C2)) == 3);
}

TEST_CASE("subgroup and quotient machinery") {
    auto S3 = std::make_shared<FiniteGroup>(FiniteGroup::metacyclic(3, 2, 2));
    auto subs = S3->all_subgroups();
    REQUIRE(subs.size() == 6);  // 1, three C2, C3, S3
    auto normals = S3->normal_subgroups();
    REQUIRE(normals.size() == 3);
    for (const auto& H : normals) {
        std::vector<int> proj;
        auto Q = S3->quotient(H, proj);
        REQUIRE(Q.size() * (long)H.size() == S3->size());
    }
    // restriction table for the cyclic C3 inside S3
    auto T = CharacterTable::build(S3);
    std::vector<int> c3;
    for (int g = 0; g < 6; ++g)
        if (S3->element_order(g) == 1 || S3->element_order(g) == 3) c3.push_back(g);
    auto [H, embed] = S3->subgroup_group(c3);
    auto TH = table_for_subgroup(T, std::make_shared<FiniteGroup>(H), embed);
    REQUIRE(TH.irreducibles.size() == 3);
}
