#ifndef RAMIFLOW_Z2RAM_HPP
#define RAMIFLOW_Z2RAM_HPP

#include "ramiflow/filtration.hpp"
#include "ramiflow/series.hpp"

namespace ramiflow {

// Ramification data of a monogenic integral extension of henselian
// Z^2-valuation rings: the map sigma -> i(sigma) = v(sigma(a) - a) for a
// ring generator a, in the (alpha, beta) normalization with beta(eps_K) = 1.
struct Z2Profile {
    std::shared_ptr<const FiniteGroup> G;
    std::vector<Z2Val> i;  // per element; i[identity] unused
    // minimal positive beta-grain of Gamma_W; for a subgroup acting on the
    // same ring the grain is inherited, not recomputed from the order
    Rat grain = 0;

    Rat eps_L() const { return grain == 0 ? Rat(1) / Rat(G->size()) : grain; }
    Z2Val eps_L_val() const { return Z2Val{Rat(0), eps_L()}; }
    Z2Val j(int g) const { return i[g] - eps_L_val(); }

    void validate() const {
        for (int s = 1; s < G->size(); ++s) {
            if (i[s] != i[G->inv(s)]) throw err(Error::Code::CheckFailed, "i(s) != i(s^-1)");
            if (i[s] < eps_L_val())
                throw err(Error::Code::CheckFailed, "i below the minimal grain");
            for (int g = 0; g < G->size(); ++g)
                if (i[G->conjugate(g, s)] != i[s])
                    throw err(Error::Code::NonClassFunction, "i not a class function");
        }
    }

    std::vector<Z2Val> distinct_positive_j_levels() const {
        std::set<std::pair<Rat, Rat>> s;
        for (int g = 1; g < G->size(); ++g) {
            Z2Val v = j(g);
            if (Z2Val{0, 0} < v) s.insert({v.alpha, v.beta});
        }
        std::vector<Z2Val> out;
        for (const auto& [a, b] : s) out.push_back(Z2Val{a, b});
        return out;
    }

    std::vector<int> lower_subgroup(const Z2Val& t) const {
        std::vector<int> H{0};
        for (int g = 1; g < G->size(); ++g)
            if (t <= j(g)) H.push_back(g);
        return H;
    }

    // the wild part P = G_{0+}
    std::vector<int> wild_subgroup() const {
        std::vector<int> H{0};
        for (int g = 1; g < G->size(); ++g)
            if (Z2Val{0, 0} < j(g)) H.push_back(g);
        return H;
    }
};

// Raw ramification datum: the generator orbit sigma(a) - a as series on the
// radius-t model.  i_profile extracts the i-map by Gauss Z^2-valuations and
// validates the almost-derivation consequences.
struct RamificationDatum {
    std::shared_ptr<const FiniteGroup> G;
    std::vector<ValuedSeries> orbit;  // per element; orbit[identity] unused
    Rat t = 0;                        // radius in the model coordinate
    Rat grain = 0;                    // beta-grain of Gamma_W (0: 1/|G|)
};

inline Z2Profile i_profile(const RamificationDatum& datum) {
    Z2Profile p;
    p.G = datum.G;
    p.grain = datum.grain;
    p.i.assign(datum.G->size(), Z2Val{0, 0});
    for (int s = 1; s < datum.G->size(); ++s) {
        if (datum.orbit[s].known_zero())
            throw err(Error::Code::DegenerateOrbit, "sigma(a) = a for sigma != 1");
        p.i[s] = datum.orbit[s].gauss_z2_valuation_at(datum.t);
    }
    p.validate();
    // trust but verify: perturbed elements a' = a + c never beat the minimum
    // (their orbit differences are unchanged), and a' = a u shifts values up
    for (int s = 1; s < datum.G->size(); ++s) {
        ValuedSeries scaled = datum.orbit[s].scaled(
            Coeff::pi_power(datum.orbit[s].model(), Rat(1)));
        if (scaled.gauss_z2_valuation_at(datum.t) < p.i[s])
            throw err(Error::Code::CheckFailed, "orbit scaling broke the minimum");
    }
    return p;
}

// Z^2-valued class function as an (alpha, beta) pair of rational ones.
struct Z2ClassFunction {
    RatClassFunction alpha;
    RatClassFunction beta;

    Z2Val at(int g) const { return Z2Val{alpha[g], beta[g]}; }
};

struct ArtinSwanData {
    Z2ClassFunction a_G;
    Z2ClassFunction sw_G;
    RatClassFunction a_alpha;   // = sw_alpha
    RatClassFunction a_beta;
    RatClassFunction sw_beta;
};

inline ArtinSwanData artin_swan(const Z2Profile& p) {
    auto G = p.G;
    ArtinSwanData d{{RatClassFunction(G, Rat(0)), RatClassFunction(G, Rat(0))},
                    {RatClassFunction(G, Rat(0)), RatClassFunction(G, Rat(0))},
                    RatClassFunction(G, Rat(0)),
                    RatClassFunction(G, Rat(0)),
                    RatClassFunction(G, Rat(0))};
    Z2Val a1{0, 0}, sw1{0, 0};
    for (int g = 1; g < G->size(); ++g) {
        Z2Val ig = p.i[g], jg = p.j(g);
        d.a_G.alpha[g] = -ig.alpha;
        d.a_G.beta[g] = -ig.beta;
        d.sw_G.alpha[g] = -jg.alpha;
        d.sw_G.beta[g] = -jg.beta;
        a1 = a1 + ig;
        sw1 = sw1 + jg;
    }
    d.a_G.alpha[0] = a1.alpha;
    d.a_G.beta[0] = a1.beta;
    d.sw_G.alpha[0] = sw1.alpha;
    d.sw_G.beta[0] = sw1.beta;
    d.a_alpha = d.a_G.alpha;
    d.a_beta = d.a_G.beta;
    d.sw_beta = d.sw_G.beta;
    // a_G = sw_G + eps_L u_G, re-verified here by construction
    auto u = augmentation_character(G).scaled(p.eps_L());
    if (!(d.sw_G.beta + u == d.a_G.beta) || !(d.sw_G.alpha == d.a_G.alpha))
        throw err(Error::Code::CheckFailed, "a_G != sw_G + eps_L u_G");
    return d;
}

// <<f, chi>> for a Z^2-valued class function, componentwise and exact
inline Z2Val pair_serre_kato_z2(const Z2ClassFunction& f, const ClassFunction& chi) {
    return Z2Val{pair_serre_kato(f.alpha, chi), pair_serre_kato(f.beta, chi)};
}

// sw_G(M_chi) = <<sw_G, chi>> in Gamma = Q x Q (lex)
inline Z2Val swan_z2(const Z2Profile& p, const ClassFunction& chi) {
    return pair_serre_kato_z2(artin_swan(p).sw_G, chi);
}

// v(d_{V'/V}) = [G:H] sum_{sigma in G-H} i(sigma)
inline Z2Val discriminant_valuation(const Z2Profile& p, const std::vector<int>& H) {
    std::set<int> hs(H.begin(), H.end());
    Z2Val total{0, 0};
    for (int g = 1; g < p.G->size(); ++g)
        if (!hs.count(g)) total = total + p.i[g];
    Rat index = Rat(p.G->size()) / Rat((long)H.size());
    return total * index;
}

// the scalar profile driving the Abbes-Saito filtration: r(sigma) = |G| alpha(i(sigma))
inline std::vector<Rat> as_breaks(const Z2Profile& p) {
    std::vector<Rat> r(p.G->size(), Rat(0));
    for (int g = 1; g < p.G->size(); ++g) r[g] = Rat(p.G->size()) * p.i[g].alpha;
    return r;
}

struct StructureCheck {
    std::string name;
    bool pass;
    std::string witness;
};

// consequences of the theta-morphism and the Hasse-Arf theorem, used as
// self-checks on every computed profile
inline std::vector<StructureCheck> structure_checks(const Z2Profile& p, long char_p, long ell,
                                                    const CharacterTable* table = nullptr) {
    std::vector<StructureCheck> out;
    auto G = p.G;
    // tame quotient G/G_{eps_L} cyclic of order prime to p
    {
        auto Geps = p.lower_subgroup(p.eps_L_val());
        bool ok = G->is_normal(Geps);
        std::vector<int> proj;
        std::string wit;
        if (ok) {
            auto Q = G->quotient(Geps, proj);
            bool cyclic = false;
            for (int g = 0; g < Q.size(); ++g)
                if (Q.element_order(g) == Q.size()) cyclic = true;
            ok = cyclic && (Q.size() % char_p != 0);
            wit = "order " + std::to_string(Q.size());
        }
        out.push_back({"tame quotient cyclic prime to p", ok, wit});
    }
    // graded pieces between consecutive positive jumps elementary abelian p
    {
        bool ok = true;
        std::string wit;
        auto levels = p.distinct_positive_j_levels();
        for (size_t k = 0; k < levels.size() && ok; ++k) {
            auto Gt = p.lower_subgroup(levels[k]);
            std::vector<int> Gnext =
                (k + 1 < levels.size()) ? p.lower_subgroup(levels[k + 1]) : std::vector<int>{0};
            // quotient Gt / Gnext inside G: check orders and commutativity modulo Gnext
            std::set<int> nx(Gnext.begin(), Gnext.end());
            for (int a : Gt)
                for (int b : Gt) {
                    int comm = G->mul(G->mul(a, b), G->inv(G->mul(b, a)));
                    if (!nx.count(comm)) ok = false;
                }
            for (int a : Gt) {
                if (nx.count(a)) continue;
                int ap = a;
                for (long e = 1; e < char_p; ++e) ap = G->mul(ap, a);
                if (!nx.count(ap)) ok = false;  // a^p must fall into the next step
            }
            if (!ok) wit = "level " + z2_str(levels[k]);
        }
        out.push_back({"graded pieces elementary abelian p", ok, wit});
    }
    if (table) {
        // Hasse-Arf (abelian): beta(sw(M_chi)) integral in eps_K units
        if (G->abelian()) {
            bool ok = true;
            std::string wit;
            for (const auto& chi : table->irreducibles) {
                Z2Val sw = swan_z2(p, chi);
                if (!is_integer(sw.beta)) {
                    ok = false;
                    wit = "beta = " + rat_str(sw.beta);
                }
            }
            out.push_back({"Hasse-Arf integrality", ok, wit});
        }
        // |G| <sw_beta, chi> integral; sw_beta vanishes on order divisible by ell
        {
            bool ok = true;
            std::string wit;
            auto d = artin_swan(p);
            for (const auto& chi : table->irreducibles) {
                Rat v = pair_rational(d.sw_beta, chi) * Rat(G->size());
                if (!is_integer(v)) {
                    ok = false;
                    wit = "<sw_beta,chi> * |G| = " + rat_str(v);
                }
            }
            for (int g = 1; g < G->size(); ++g)
                if (G->element_order(g) % ell == 0 && d.sw_beta[g] != 0) {
                    ok = false;
                    wit = "sw_beta nonzero on ell-element";
                }
            out.push_back({"virtual character integrality", ok, wit});
        }
    }
    return out;
}

}  // namespace ramiflow

#endif
