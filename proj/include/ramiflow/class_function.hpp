#ifndef RAMIFLOW_CLASS_FUNCTION_HPP
#define RAMIFLOW_CLASS_FUNCTION_HPP

#include <memory>
#include <vector>

#include "ramiflow/group.hpp"

namespace ramiflow {

// Class function with values in Q(zeta_N); stored per element for easy
// restriction and induction, constancy on classes is enforced on demand.
struct ClassFunction {
    std::shared_ptr<const FiniteGroup> G;
    std::shared_ptr<const Cyclo> F;
    std::vector<Cyclo::Elem> values;  // per element

    const Cyclo::Elem& at(int g) const { return values[g]; }

    void check_class_function() const {
        for (int g = 0; g < G->size(); ++g)
            for (int x = 0; x < G->size(); ++x)
                if (values[G->conjugate(g, x)] != values[x])
                    throw err(Error::Code::NonClassFunction, "not constant on classes");
    }

    Rat dim() const { return F->rational_part(values[0]); }
};

// Rational-valued class function (the conductor-side objects a^alpha etc.).
struct RatClassFunction {
    std::shared_ptr<const FiniteGroup> G;
    std::vector<Rat> values;

    RatClassFunction() = default;
    RatClassFunction(std::shared_ptr<const FiniteGroup> g, Rat fill)
        : G(std::move(g)), values(G->size(), std::move(fill)) {}

    Rat& operator[](int g) { return values[g]; }
    const Rat& operator[](int g) const { return values[g]; }

    RatClassFunction operator+(const RatClassFunction& o) const {
        RatClassFunction r = *this;
        for (size_t i = 0; i < values.size(); ++i) r.values[i] += o.values[i];
        return r;
    }
    RatClassFunction operator-(const RatClassFunction& o) const {
        RatClassFunction r = *this;
        for (size_t i = 0; i < values.size(); ++i) r.values[i] -= o.values[i];
        return r;
    }
    RatClassFunction scaled(const Rat& c) const {
        RatClassFunction r = *this;
        for (auto& v : r.values) v *= c;
        return r;
    }
    bool operator==(const RatClassFunction& o) const { return values == o.values; }
};

// augmentation character u_G = r_G - 1_G
inline RatClassFunction augmentation_character(std::shared_ptr<const FiniteGroup> G) {
    RatClassFunction u(G, Rat(-1));
    u[0] = Rat(G->size() - 1);
    return u;
}

inline RatClassFunction regular_character(std::shared_ptr<const FiniteGroup> G) {
    RatClassFunction r(G, Rat(0));
    r[0] = Rat(G->size());
    return r;
}

// Irreducible characters, exact over Q(zeta_exponent).
struct CharacterTable {
    std::shared_ptr<const FiniteGroup> G;
    std::shared_ptr<const Cyclo> F;
    std::vector<ClassFunction> irreducibles;

    static CharacterTable build(std::shared_ptr<const FiniteGroup> G) {
        CharacterTable T;
        T.G = G;
        T.F = std::make_shared<Cyclo>(G->exponent());
        if (!G->coords().empty()) {
            T.build_abelian();
        } else if (G->family() == FiniteGroup::Family::Metacyclic) {
            T.build_metacyclic();
        } else if (G->family() == FiniteGroup::Family::Product) {
            T.build_product();
        } else {
            throw err(Error::Code::GroupMismatch, "no character table for this family");
        }
        return T;
    }

    const ClassFunction& trivial() const { return irreducibles[0]; }

private:
    void build_abelian() {
        const auto& factors = G->cyclic_factors();
        const auto& coords = G->coords();
        long N = G->exponent();
        long n = G->size();
        // characters indexed like elements: chi_j(a) = zeta^{sum_i j_i a_i N/n_i}
        for (long j = 0; j < n; ++j) {
            ClassFunction chi{G, F, {}};
            chi.values.resize(n);
            for (long a = 0; a < n; ++a) {
                long e = 0;
                for (size_t i = 0; i < factors.size(); ++i)
                    e = (e + coords[j][i] * coords[a][i] % factors[i] * (N / factors[i])) % N;
                chi.values[a] = F->zeta_pow(e);
            }
            irreducibles.push_back(std::move(chi));
        }
        // put the trivial character (j = 0 coordinates) first
        // j = 0 encodes the zero tuple already.
    }

    void build_metacyclic() {
        long q = G->meta_q(), m = G->meta_m(), r = G->meta_r();
        long p_char = smallest_prime_factor(q);
        if (r % p_char == 1 % p_char && q > 1 && r != 1)
            throw err(Error::Code::GroupMismatch, "metacyclic table needs r != 1 mod p");
        // validate free orbits of <r> on nontrivial characters of Z/q
        std::vector<bool> seen(q, false);
        std::vector<std::vector<long>> orbits;
        for (long c = 1; c < q; ++c) {
            if (seen[c]) continue;
            std::vector<long> orb;
            long x = c;
            do {
                if (seen[x] && x != c)
                    throw err(Error::Code::GroupMismatch, "orbit structure unsupported");
                seen[x] = true;
                orb.push_back(x);
                x = (x * r) % q;
            } while (x != c);
            if ((long)orb.size() != m)
                throw err(Error::Code::GroupMismatch, "metacyclic table needs free orbits");
            orbits.push_back(orb);
        }
        long N = G->exponent();
        auto enc = [q](long a, long b) { return (int)(b * q + a); };
        // m linear characters through the tame quotient
        for (long j = 0; j < m; ++j) {
            ClassFunction chi{G, F, {}};
            chi.values.resize(G->size());
            for (long a = 0; a < q; ++a)
                for (long b = 0; b < m; ++b)
                    chi.values[enc(a, b)] = F->zeta_pow(j * b % m * (N / m));
            irreducibles.push_back(std::move(chi));
        }
        // induced characters, one per orbit, dimension m
        for (const auto& orb : orbits) {
            ClassFunction chi{G, F, {}};
            chi.values.resize(G->size());
            for (long a = 0; a < q; ++a)
                for (long b = 0; b < m; ++b) {
                    if (b != 0) {
                        chi.values[enc(a, b)] = F->zero();
                        continue;
                    }
                    Cyclo::Elem s = F->zero();
                    for (long c : orb) s = F->add(s, F->zeta_pow(c * a % q * (N / q)));
                    chi.values[enc(a, b)] = s;
                }
            irreducibles.push_back(std::move(chi));
        }
    }

    void build_product() {
        auto TA = CharacterTable::build(std::make_shared<FiniteGroup>(G->factor_a()));
        auto TB = CharacterTable::build(std::make_shared<FiniteGroup>(G->factor_b()));
        long an = G->factor_a().size(), bn = G->factor_b().size();
        for (const auto& ca : TA.irreducibles)
            for (const auto& cb : TB.irreducibles) {
                ClassFunction chi{G, F, {}};
                chi.values.resize(G->size());
                for (int a = 0; a < an; ++a)
                    for (int b = 0; b < bn; ++b) {
                        // both factor values embed through zeta_N
                        chi.values[b * an + a] =
                            F->mul(lift(TA, ca.values[a]), lift(TB, cb.values[b]));
                    }
                irreducibles.push_back(std::move(chi));
            }
    }

    Cyclo::Elem lift(const CharacterTable& T, const Cyclo::Elem& v) const {
        // rewrite an element of Q(zeta_M) in Q(zeta_N), M | N
        long M = T.F->N(), N = F->N();
        Cyclo::Elem out = F->zero();
        for (long i = 0; i < (long)v.size(); ++i) {
            if (v[i] == 0) continue;
            out = F->add(out, F->scale(F->zeta_pow(i * (N / M)), v[i]));
        }
        return out;
    }

    static long smallest_prime_factor(long q) {
        for (long d = 2; d * d <= q; ++d)
            if (q % d == 0) return d;
        return q;
    }
};

// usual pairing <f, chi> = |G|^{-1} sum_g f(g^{-1}) chi(g), asserted rational
inline Rat pair_rational(const RatClassFunction& f, const ClassFunction& chi) {
    if (f.G->size() != chi.G->size()) throw err(Error::Code::GroupMismatch, "pairing mismatch");
    const auto& F = *chi.F;
    Cyclo::Elem acc = F.zero();
    for (int g = 0; g < f.G->size(); ++g)
        acc = F.add(acc, F.scale(chi.at(g), f[f.G->inv(g)]));
    return F.rational_part(acc) / f.G->size();
}

inline Rat pair_rational(const RatClassFunction& f, const RatClassFunction& g) {
    if (f.G->size() != g.G->size()) throw err(Error::Code::GroupMismatch, "pairing mismatch");
    Rat acc = 0;
    for (int x = 0; x < f.G->size(); ++x) acc += f[f.G->inv(x)] * g[x];
    return acc / f.G->size();
}

// Serre-Kato pairing <<f, chi>> = sum_g f(g^{-1}) chi(g) (no |G| factor)
inline Rat pair_serre_kato(const RatClassFunction& f, const ClassFunction& chi) {
    return pair_rational(f, chi) * f.G->size();
}

// restriction to a subgroup (H given as element list with its own group object)
inline RatClassFunction restrict_to(const RatClassFunction& f,
                                    std::shared_ptr<const FiniteGroup> H,
                                    const std::vector<int>& embed) {
    RatClassFunction r(H, Rat(0));
    for (int h = 0; h < H->size(); ++h) r[h] = f[embed[h]];
    return r;
}

inline ClassFunction restrict_to(const ClassFunction& chi, std::shared_ptr<const FiniteGroup> H,
                                 const std::vector<int>& embed) {
    ClassFunction r{H, chi.F, {}};
    r.values.resize(H->size());
    for (int h = 0; h < H->size(); ++h) r.values[h] = chi.values[embed[h]];
    return r;
}

// induction of a rational class function from a subgroup:
// (Ind f)(g) = |H|^{-1} sum_{x in G, x^{-1} g x in H} f(x^{-1} g x)
inline RatClassFunction induce_from(const RatClassFunction& fH,
                                    std::shared_ptr<const FiniteGroup> G,
                                    const std::vector<int>& embed) {
    std::vector<int> member(G->size(), -1);
    for (size_t h = 0; h < embed.size(); ++h) member[embed[h]] = (int)h;
    RatClassFunction r(G, Rat(0));
    for (int g = 0; g < G->size(); ++g) {
        Rat acc = 0;
        for (int x = 0; x < G->size(); ++x) {
            int c = G->conjugate(G->inv(x), g);
            if (member[c] >= 0) acc += fH[member[c]];
        }
        r[g] = acc / Rat((long)embed.size());
    }
    return r;
}

inline ClassFunction induce_from(const ClassFunction& chiH, std::shared_ptr<const FiniteGroup> G,
                                 const std::vector<int>& embed) {
    std::vector<int> member(G->size(), -1);
    for (size_t h = 0; h < embed.size(); ++h) member[embed[h]] = (int)h;
    const auto& F = *chiH.F;
    ClassFunction r{G, chiH.F, {}};
    r.values.resize(G->size());
    for (int g = 0; g < G->size(); ++g) {
        Cyclo::Elem acc = F.zero();
        for (int x = 0; x < G->size(); ++x) {
            int c = G->conjugate(G->inv(x), g);
            if (member[c] >= 0) acc = F.add(acc, chiH.values[member[c]]);
        }
        r.values[g] = F.scale(acc, Rat(1) / Rat((long)embed.size()));
    }
    return r;
}

inline ClassFunction cf_add(const ClassFunction& a, const ClassFunction& b) {
    ClassFunction r = a;
    for (size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.F->add(a.values[i], b.values[i]);
    return r;
}

inline ClassFunction cf_scale(const ClassFunction& a, const Rat& c) {
    ClassFunction r = a;
    for (auto& v : r.values) v = a.F->scale(v, c);
    return r;
}

inline ClassFunction cf_sub(const ClassFunction& a, const ClassFunction& b) {
    return cf_add(a, cf_scale(b, Rat(-1)));
}

inline ClassFunction trivial_character(std::shared_ptr<const FiniteGroup> G,
                                       std::shared_ptr<const Cyclo> F) {
    ClassFunction r{G, F, {}};
    r.values.assign(G->size(), F->one());
    return r;
}

// characters of a subgroup, living in the parent's cyclotomic field:
// cyclic subgroups get the direct formula, abelian subgroups of abelian
// groups the (deduplicated) restrictions of the parent's characters
inline CharacterTable table_for_subgroup(const CharacterTable& TG,
                                         std::shared_ptr<const FiniteGroup> H,
                                         const std::vector<int>& embed) {
    CharacterTable T;
    T.G = H;
    T.F = TG.F;
    long n = H->size();
    int gen = -1;
    for (int h = 0; h < n; ++h)
        if (H->element_order(h) == n) gen = h;
    if (gen >= 0) {
        // discrete log against the generator
        std::vector<long> log(n, 0);
        int x = 0;
        for (long k = 0; k < n; ++k) {
            log[x] = k;
            x = H->mul(x, gen);
        }
        long N = TG.F->N();
        for (long jj = 0; jj < n; ++jj) {
            ClassFunction chi{H, T.F, {}};
            chi.values.resize(n);
            for (int h = 0; h < n; ++h)
                chi.values[h] = TG.F->zeta_pow(jj * log[h] % n * (N / n));
            T.irreducibles.push_back(std::move(chi));
        }
        return T;
    }
    if (!TG.G->abelian())
        throw err(Error::Code::GroupMismatch, "subgroup table needs cyclic H or abelian G");
    std::set<std::vector<Cyclo::Elem>> seen;
    for (const auto& chi : TG.irreducibles) {
        auto res = restrict_to(chi, H, embed);
        if (seen.insert(res.values).second) T.irreducibles.push_back(std::move(res));
    }
    if ((long)T.irreducibles.size() != n)
        throw err(Error::Code::GroupMismatch, "restriction table incomplete");
    return T;
}

// characters of G/H: the characters of G with H in their kernel
inline CharacterTable table_for_quotient(const CharacterTable& TG,
                                         std::shared_ptr<const FiniteGroup> Q,
                                         const std::vector<int>& proj) {
    CharacterTable T;
    T.G = Q;
    T.F = TG.F;
    long n = TG.G->size();
    std::vector<int> pre(Q->size(), -1);
    for (int g = 0; g < n; ++g)
        if (pre[proj[g]] < 0) pre[proj[g]] = g;
    for (const auto& chi : TG.irreducibles) {
        bool trivial_on_kernel = true;
        for (int g = 0; g < n && trivial_on_kernel; ++g)
            if (proj[g] == 0 && chi.values[g] != chi.values[0]) trivial_on_kernel = false;
        if (!trivial_on_kernel) continue;
        ClassFunction c{Q, T.F, {}};
        c.values.resize(Q->size());
        for (int q = 0; q < Q->size(); ++q) c.values[q] = chi.values[pre[q]];
        T.irreducibles.push_back(std::move(c));
    }
    return T;
}

// push a class function through a surjection G -> Q (summing over fibers)
inline RatClassFunction push_through_quotient(const RatClassFunction& f,
                                              std::shared_ptr<const FiniteGroup> Q,
                                              const std::vector<int>& proj) {
    RatClassFunction r(Q, Rat(0));
    for (int g = 0; g < f.G->size(); ++g) r[proj[g]] += f[g];
    return r;
}

// inflate a character of a quotient back to G
inline ClassFunction inflate(const ClassFunction& chiQ, std::shared_ptr<const FiniteGroup> G,
                             const std::vector<int>& proj) {
    ClassFunction r{G, chiQ.F, {}};
    r.values.resize(G->size());
    for (int g = 0; g < G->size(); ++g) r.values[g] = chiQ.values[proj[g]];
    return r;
}

}  // namespace ramiflow

#endif
