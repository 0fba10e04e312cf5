#ifndef RAMIFLOW_COVERS_HPP
#define RAMIFLOW_COVERS_HPP

#include "ramiflow/resultant.hpp"
#include "ramiflow/z2ram.hpp"

namespace ramiflow {

// Declarative cover families over the unit disc.  The Galois families are
// Kummer y^m = u (p coprime to m), Artin-Schreier y^p - y = g (equal
// characteristic), and their fiber product; AnnulusMap is the explicit
// xi -> xi^d (1 + h) family carrying only discriminant data.
struct CoverSpec {
    enum class Type { Kummer, ArtinSchreier, Composite, AnnulusMap };
    Type type;
    CoeffModel model;
    long m = 1;         // Kummer degree
    ValuedSeries u;     // Kummer data
    ValuedSeries g;     // Artin-Schreier data
    long d = 1;         // AnnulusMap degree
    ValuedSeries h;     // AnnulusMap data, |h|_sup < 1 on the window
    Rat window_lo = 0;  // AnnulusMap target-radius window
    Rat window_hi = 0;

    static CoverSpec kummer(const CoeffModel& model, long m, ValuedSeries u) {
        if (m <= 0 || m % model.p == 0)
            throw err(Error::Code::UnsupportedCover, "Kummer degree must be prime to p");
        for (const auto& [n, c] : u.terms())
            if (n < 0) throw err(Error::Code::UnsupportedCover, "u must be a function on the disc");
        if (!u.terms().count(0))
            throw err(Error::Code::UnsupportedCover, "cover not etale at the origin: u(0) = 0");
        CoverSpec s;
        s.type = Type::Kummer;
        s.model = model;
        s.m = m;
        s.u = std::move(u);
        s.g = ValuedSeries::zero(model);
        s.h = ValuedSeries::zero(model);
        return s;
    }

    static CoverSpec artin_schreier(const CoeffModel& model, ValuedSeries g) {
        if (model.kind != CoeffModel::Kind::EqualChar)
            throw err(Error::Code::UnsupportedCover, "Artin-Schreier needs equal characteristic");
        for (const auto& [n, c] : g.terms())
            if (n < 0) throw err(Error::Code::UnsupportedCover, "g must be a function on the disc");
        CoverSpec s;
        s.type = Type::ArtinSchreier;
        s.model = model;
        s.g = std::move(g);
        s.u = ValuedSeries::zero(model);
        s.h = ValuedSeries::zero(model);
        return s;
    }

    static CoverSpec composite(const CoeffModel& model, ValuedSeries g, long m, ValuedSeries u) {
        CoverSpec s = artin_schreier(model, std::move(g));
        CoverSpec k = kummer(model, m, std::move(u));
        s.type = Type::Composite;
        s.m = k.m;
        s.u = k.u;
        return s;
    }

    static CoverSpec annulus_map(const CoeffModel& model, long d, ValuedSeries h, Rat lo, Rat hi) {
        if (d < 1) throw err(Error::Code::UnsupportedCover, "annulus degree must be >= 1");
        CoverSpec s;
        s.type = Type::AnnulusMap;
        s.model = model;
        s.d = d;
        s.h = std::move(h);
        s.u = ValuedSeries::zero(model);
        s.g = ValuedSeries::zero(model);
        s.window_lo = std::move(lo);
        s.window_hi = std::move(hi);
        for (const auto& [n, c] : s.h.terms())
            if (n == 0) throw err(Error::Code::UnsupportedCover, "h has no constant term");
        // |h|_sup < 1 on the source annulus (concavity: endpoints suffice)
        if (!s.h.terms().empty()) {
            for (const Rat& t : {s.window_lo, s.window_hi}) {
                auto v = s.h.gauss_valuation_at(t / d);
                if (v && *v <= 0)
                    throw err(Error::Code::UnsupportedCover, "|h| not < 1 on the annulus");
            }
        }
        return s;
    }

    long degree() const {
        switch (type) {
            case Type::Kummer: return m;
            case Type::ArtinSchreier: return model.p;
            case Type::Composite: return model.p * m;
            case Type::AnnulusMap: return d;
        }
        return 0;
    }

    std::shared_ptr<const FiniteGroup> group() const {
        switch (type) {
            case Type::Kummer: return std::make_shared<FiniteGroup>(FiniteGroup::cyclic(m));
            case Type::ArtinSchreier:
                return std::make_shared<FiniteGroup>(FiniteGroup::cyclic(model.p));
            case Type::Composite:
                return std::make_shared<FiniteGroup>(FiniteGroup::product(
                    FiniteGroup::cyclic(model.p), FiniteGroup::cyclic(m)));
            case Type::AnnulusMap:
                return std::make_shared<FiniteGroup>(FiniteGroup::cyclic(1));
        }
        return nullptr;
    }
};

// Everything the downstream pipelines need about one radius-t fiber.
struct FiberData {
    Rat t;
    std::shared_ptr<const FiniteGroup> G;  // full cover group
    long branch_count = 1;                 // |S^(t)|
    std::shared_ptr<const FiniteGroup> stab;
    std::vector<int> stab_embed;
    Z2Profile profile;  // i-map on the stabilizer

    // branch normal-form data
    bool wild = false;
    Rat lambda_alpha = 0;   // -alpha(v_t(reduced g)) when wild
    long n0 = 1;            // T-order of the reduced wild residue (p does not divide)
    Fq::Elem wild_unit;     // leading unit of the reduced wild part
    long m_prime = 1;       // beta-ramified tame degree
    long d0 = 0;            // beta-order of u at t
    long g0 = 1;            // gcd(m, d0) = tame branch count
    long as_split = 1;      // p when the AS part splits
    bool naive_monogenic = true;  // no normalization move was needed
    long moves_used = 0;
    // generator w = z_A^gen_x z_K^gen_y T^gen_k (value eps_L)
    long gen_x = 0, gen_y = 0, gen_k = 0;
    CoeffModel field;  // working residue field (possibly enlarged)

    // alpha/beta parts of v(sigma(Y) - Y) for the naive root Y, on all of G
    std::vector<Rat> naive_alpha;
    std::vector<Rat> naive_beta;

    Rat eps_L() const { return Rat(1) / Rat(stab->size()); }
};

namespace detail {

inline long egcd(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long x1, y1;
    long g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline long inv_mod(long a, long n) {
    if (n == 1) return 0;
    long x, y;
    long g = egcd(((a % n) + n) % n, n, x, y);
    if (g != 1) throw err(Error::Code::CheckFailed, "not invertible");
    return ((x % n) + n) % n;
}

// enlarge the residue field until pred succeeds
template <typename Pred>
CoeffModel enlarge_until(const CoeffModel& start, Pred pred, const char* what) {
    CoeffModel model = start;
    for (int k = 1; k <= 6; ++k) {
        if (pred(model)) return model;
        model = start.enlarged(k + 1);
    }
    throw err(Error::Code::ResidueFieldTooSmall, std::string("no residue extension found: ") + what);
}

struct ASResult {
    bool wild = false;
    bool split = false;
    Rat lambda_alpha = 0;
    long n0 = 1;
    Fq::Elem unit;
    long moves = 0;
    ValuedSeries reduced;  // the reduced g at radius t (T coordinate)
};

// Artin-Schreier reduction at a fixed radius: translate away p-th power
// parts of the polar leading terms until the class is either visibly split
// or visibly wild.
inline ASResult as_reduce(const ValuedSeries& g, const Rat& t, CoeffModel& model) {
    ASResult res;
    ValuedSeries cur = g.in_model(model).rescaled(t);
    const long p = model.p;
    for (long step = 0; step < 64; ++step) {
        res.moves = step;
        res.reduced = cur;
        if (cur.known_zero()) {
            res.split = true;
            return res;
        }
        auto a = cur.gauss_valuation_at(Rat(0));
        if (!a) {
            res.split = true;  // truncated to an exact zero
            return res;
        }
        if (cur.tail_could_reach(Rat(0), *a))
            throw err(Error::Code::InsufficientPrecision, "tail reaches the reduction level");
        if (*a > 0) {
            res.split = true;
            return res;
        }
        auto residue = cur.residue_at(Rat(0));
        if (*a == 0) {
            // integral class: split once the constant part has an AS root
            if (residue.count(0)) {
                Fq::Elem c0 = residue.at(0);
                CoeffModel src = model;
                model = enlarge_until(
                    model,
                    [&](const CoeffModel& mm) {
                        return mm.residue
                            ->artin_schreier_root(mm.residue->embed_from(*src.residue, c0))
                            .has_value();
                    },
                    "Artin-Schreier class");
            }
            res.split = true;
            res.reduced = cur.in_model(model);
            return res;
        }
        // polar level: split off the p-divisible attaining part
        std::map<long, Fq::Elem> divisible;
        for (const auto& [n, unitv] : residue)
            if (n % p == 0) divisible[n] = unitv;
        if (divisible.empty()) {
            res.wild = true;
            res.lambda_alpha = -*a;
            res.n0 = residue.begin()->first;
            res.unit = residue.begin()->second;
            return res;
        }
        // x = sum (unit^{1/p}) pi^{a/p} T^{n/p}; subtract x^p - x
        ValuedSeries x(model);
        for (const auto& [n, unitv] : divisible) {
            Fq::Elem uv = unitv;
            CoeffModel src = model;
            model = enlarge_until(
                model,
                [&](const CoeffModel& mm) {
                    return mm.residue->nth_root(mm.residue->embed_from(*src.residue, uv), p)
                        .has_value();
                },
                "p-th root of unit");
            cur = cur.in_model(model);
            x = x.in_model(model);
            Fq::Elem root =
                *model.residue->nth_root(model.residue->embed_from(*src.residue, uv), p);
            x.set_term(n / p, Coeff::monomial(model, root, *a / p));
        }
        ValuedSeries xp = x;
        for (long i = 1; i < p; ++i) xp = xp * x;
        cur = cur - xp + x;
    }
    throw err(Error::Code::NormalizationFailed, "reduction moves exhausted");
}

}  // namespace detail

// Per-radius fiber analysis: branch count, stabilizer, i-map, normal form.
inline FiberData fiber_branches(const CoverSpec& cover, const Rat& t) {
    if (t < 0) throw err(Error::Code::OutOfDomain, "radius must be >= 0");
    if (cover.type == CoverSpec::Type::AnnulusMap)
        throw err(Error::Code::UnsupportedCover, "annulus maps carry no Galois fiber data");
    if (cover.model.kind != CoeffModel::Kind::EqualChar)
        throw err(Error::Code::UnsupportedCover, "fiber analysis needs equal characteristic");

    FiberData fd;
    fd.t = t;
    fd.G = cover.group();
    fd.field = cover.model;
    const long p = cover.model.p;
    bool has_as = cover.type != CoverSpec::Type::Kummer;
    bool has_kummer = cover.type != CoverSpec::Type::ArtinSchreier;

    // --- Kummer part ---
    Rat u_alpha = 0;
    if (has_kummer) {
        // the group action needs mu_m in the residue field
        fd.field = detail::enlarge_until(
            fd.field,
            [&](const CoeffModel& mm) { return mm.residue->has_primitive_root_of_unity(cover.m); },
            "primitive root of unity");
        ValuedSeries ut = cover.u.in_model(fd.field).rescaled(t);
        Z2Val w = ut.gauss_z2_valuation_at(Rat(0));
        if (ut.tail_could_reach(Rat(0), w.alpha))
            throw err(Error::Code::InsufficientPrecision, "u tail reaches its minimum");
        u_alpha = w.alpha;
        fd.d0 = to_long(rat_num(w.beta));
        fd.g0 = std::gcd(cover.m, fd.d0);
        fd.m_prime = cover.m / fd.g0;
        // residual splitting: need a g0-th root of the leading unit and mu_g0
        Fq::Elem u0 = ut.residue_at(Rat(0)).begin()->second;
        fd.field = detail::enlarge_until(
            fd.field,
            [&](const CoeffModel& mm) {
                if (!mm.residue->has_primitive_root_of_unity(fd.g0 * cover.m)) return false;
                return mm.residue->nth_root(mm.residue->embed_from(*fd.field.residue, u0), fd.g0)
                    .has_value();
            },
            "tame residual split");
        if (u_alpha != 0) fd.naive_monogenic = false;  // root variable needs sup-scaling
    }

    // --- Artin-Schreier part ---
    if (has_as) {
        CoeffModel work = fd.field;
        auto asr = detail::as_reduce(cover.g, t, work);
        fd.field = work;
        fd.wild = asr.wild;
        fd.moves_used = asr.moves;
        if (asr.moves > 0 || asr.wild) fd.naive_monogenic = false;
        if (asr.wild) {
            fd.lambda_alpha = asr.lambda_alpha;
            fd.n0 = asr.n0;
            fd.wild_unit = asr.unit;
            fd.as_split = 1;
        } else {
            fd.as_split = p;
        }
    }

    // --- assemble branch count, stabilizer, i-map ---
    long stab_wild = fd.wild ? p : 1;
    long stab_order = stab_wild * fd.m_prime;
    fd.branch_count = (cover.degree()) / stab_order;
    auto G = fd.G;
    // standalone stabilizer with family metadata, embedded index-coherently
    if (cover.type == CoverSpec::Type::Composite) {
        if (stab_wild > 1 && fd.m_prime > 1) {
            fd.stab = std::make_shared<FiniteGroup>(
                FiniteGroup::product(FiniteGroup::cyclic(p), FiniteGroup::cyclic(fd.m_prime)));
            fd.stab_embed.resize(stab_order);
            for (long a = 0; a < p; ++a)
                for (long l = 0; l < fd.m_prime; ++l)
                    fd.stab_embed[l * p + a] =
                        G->product_encode((int)a, (int)((l * fd.g0) % cover.m));
        } else if (stab_wild > 1) {
            fd.stab = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(p));
            fd.stab_embed.resize(p);
            for (long a = 0; a < p; ++a) fd.stab_embed[a] = G->product_encode((int)a, 0);
        } else if (fd.m_prime > 1) {
            fd.stab = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(fd.m_prime));
            fd.stab_embed.resize(fd.m_prime);
            for (long l = 0; l < fd.m_prime; ++l)
                fd.stab_embed[l] = G->product_encode(0, (int)((l * fd.g0) % cover.m));
        } else {
            fd.stab = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(1));
            fd.stab_embed = {0};
        }
    } else if (cover.type == CoverSpec::Type::ArtinSchreier) {
        fd.stab = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(stab_wild));
        fd.stab_embed.resize(stab_wild);
        for (long a = 0; a < stab_wild; ++a) fd.stab_embed[a] = (int)a;
    } else {  // Kummer
        fd.stab = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(fd.m_prime));
        fd.stab_embed.resize(fd.m_prime);
        for (long l = 0; l < fd.m_prime; ++l) fd.stab_embed[l] = (int)((l * fd.g0) % cover.m);
    }
    if ((long)fd.stab->size() != stab_order)
        throw err(Error::Code::CheckFailed, "stabilizer order mismatch");

    // generator exponents: x n0/p + y d0/m + k = 1/(stab_wild * m'),
    // solvable by CRT since p does not divide n0 m' and gcd(d0/g0, m') = 1
    {
        long mp = fd.m_prime;
        if (fd.wild && mp > 1) {
            fd.gen_x = detail::inv_mod(fd.n0 * mp % p, p);
            fd.gen_y = detail::inv_mod((fd.d0 / fd.g0) * p % mp, mp);
            fd.gen_k = to_long(Int(1 - fd.gen_x * fd.n0 * mp - fd.gen_y * (fd.d0 / fd.g0) * p) /
                               Int(p * mp));
        } else if (fd.wild) {
            fd.gen_x = detail::inv_mod(fd.n0 % p, p);
            fd.gen_y = 0;
            fd.gen_k = to_long(Int(1 - fd.gen_x * fd.n0) / Int(p));
        } else if (mp > 1) {
            fd.gen_x = 0;
            fd.gen_y = detail::inv_mod((fd.d0 / fd.g0) % mp, mp);
            fd.gen_k = to_long(Int(1 - fd.gen_y * (fd.d0 / fd.g0)) / Int(mp));
        }
    }

    // i-map on the stabilizer
    fd.profile.G = fd.stab;
    fd.profile.i.assign(fd.stab->size(), Z2Val{0, 0});
    Rat epsL = fd.eps_L();
    for (int s = 1; s < fd.stab->size(); ++s) {
        int gfull = fd.stab_embed[s];
        bool tame_part = false, wild_part = false;
        if (cover.type == CoverSpec::Type::Composite) {
            auto [a, c] = G->product_decode(gfull);
            tame_part = (c != 0);
            wild_part = (a != 0);
        } else if (cover.type == CoverSpec::Type::ArtinSchreier) {
            wild_part = true;
        } else {
            tame_part = true;
        }
        if (tame_part) {
            fd.profile.i[s] = Z2Val{0, epsL};
        } else if (wild_part) {
            fd.profile.i[s] =
                Z2Val{fd.lambda_alpha / p, epsL - Rat(fd.n0 * fd.m_prime) * epsL};
        }
    }
    fd.profile.validate();

    // naive-root orbit valuations on all of G
    fd.naive_alpha.assign(G->size(), Rat(0));
    fd.naive_beta.assign(G->size(), Rat(0));
    if (has_kummer) {
        ValuedSeries ut = cover.u.in_model(fd.field).rescaled(t);
        Z2Val w = ut.gauss_z2_valuation_at(Rat(0));
        for (int gf = 1; gf < G->size(); ++gf) {
            bool kum_moved, as_moved;
            if (cover.type == CoverSpec::Type::Composite) {
                auto [a, c] = G->product_decode(gf);
                as_moved = (a != 0);
                kum_moved = (c != 0);
            } else {
                as_moved = false;
                kum_moved = true;
            }
            Z2Val vk{w.alpha / cover.m, w.beta / cover.m};
            if (kum_moved && as_moved) {
                // v(s + (zeta^c - 1) y_K): distinct values take the lex min
                Z2Val zero{0, 0};
                if (vk == zero)
                    throw err(Error::Code::UnsupportedCover,
                              "naive primitive element degenerates at this radius");
                Z2Val vmin = vk < zero ? vk : zero;
                fd.naive_alpha[gf] = vmin.alpha;
                fd.naive_beta[gf] = vmin.beta;
            } else if (kum_moved) {
                fd.naive_alpha[gf] = vk.alpha;
                fd.naive_beta[gf] = vk.beta;
            }  // as_moved only: v(s) = 0
        }
    }
    return fd;
}

// ---- discriminant pipelines ----

// defining polynomial in y over the xi-series ring (not for composite)
inline PolyY cover_polynomial(const CoverSpec& cover) {
    const CoeffModel& M = cover.model;
    auto one = ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 0);
    if (cover.type == CoverSpec::Type::Kummer) {
        PolyY P;
        P.coeffs.assign(cover.m + 1, ValuedSeries::zero(M));
        P.coeffs[cover.m] = one;
        P.coeffs[0] = -cover.u;
        return P;
    }
    if (cover.type == CoverSpec::Type::ArtinSchreier) {
        PolyY P;
        P.coeffs.assign(M.p + 1, ValuedSeries::zero(M));
        P.coeffs[M.p] = one;
        P.coeffs[1] = -one;
        P.coeffs[0] = -cover.g;
        return P;
    }
    throw err(Error::Code::UnsupportedCover, "no single defining polynomial for this family");
}

// discriminant of the naive model as a series on the disc; the fiber-product
// order uses d(A (x) B) = d(A)^{deg B} d(B)^{deg A}
inline ValuedSeries naive_discriminant_series(const CoverSpec& cover) {
    const CoeffModel& M = cover.model;
    switch (cover.type) {
        case CoverSpec::Type::Kummer:
        case CoverSpec::Type::ArtinSchreier:
            return discriminant_in_y(cover_polynomial(cover), M);
        case CoverSpec::Type::Composite: {
            auto dA = discriminant_in_y(cover_polynomial(CoverSpec::artin_schreier(M, cover.g)), M);
            auto dB =
                discriminant_in_y(cover_polynomial(CoverSpec::kummer(M, cover.m, cover.u)), M);
            ValuedSeries out = ValuedSeries::monomial(M, Coeff::from_rational(M, 1), 0);
            for (long i = 0; i < cover.m; ++i) out = out * dA;
            for (long i = 0; i < M.p; ++i) out = out * dB;
            return out;
        }
        case CoverSpec::Type::AnnulusMap:
            throw err(Error::Code::UnsupportedCover, "use annulus_discriminant");
    }
    throw err(Error::Code::UnsupportedCover, "unknown cover type");
}

struct ResultantDiscriminant {
    PLFunction fn;        // t -> v_t(disc_y P), naive model
    bool monogenic;       // naive root = normalized generator at every sampled breakpoint
};

inline ResultantDiscriminant discriminant_fn_resultant(const CoverSpec& cover, const Rat& lo,
                                                       const std::optional<Rat>& hi) {
    ValuedSeries disc = naive_discriminant_series(cover);
    ResultantDiscriminant out{gauss_valuation_fn(disc, lo, hi), true};
    std::vector<Rat> samples = out.fn.breaks();
    samples.push_back(lo);
    if (hi) samples.push_back(*hi);
    for (const Rat& t : samples) {
        auto fd = fiber_branches(cover, t);
        if (!fd.naive_monogenic) out.monogenic = false;
    }
    return out;
}

// alpha-valuation of the normalized-model discriminant at radius t:
// sum over branches of [G_tau : 1] sum_{sigma != 1} alpha(i(sigma))
inline Rat normalized_disc_alpha(const FiberData& fd) {
    Rat s = 0;
    for (int g = 1; g < fd.stab->size(); ++g) s += fd.profile.i[g].alpha;
    return Rat(fd.branch_count) * Rat(fd.stab->size()) * s;
}

// alpha-valuation of the naive-order discriminant via the root orbit:
// |G| sum_{sigma != 1} alpha(v(sigma Y - Y))
inline Rat naive_disc_alpha(const FiberData& fd) {
    Rat s = 0;
    for (int g = 1; g < fd.G->size(); ++g) s += fd.naive_alpha[g];
    return Rat(fd.G->size()) * s;
}

// ---- Lütkebohmert closed form on annuli ----

struct AnnulusDiscriminant {
    Rat del_alpha;  // additive |d_f[t]|
    long sigma;     // Weierstrass order of f'
    long nu;        // sigma - d + 1
};

inline AnnulusDiscriminant annulus_discriminant(const CoverSpec& spec, const Rat& t) {
    if (spec.type != CoverSpec::Type::AnnulusMap)
        throw err(Error::Code::UnsupportedCover, "annulus_discriminant needs an annulus map");
    if (t < spec.window_lo || t > spec.window_hi)
        throw err(Error::Code::OutOfDomain, "t outside the annulus window");
    const CoeffModel& M = spec.model;
    // f = xi^d (1 + h)
    ValuedSeries f = spec.h.shifted(spec.d);
    f.set_term(spec.d, f.terms().count(spec.d)
                           ? f.terms().at(spec.d) + Coeff::from_rational(M, 1)
                           : Coeff::from_rational(M, 1));
    ValuedSeries fp = f.derivative();
    long sigma = weierstrass_order(fp, spec.window_lo / spec.d, spec.window_hi / spec.d);
    long nu = sigma - spec.d + 1;
    AnnulusDiscriminant out{Rat(0), sigma, nu};
    if (nu == 0) {
        out.del_alpha = Rat(spec.d) * Coeff::from_rational(M, Rat(spec.d)).valuation();
    } else {
        auto it = spec.h.terms().find(nu);
        if (it == spec.h.terms().end())
            throw err(Error::Code::CheckFailed, "h_nu missing despite order computation");
        Coeff nuh = it->second * Coeff::from_rational(M, Rat(nu));
        out.del_alpha = Rat(spec.d) * nuh.valuation() + Rat(nu) * t;
    }
    return out;
}

// ---- interval decomposition ----

namespace detail {

// candidate breakpoints: hull breaks, vertex-line zero crossings, and the
// crossings generated by up to two levels of p-division (reduction moves)
inline std::vector<Rat> candidate_cuts(const CoverSpec& cover, const Rat& lo, const Rat& hi) {
    std::set<Rat> cuts;
    auto add = [&](const Rat& t) {
        if (t > lo && t < hi) cuts.insert(t);
    };
    auto harvest = [&](const ValuedSeries& f) {
        if (f.terms().empty()) return;
        NewtonPolygon np = newton_polygon(f);
        for (const Rat& b : np.breakpoints()) add(b);
        std::vector<std::pair<Rat, Rat>> lines;  // value(t) = v + n t
        for (const auto& vx : np.vertices) lines.push_back({vx.val, Rat(vx.exp)});
        long p = cover.model.p;
        std::vector<std::pair<Rat, Rat>> all = lines;
        for (int depth = 1; depth <= 2; ++depth)
            for (const auto& [v, n] : lines) {
                Rat scale = 1;
                for (int i = 0; i < depth; ++i) scale /= p;
                all.push_back({v * scale, n * scale});
            }
        for (size_t a = 0; a < all.size(); ++a) {
            if (all[a].second != 0) add(-all[a].first / all[a].second);
            for (size_t b = a + 1; b < all.size(); ++b) {
                if (all[a].second == all[b].second) continue;
                add((all[b].first - all[a].first) / (all[a].second - all[b].second));
            }
        }
    };
    if (cover.type != CoverSpec::Type::Kummer) harvest(cover.g);
    if (cover.type != CoverSpec::Type::ArtinSchreier) harvest(cover.u);
    return std::vector<Rat>(cuts.begin(), cuts.end());
}

struct IntervalShape {
    long branch_count;
    long stab_order;
    bool wild;
    long n0, m_prime, d0;
    bool operator==(const IntervalShape& o) const {
        return branch_count == o.branch_count && stab_order == o.stab_order && wild == o.wild &&
               n0 == o.n0 && m_prime == o.m_prime && d0 == o.d0;
    }
};

inline IntervalShape shape_of(const FiberData& fd) {
    return IntervalShape{fd.branch_count, fd.stab->size(), fd.wild, fd.n0, fd.m_prime, fd.d0};
}

}  // namespace detail

struct CoverInterval {
    Rat lo, hi;
    FiberData rep;      // fiber at the midpoint
    Rat lambda_slope;   // d lambda_alpha / dt on the interval (0 if tame)
    long sigma;         // total order of the derivative over the interval
    long delta;         // number of branches
    long nu;            // sigma - d + delta is the discriminant slope; nu = slope
};

// partition [lo, hi] into maximal intervals of constant branch shape, with
// lambda_alpha affine on each; verified by interior sampling, refined by
// bisection when a candidate breakpoint was missed
inline std::vector<CoverInterval> slope_decomposition(const CoverSpec& cover, const Rat& lo,
                                                      const Rat& hi) {
    if (cover.type == CoverSpec::Type::AnnulusMap) {
        auto mid = annulus_discriminant(cover, (lo + hi) / 2);
        CoverInterval iv{lo, hi, FiberData{}, Rat(0), mid.sigma, 1,
                         mid.sigma - cover.d + 1};
        return {iv};
    }
    std::vector<Rat> cuts = detail::candidate_cuts(cover, lo, hi);
    std::vector<Rat> bounds;
    bounds.push_back(lo);
    for (const Rat& c : cuts) bounds.push_back(c);
    bounds.push_back(hi);

    std::vector<CoverInterval> out;
    size_t guard = 0;
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        Rat a = bounds[i], b = bounds[i + 1];
        if (a == b) continue;
        // verify constant shape and affine lambda at three interior points
        for (int depth = 0;; ++depth) {
            if (++guard > 4096 || depth > 12)
                throw err(Error::Code::UnsupportedCover, "constancy detection failed");
            Rat t1 = a + (b - a) / 4, t2 = a + (b - a) / 2, t3 = a + (b - a) * 3 / 4;
            auto f1 = fiber_branches(cover, t1);
            auto f2 = fiber_branches(cover, t2);
            auto f3 = fiber_branches(cover, t3);
            bool same = detail::shape_of(f1) == detail::shape_of(f2) &&
                        detail::shape_of(f2) == detail::shape_of(f3);
            bool affine = true;
            if (same && f2.wild) {
                Rat s12 = (f2.lambda_alpha - f1.lambda_alpha) / (t2 - t1);
                Rat s23 = (f3.lambda_alpha - f2.lambda_alpha) / (t3 - t2);
                affine = (s12 == s23);
            }
            if (same && affine) {
                long ph = f2.wild ? cover.model.p : 1;
                long sig_branch = ph * f2.m_prime - 1 -
                                  (f2.wild ? f2.n0 * f2.m_prime * (cover.model.p - 1) : 0);
                CoverInterval iv;
                iv.lo = a;
                iv.hi = b;
                iv.rep = f2;
                iv.lambda_slope = f2.wild ? (f2.lambda_alpha - f1.lambda_alpha) / (t2 - t1) : Rat(0);
                iv.delta = f2.branch_count;
                iv.sigma = f2.branch_count * sig_branch;
                iv.nu = iv.sigma - cover.degree() + iv.delta;
                out.push_back(iv);
                break;
            }
            // a breakpoint slipped through the candidates: bisect
            bounds.insert(bounds.begin() + i + 1, t2);
            b = t2;
        }
    }
    // merge neighbours with identical shape and slope
    std::vector<CoverInterval> merged;
    for (auto& iv : out) {
        if (!merged.empty() && detail::shape_of(merged.back().rep) == detail::shape_of(iv.rep) &&
            merged.back().lambda_slope == iv.lambda_slope) {
            merged.back().hi = iv.hi;
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

// sup-norm-1 generator whose residue generates the branch extension
struct GeneratorDesc {
    long x = 0, y = 0, k = 0;  // w = z_A^x z_K^y T^k
    Rat wild_scale;            // z_A = y_root * pi^{wild_scale}
    Rat tame_scale;            // z_K-normalization exponent (alpha)
    std::string text;
};

inline GeneratorDesc normalized_generator(const CoverSpec& cover, const FiberData& fd) {
    GeneratorDesc gd;
    gd.x = fd.gen_x;
    gd.y = fd.gen_y;
    gd.k = fd.gen_k;
    gd.wild_scale = fd.wild ? fd.lambda_alpha / cover.model.p : Rat(0);
    gd.tame_scale = 0;
    if (cover.type != CoverSpec::Type::ArtinSchreier && !cover.u.terms().empty()) {
        auto v = cover.u.rescaled(fd.t).gauss_valuation_at(Rat(0));
        gd.tame_scale = *v / cover.m;
    }
    std::string txt = "w = ";
    if (fd.wild || fd.m_prime > 1) {
        if (gd.x) txt += "z_A^" + std::to_string(gd.x) + " ";
        if (gd.y) txt += "z_K^" + std::to_string(gd.y) + " ";
        if (gd.k) txt += "T^" + std::to_string(gd.k) + " ";
        txt += "(z_A = y_AS * pi^{" + rat_str(gd.wild_scale) + "}, z_K = y_Kum * pi^{-" +
               rat_str(gd.tame_scale) + "})";
    } else {
        txt += "the naive root (unramified branch)";
    }
    gd.text = txt;
    return gd;
}

}  // namespace ramiflow

#endif
