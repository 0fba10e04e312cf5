#ifndef RAMIFLOW_CONDUCTOR_HPP
#define RAMIFLOW_CONDUCTOR_HPP

#include <atomic>
#include <set>
#include <cstdlib>
#include <thread>

#include "ramiflow/cycles.hpp"

namespace ramiflow {

// a~_f^alpha(t) and sw~_f^beta(t): induced from a branch stabilizer and
// scaled by |G|/|S^(t)| = |G_tau|
struct ConductorFunctions {
    RatClassFunction a_alpha;
    RatClassFunction sw_beta;
};

inline ConductorFunctions conductor_class_functions(const FiberData& fd) {
    auto d = artin_swan(fd.profile);
    Rat scale(fd.stab->size());
    ConductorFunctions out{
        induce_from(d.a_alpha, fd.G, fd.stab_embed).scaled(scale),
        induce_from(d.sw_beta, fd.G, fd.stab_embed).scaled(scale),
    };
    // tau-independence: recompute through a conjugated branch datum
    if (fd.branch_count > 1) {
        int g = 0;
        for (int cand = 1; cand < fd.G->size() && g == 0; ++cand) {
            bool inside = false;
            for (int e : fd.stab_embed)
                if (e == cand) inside = true;
            if (!inside) g = cand;
        }
        std::vector<int> conj_embed(fd.stab_embed.size());
        for (size_t k = 0; k < fd.stab_embed.size(); ++k)
            conj_embed[k] = fd.G->conjugate(g, fd.stab_embed[k]);
        auto again = induce_from(d.a_alpha, fd.G, conj_embed).scaled(scale);
        if (!(again == out.a_alpha))
            throw err(Error::Code::CheckFailed, "conductor depends on the branch choice");
    }
    return out;
}

struct ConductorSample {
    Rat t;
    Rat sw_as;          // <a~^alpha(t), chi>
    Rat phi_s;          // <sw~^beta(t), chi>
    Rat sw_as_direct;   // slope-decomposition route
    Rat del_alpha_norm; // normalized discriminant
    Rat del_alpha_naive;
    long branch_count;
    long stab_order;
};

struct ReportInterval {
    Rat lo, hi;
    Rat value_at_lo;
    Rat slope;     // slope of sw_AS(F, .) on the interval
    Rat phi_s;     // constant on the interval
    long delta;
    long sigma;
    long nu;
};

struct ConductorReport {
    std::vector<ConductorSample> samples;
    std::vector<ReportInterval> intervals;
    PLFunction sw_as_fn;
    bool certified = false;   // intervals derived from Newton-polygon data
    bool monotone_nonincreasing = true;  // observed, not asserted
};

inline ConductorSample conductor_sample(const CoverSpec& cover, const ClassFunction& chiG,
                                        const Rat& t, long ell) {
    auto fd = fiber_branches(cover, t);
    auto fns = conductor_class_functions(fd);
    ConductorSample s;
    s.t = t;
    s.sw_as = pair_rational(fns.a_alpha, chiG);
    s.phi_s = pair_rational(fns.sw_beta, chiG);
    auto chi_stab = restrict_to(chiG, fd.stab, fd.stab_embed);
    auto sd = slope_decompose(chi_stab, as_filtration(fd.profile), ell, cover.model.p);
    s.sw_as_direct = sw_as(sd);
    s.del_alpha_norm = normalized_disc_alpha(fd);
    s.del_alpha_naive = naive_disc_alpha(fd);
    s.branch_count = fd.branch_count;
    s.stab_order = fd.stab->size();
    return s;
}

inline long thread_budget() {
    if (const char* env = std::getenv("RAMIFLOW_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (long)hc : 1;
}

// full radius-indexed run: grid samples plus a certified interval table,
// reassembled into one PL function for sw_AS(F, .)
inline ConductorReport sw_as_function(const CoverSpec& cover, const ClassFunction& chiG,
                                      const Rat& lo, const Rat& hi, const Rat& step,
                                      long ell = 2) {
    if (step <= 0 || hi < lo) throw err(Error::Code::OutOfDomain, "bad range or grid");
    ConductorReport rep;
    // grid, evaluated with bounded parallelism
    std::vector<Rat> grid;
    for (Rat t = lo; t <= hi; t += step) grid.push_back(t);
    rep.samples.resize(grid.size());
    long nthreads = std::min<long>(thread_budget(), (long)grid.size());
    if (nthreads <= 1) {
        for (size_t k = 0; k < grid.size(); ++k)
            rep.samples[k] = conductor_sample(cover, chiG, grid[k], ell);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nthreads);
        for (long w = 0; w < nthreads; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (size_t k = next++; k < grid.size(); k = next++)
                        rep.samples[k] = conductor_sample(cover, chiG, grid[k], ell);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    // certified intervals from the Newton-polygon event analysis
    auto ivs = slope_decomposition(cover, lo, hi);
    Rat anchor;
    std::vector<Rat> breaks;
    std::vector<Rat> slopes;
    bool first = true;
    Rat carried_value;
    for (const auto& iv : ivs) {
        // two interior samples fix the affine piece
        Rat t1 = iv.lo + (iv.hi - iv.lo) / 3;
        Rat t2 = iv.lo + (iv.hi - iv.lo) * 2 / 3;
        auto s1 = conductor_sample(cover, chiG, t1, ell);
        auto s2 = conductor_sample(cover, chiG, t2, ell);
        Rat slope = (s2.sw_as - s1.sw_as) / (t2 - t1);
        Rat at_lo = s1.sw_as - slope * (t1 - iv.lo);
        if (first) {
            anchor = at_lo;
            carried_value = at_lo;
            first = false;
        } else {
            if (carried_value != at_lo)
                throw err(Error::Code::CheckFailed,
                          "sw_AS discontinuous at t = " + rat_str(iv.lo));
            breaks.push_back(iv.lo);
        }
        slopes.push_back(slope);
        carried_value = at_lo + slope * (iv.hi - iv.lo);
        ReportInterval ri;
        ri.lo = iv.lo;
        ri.hi = iv.hi;
        ri.value_at_lo = at_lo;
        ri.slope = slope;
        ri.phi_s = s1.phi_s;
        if (s1.phi_s != s2.phi_s)
            throw err(Error::Code::CheckFailed, "phi_s not constant on an interval");
        ri.delta = iv.delta;
        ri.sigma = iv.sigma;
        ri.nu = iv.nu;
        rep.intervals.push_back(ri);
    }
    rep.sw_as_fn = PLFunction(lo, hi, anchor, breaks, slopes);
    rep.certified = true;
    // the reconstruction must match every sampled value exactly
    for (const auto& s : rep.samples)
        if (rep.sw_as_fn.eval(s.t) != s.sw_as)
            throw err(Error::Code::CheckFailed, "PL reconstruction misses a sample");
    for (size_t k = 0; k + 1 < rep.samples.size(); ++k)
        if (rep.samples[k + 1].sw_as > rep.samples[k].sw_as) rep.monotone_nonincreasing = false;
    return rep;
}

struct MainTheoremVerdict {
    bool continuous = true;  // established during reconstruction
    bool slopes_integral = true;
    bool derivative_matches = true;
    bool phi_s_integral = true;
    std::optional<Rat> offending_t;

    bool all() const {
        return continuous && slopes_integral && derivative_matches && phi_s_integral;
    }
};

// the main structural claims: finitely many integer slopes, and the right
// derivative equals phi_s at every interior sample
inline MainTheoremVerdict verify_main_theorem(const ConductorReport& rep) {
    MainTheoremVerdict v;
    for (const Rat& s : rep.sw_as_fn.slopes())
        if (!is_integer(s)) {
            v.slopes_integral = false;
        }
    for (const auto& s : rep.samples) {
        if (rep.sw_as_fn.t_hi() && s.t >= *rep.sw_as_fn.t_hi()) continue;
        Rat rd = rep.sw_as_fn.right_slope(s.t);
        if (rd != s.phi_s) {
            v.derivative_matches = false;
            if (!v.offending_t) v.offending_t = s.t;
        }
        if (!is_integer(s.phi_s)) v.phi_s_integral = false;
    }
    return v;
}

// ---- the discriminant link ----

enum class QuotientChoice { Trivial, Full, WildFactor, TameFactor };

inline std::optional<CoverSpec> quotient_cover(const CoverSpec& cover, QuotientChoice q) {
    switch (q) {
        case QuotientChoice::Trivial: return cover;
        case QuotientChoice::Full: return std::nullopt;  // X/G = D, everything vanishes
        case QuotientChoice::WildFactor:
            if (cover.type != CoverSpec::Type::Composite)
                throw err(Error::Code::UnsupportedCover, "factor quotients need a composite");
            return CoverSpec::kummer(cover.model, cover.m, cover.u);
        case QuotientChoice::TameFactor:
            if (cover.type != CoverSpec::Type::Composite)
                throw err(Error::Code::UnsupportedCover, "factor quotients need a composite");
            return CoverSpec::artin_schreier(cover.model, cover.g);
    }
    return std::nullopt;
}

inline std::vector<int> quotient_subgroup_elements(const CoverSpec& cover, QuotientChoice q) {
    auto G = cover.group();
    switch (q) {
        case QuotientChoice::Trivial: return {0};
        case QuotientChoice::Full: {
            std::vector<int> all(G->size());
            for (int g = 0; g < G->size(); ++g) all[g] = g;
            return all;
        }
        case QuotientChoice::WildFactor: {
            std::vector<int> H;
            for (long a = 0; a < cover.model.p; ++a) H.push_back(G->product_encode((int)a, 0));
            return H;
        }
        case QuotientChoice::TameFactor: {
            std::vector<int> H;
            for (long c = 0; c < cover.m; ++c) H.push_back(G->product_encode(0, (int)c));
            return H;
        }
    }
    return {0};
}

struct DiscLinkSample {
    Rat t;
    // order lane: naive resultant discriminant against the naive root orbit
    Rat resultant_disc;
    Rat orbit_disc;
    bool order_lane_ok;
    // paper lane: normalized discriminant against the induced conductor pairing
    Rat normalized_disc;
    Rat pairing_alpha;
    bool paper_lane_ok;
    // derivative lane
    Rat pairing_beta;
    Rat slope_law;  // sigma_i - d + delta_f(i) of the quotient cover
    bool derivative_lane_ok;
    bool monogenic;  // lanes coincide when set
};

inline DiscLinkSample verify_discriminant_link_at(const CoverSpec& cover, QuotientChoice q,
                                                  const Rat& t, const Rat& window_hi) {
    DiscLinkSample out;
    out.t = t;
    auto G = cover.group();
    auto F = std::make_shared<Cyclo>(G->exponent());
    auto H = quotient_subgroup_elements(cover, q);
    auto coset = coset_character(G, H, F);
    auto fd = fiber_branches(cover, t);
    auto fns = conductor_class_functions(fd);
    out.pairing_alpha = pair_rational(fns.a_alpha, coset);
    out.pairing_beta = pair_rational(fns.sw_beta, coset);
    auto qc = quotient_cover(cover, q);
    if (!qc) {  // X/G = D: both sides vanish
        out.resultant_disc = out.orbit_disc = out.normalized_disc = 0;
        out.slope_law = 0;
        out.monogenic = true;
    } else {
        auto qfd = fiber_branches(*qc, t);
        ValuedSeries disc = naive_discriminant_series(*qc);
        out.resultant_disc = *disc.gauss_valuation_at(t);
        out.orbit_disc = naive_disc_alpha(qfd);
        out.normalized_disc = normalized_disc_alpha(qfd);
        out.monogenic = qfd.naive_monogenic;
        // slope at t from the quotient cover's interval analysis
        auto ivs = slope_decomposition(*qc, t, window_hi);
        out.slope_law = Rat(ivs.front().nu);
    }
    out.order_lane_ok = (out.resultant_disc == out.orbit_disc);
    out.paper_lane_ok = (out.normalized_disc == out.pairing_alpha);
    out.derivative_lane_ok = (out.pairing_beta == out.slope_law);
    return out;
}

// change of cover: inducing the composite's conductor through the quotient
// G' ->> G reproduces the quotient cover's conductor
inline bool change_of_cover_holds(const CoverSpec& composite, QuotientChoice factor,
                                  const Rat& t) {
    auto qc = quotient_cover(composite, factor);
    if (!qc || qc->type == CoverSpec::Type::Composite)
        throw err(Error::Code::UnsupportedCover, "need a proper factor");
    auto H = quotient_subgroup_elements(composite, factor);
    auto Gp = composite.group();
    std::vector<int> proj;
    auto Q = std::make_shared<FiniteGroup>(Gp->quotient(H, proj));
    // density form of the compatibility: pushing the normalized conductor
    // a~_{f'} through G' ->> G and dividing by the kernel order reproduces
    // a~_f (the un-normalized statement holds fiberwise only when |S| agrees)
    auto big = conductor_class_functions(fiber_branches(composite, t));
    auto small = conductor_class_functions(fiber_branches(*qc, t));
    Rat kinv = Rat(1) / Rat((long)H.size());
    auto pushed_a = push_through_quotient(big.a_alpha, Q, proj).scaled(kinv);
    auto pushed_b = push_through_quotient(big.sw_beta, Q, proj).scaled(kinv);
    // match up to the labeling isomorphism Q = G/H -> group of the quotient cover
    // (both are cyclic of the same order; compare as multisets over element order)
    auto fingerprint = [](const RatClassFunction& f) {
        std::multiset<std::pair<long, std::pair<Int, Int>>> m;
        for (int g = 0; g < f.G->size(); ++g)
            m.insert({f.G->element_order(g), {rat_num(f[g]), rat_den(f[g])}});
        return m;
    };
    return fingerprint(pushed_a) == fingerprint(small.a_alpha) &&
           fingerprint(pushed_b) == fingerprint(small.sw_beta);
}

}  // namespace ramiflow

#endif
