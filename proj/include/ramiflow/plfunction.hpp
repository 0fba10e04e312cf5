#ifndef RAMIFLOW_PLFUNCTION_HPP
#define RAMIFLOW_PLFUNCTION_HPP

#include <algorithm>
#include <vector>

#include "ramiflow/newton.hpp"

namespace ramiflow {

// Exact step function of the radius parameter: constant on the open
// intervals cut out by the breakpoints.  Point values at breakpoints are
// irrelevant for integration and are not stored.
struct StepFunction {
    std::vector<Rat> breaks;  // strictly increasing
    std::vector<Rat> values;  // breaks.size() + 1 region values

    bool support_bounded_above() const { return values.empty() || values.back() == 0; }

    Rat value_at(const Rat& t) const {
        size_t i = 0;
        while (i < breaks.size() && t >= breaks[i]) ++i;
        return values[i];
    }
};

inline Rat integrate_step(const StepFunction& g, const Rat& a, const std::optional<Rat>& b) {
    if (!b) {
        if (!g.support_bounded_above())
            throw err(Error::Code::UnboundedSupport, "integral to infinity of unbounded step");
        Rat hi = g.breaks.empty() ? a : rat_max(a, g.breaks.back());
        return integrate_step(g, a, hi);
    }
    if (a > *b) return -integrate_step(g, *b, a);
    Rat total = 0;
    Rat lo = a;
    for (size_t i = 0; i <= g.breaks.size(); ++i) {
        Rat hi = (i < g.breaks.size()) ? g.breaks[i] : *b;
        if (hi > *b) hi = *b;
        if (hi > lo) total += g.values[i] * (hi - lo);
        lo = rat_max(lo, hi);
        if (lo >= *b) break;
    }
    return total;
}

// Continuous piecewise-linear function on [t_lo, t_hi] (t_hi may be +inf),
// determined by an anchor value and one slope per segment.
class PLFunction {
public:
    PLFunction() = default;
    PLFunction(Rat t_lo, std::optional<Rat> t_hi, Rat anchor_value, std::vector<Rat> breaks,
               std::vector<Rat> slopes)
        : t_lo_(std::move(t_lo)),
          t_hi_(std::move(t_hi)),
          anchor_value_(std::move(anchor_value)),
          breaks_(std::move(breaks)),
          slopes_(std::move(slopes)) {
        if (slopes_.size() != breaks_.size() + 1)
            throw err(Error::Code::DomainMismatch, "slope/breakpoint count mismatch");
        canonicalize();
    }

    static PLFunction constant(Rat t_lo, std::optional<Rat> t_hi, Rat value) {
        return PLFunction(std::move(t_lo), std::move(t_hi), std::move(value), {}, {Rat(0)});
    }

    static PLFunction affine(Rat t_lo, std::optional<Rat> t_hi, Rat value_at_lo, Rat slope) {
        return PLFunction(std::move(t_lo), std::move(t_hi), std::move(value_at_lo), {},
                          {std::move(slope)});
    }

    const Rat& t_lo() const { return t_lo_; }
    const std::optional<Rat>& t_hi() const { return t_hi_; }
    const Rat& anchor_value() const { return anchor_value_; }
    const std::vector<Rat>& breaks() const { return breaks_; }
    const std::vector<Rat>& slopes() const { return slopes_; }

    bool in_domain(const Rat& t) const { return t >= t_lo_ && (!t_hi_ || t <= *t_hi_); }

    Rat eval(const Rat& t) const {
        if (!in_domain(t)) throw err(Error::Code::OutOfDomain, "PL evaluation outside domain");
        Rat v = anchor_value_;
        Rat pos = t_lo_;
        for (size_t i = 0; i <= breaks_.size(); ++i) {
            Rat seg_end = (i < breaks_.size() && breaks_[i] < t) ? breaks_[i] : t;
            if (seg_end > pos) {
                v += slopes_[i] * (seg_end - pos);
                pos = seg_end;
            }
            if (seg_end == t) break;
        }
        return v;
    }

    Rat right_slope(const Rat& t) const {
        if (!in_domain(t) || (t_hi_ && t >= *t_hi_))
            throw err(Error::Code::OutOfDomain, "no right slope here");
        size_t i = 0;
        while (i < breaks_.size() && t >= breaks_[i]) ++i;
        return slopes_[i];
    }

    StepFunction right_derivative() const {
        return StepFunction{breaks_, slopes_};
    }

    PLFunction scaled(const Rat& c) const {
        PLFunction r = *this;
        r.anchor_value_ *= c;
        for (auto& s : r.slopes_) s *= c;
        r.canonicalize();
        return r;
    }

    PLFunction shifted(const Rat& c) const {
        PLFunction r = *this;
        r.anchor_value_ += c;
        return r;
    }

    PLFunction operator+(const PLFunction& o) const {
        check_domain(o);
        std::vector<Rat> cuts = merged_breaks(o);
        std::vector<Rat> slopes;
        Rat pos = t_lo_;
        for (size_t i = 0; i <= cuts.size(); ++i)
            slopes.push_back(right_slope_at_cell(cuts, i) + o.right_slope_at_cell(cuts, i));
        return PLFunction(t_lo_, t_hi_, anchor_value_ + o.anchor_value_, cuts, slopes);
    }

    PLFunction operator-(const PLFunction& o) const { return *this + o.scaled(Rat(-1)); }

    static PLFunction min(const PLFunction& f, const PLFunction& g) {
        f.check_domain(g);
        std::vector<Rat> cuts = f.merged_breaks(g);
        // insert crossing points cell by cell
        std::vector<Rat> all;
        for (size_t i = 0; i <= cuts.size(); ++i) {
            Rat lo = (i == 0) ? f.t_lo_ : cuts[i - 1];
            std::optional<Rat> hi =
                (i < cuts.size()) ? std::optional<Rat>(cuts[i]) : f.t_hi_;
            Rat fv = f.eval(lo), gv = g.eval(lo);
            Rat fs = f.slope_in_cell(cuts, i), gs = g.slope_in_cell(cuts, i);
            if (i > 0) all.push_back(lo);
            if (fs != gs) {
                Rat cross = lo + (gv - fv) / (fs - gs);
                if (cross > lo && (!hi || cross < *hi)) all.push_back(cross);
            }
        }
        std::vector<Rat> slopes;
        Rat start_val = rat_min(f.eval(f.t_lo_), g.eval(f.t_lo_));
        for (size_t i = 0; i <= all.size(); ++i) {
            Rat lo = (i == 0) ? f.t_lo_ : all[i - 1];
            // sample strictly inside the cell to pick the lower branch
            Rat probe;
            if (i < all.size())
                probe = (lo + all[i]) / 2;
            else if (f.t_hi_)
                probe = (lo + *f.t_hi_) / 2;
            else
                probe = lo + 1;
            Rat fv = f.eval(probe), gv = g.eval(probe);
            slopes.push_back(fv <= gv ? f.slope_at(probe) : g.slope_at(probe));
        }
        return PLFunction(f.t_lo_, f.t_hi_, start_val, all, slopes);
    }

    // inverse of a strictly increasing PL bijection
    PLFunction inverse() const {
        for (const auto& s : slopes_)
            if (s <= 0) throw err(Error::Code::NotInvertible, "PL inverse needs positive slopes");
        std::vector<Rat> ibreaks;
        std::vector<Rat> islopes;
        Rat v = anchor_value_;
        Rat pos = t_lo_;
        for (size_t i = 0; i <= breaks_.size(); ++i) {
            islopes.push_back(Rat(1) / slopes_[i]);
            if (i < breaks_.size()) {
                v += slopes_[i] * (breaks_[i] - pos);
                pos = breaks_[i];
                ibreaks.push_back(v);
            }
        }
        std::optional<Rat> ihi;
        if (t_hi_) ihi = eval(*t_hi_);
        return PLFunction(anchor_value_, ihi, t_lo_, ibreaks, islopes);
    }

    bool operator==(const PLFunction& o) const {
        return t_lo_ == o.t_lo_ && t_hi_ == o.t_hi_ && anchor_value_ == o.anchor_value_ &&
               breaks_ == o.breaks_ && slopes_ == o.slopes_;
    }

private:
    Rat t_lo_ = 0;
    std::optional<Rat> t_hi_;
    Rat anchor_value_ = 0;        // value at t_lo
    std::vector<Rat> breaks_;
    std::vector<Rat> slopes_;

    void check_domain(const PLFunction& o) const {
        if (t_lo_ != o.t_lo_ || t_hi_ != o.t_hi_)
            throw err(Error::Code::DomainMismatch, "PL domain mismatch");
    }

    void canonicalize() {
        // drop breakpoints outside the open interior, then merge equal slopes
        std::vector<Rat> nb;
        std::vector<Rat> ns;
        ns.push_back(slopes_[0]);
        for (size_t i = 0; i < breaks_.size(); ++i) {
            bool inside = breaks_[i] > t_lo_ && (!t_hi_ || breaks_[i] < *t_hi_);
            if (!inside) {
                if (breaks_[i] <= t_lo_) ns.back() = slopes_[i + 1];
                continue;
            }
            if (slopes_[i + 1] == ns.back()) continue;
            nb.push_back(breaks_[i]);
            ns.push_back(slopes_[i + 1]);
        }
        breaks_ = std::move(nb);
        slopes_ = std::move(ns);
    }

    std::vector<Rat> merged_breaks(const PLFunction& o) const {
        std::vector<Rat> cuts = breaks_;
        cuts.insert(cuts.end(), o.breaks_.begin(), o.breaks_.end());
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        return cuts;
    }

    Rat right_slope_at_cell(const std::vector<Rat>& cuts, size_t i) const {
        Rat lo = (i == 0) ? t_lo_ : cuts[i - 1];
        size_t k = 0;
        while (k < breaks_.size() && lo >= breaks_[k]) ++k;
        return slopes_[k];
    }

    Rat slope_in_cell(const std::vector<Rat>& cuts, size_t i) const {
        return right_slope_at_cell(cuts, i);
    }

    Rat slope_at(const Rat& probe) const {
        size_t k = 0;
        while (k < breaks_.size() && probe >= breaks_[k]) ++k;
        return slopes_[k];
    }
};

// f o g for increasing g with range inside the domain of f
inline PLFunction compose_increasing(const PLFunction& f, const PLFunction& g) {
    for (const Rat& s : g.slopes())
        if (s <= 0) throw err(Error::Code::NotInvertible, "composition needs increasing inner");
    PLFunction ginv = g.inverse();
    std::vector<Rat> breaks = g.breaks();
    for (const Rat& b : f.breaks())
        if (ginv.in_domain(b)) breaks.push_back(ginv.eval(b));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<Rat> keep;
    for (const Rat& b : breaks)
        if (b > g.t_lo() && (!g.t_hi() || b < *g.t_hi())) keep.push_back(b);
    std::vector<Rat> slopes;
    for (size_t i = 0; i <= keep.size(); ++i) {
        Rat lo = (i == 0) ? g.t_lo() : keep[i - 1];
        Rat probe;
        if (i < keep.size())
            probe = (lo + keep[i]) / 2;
        else if (g.t_hi())
            probe = (lo + *g.t_hi()) / 2;
        else
            probe = lo + 1;
        slopes.push_back(f.right_slope(g.eval(probe)) * g.right_slope(probe));
    }
    return PLFunction(g.t_lo(), g.t_hi(), f.eval(g.eval(g.t_lo())), keep, slopes);
}

enum class PLCombine { Add, Scale, Min };

inline PLFunction pl_combine(PLCombine op, const PLFunction& f, const PLFunction& g) {
    switch (op) {
        case PLCombine::Add: return f + g;
        case PLCombine::Min: return PLFunction::min(f, g);
        default: throw err(Error::Code::DomainMismatch, "scale takes a scalar");
    }
}

inline PLFunction pl_combine(PLCombine op, const PLFunction& f, const Rat& c) {
    if (op != PLCombine::Scale) throw err(Error::Code::DomainMismatch, "binary op takes two PLs");
    return f.scaled(c);
}

inline Rat pl_right_derivative(const PLFunction& f, const Rat& t) { return f.right_slope(t); }

// t -> v_t(f) on [a, b] from the Newton polygon: concave, slopes are the
// active hull exponents, breakpoints the negated edge slopes.
inline PLFunction gauss_valuation_fn(const ValuedSeries& f, const Rat& a,
                                     const std::optional<Rat>& b) {
    if (f.terms().empty())
        throw err(f.known_zero() ? Error::Code::ZeroInput : Error::Code::InsufficientPrecision,
                  "no stored terms");
    NewtonPolygon np = newton_polygon(f);
    std::vector<Rat> cuts;
    for (const Rat& bp : np.breakpoints()) cuts.push_back(bp);
    std::sort(cuts.begin(), cuts.end());  // now increasing in t
    std::vector<Rat> breaks;
    std::vector<Rat> slopes;
    // active exponent for t below the smallest cut is the largest one
    std::vector<long> exps;
    for (const auto& v : np.vertices) exps.push_back(v.exp);
    // as t increases past -edge_slope(i), the active vertex moves to smaller exponent
    std::vector<Rat> all_slopes;
    for (auto it = exps.rbegin(); it != exps.rend(); ++it) all_slopes.push_back(Rat(*it));
    // clip to [a, b]
    size_t first = 0;
    while (first < cuts.size() && cuts[first] <= a) ++first;
    for (size_t i = first; i < cuts.size(); ++i) {
        if (b && cuts[i] >= *b) break;
        breaks.push_back(cuts[i]);
    }
    slopes.assign(all_slopes.begin() + first, all_slopes.begin() + first + breaks.size() + 1);
    auto v0 = f.gauss_valuation_at(a);
    PLFunction pl(a, b, *v0, breaks, slopes);
    // exactness across the domain: the tail floor may not undercut anywhere.
    // Both the floor and the function are PL, so endpoint + breakpoint checks
    // suffice (beyond the last breakpoint the floor slope, xi_precision,
    // exceeds every hull exponent).
    if (!f.exact()) {
        if (a < 0)
            throw err(Error::Code::InsufficientPrecision, "negative radius with truncated tail");
        std::vector<Rat> checkpoints = breaks;
        checkpoints.push_back(a);
        if (b) checkpoints.push_back(*b);
        for (const auto& t : checkpoints) {
            Rat floor = f.tail_val() + Rat(*f.precision()) * t;
            if (floor < pl.eval(t))
                throw err(Error::Code::InsufficientPrecision,
                          "tail bound too weak across the domain");
        }
    }
    return pl;
}

// Weierstrass order of f on the annulus with radius exponents in
// [t_min, t_max]: the unique exponent d with f = c xi^d (1 + h),
// |h|_sup < 1; fails when two hull vertices are active on the window.
inline long weierstrass_order(const ValuedSeries& f, const Rat& t_min, const Rat& t_max,
                              bool closed = true) {
    if (f.terms().empty())
        throw err(f.known_zero() ? Error::Code::ZeroInput : Error::Code::InsufficientPrecision,
                  "no stored terms");
    NewtonPolygon np = newton_polygon(f);
    for (const Rat& bp : np.breakpoints()) {
        bool inside = closed ? (bp >= t_min && bp <= t_max) : (bp > t_min && bp < t_max);
        if (inside)
            throw err(Error::Code::NotInvertible, "two hull vertices active on the annulus");
    }
    Rat mid = (t_min + t_max) / 2;
    const auto& vx = np.active_vertex(mid);
    if (!f.exact()) {
        for (const Rat& t : {t_min, t_max})
            if (f.tail_could_reach(t, vx.val + t * vx.exp))
                throw err(Error::Code::InsufficientPrecision, "tail could join the hull");
    }
    return vx.exp;
}

}  // namespace ramiflow

#endif
