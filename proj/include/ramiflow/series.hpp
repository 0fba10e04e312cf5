#ifndef RAMIFLOW_SERIES_HPP
#define RAMIFLOW_SERIES_HPP

#include <map>
#include <optional>

#include "ramiflow/coefficient.hpp"

namespace ramiflow {

// Lexicographically ordered value of the composite Z^2-valuation at a Gauss
// point: alpha = Gauss valuation, beta = order of the residue at the origin
// of the special fiber.  beta is kept in eps_K units (beta(eps_K) = 1), so
// branch values land in (1/|G|)Z.
struct Z2Val {
    Rat alpha;
    Rat beta;

    bool operator==(const Z2Val& o) const { return alpha == o.alpha && beta == o.beta; }
    bool operator!=(const Z2Val& o) const { return !(*this == o); }
    bool operator<(const Z2Val& o) const {
        return alpha < o.alpha || (alpha == o.alpha && beta < o.beta);
    }
    bool operator<=(const Z2Val& o) const { return *this < o || *this == o; }
    bool operator>(const Z2Val& o) const { return o < *this; }
    bool operator>=(const Z2Val& o) const { return o <= *this; }
    Z2Val operator+(const Z2Val& o) const { return {alpha + o.alpha, beta + o.beta}; }
    Z2Val operator-(const Z2Val& o) const { return {alpha - o.alpha, beta - o.beta}; }
    Z2Val operator*(const Rat& c) const { return {alpha * c, beta * c}; }
};

inline std::string z2_str(const Z2Val& v) {
    return "(" + rat_str(v.alpha) + ", " + rat_str(v.beta) + ")";
}

// Truncated Laurent series in the disc coordinate xi.  Stored exponents are
// < xi_precision; coefficients with exponent >= xi_precision are unknown but
// have valuation >= tail_val.  An absent precision means the series is exact.
struct Domain {
    // annulus v(xi) in [r_hi ... r_lo]: outer radius exponent lo <= inner hi.
    // A disc D^(r) is lo = r, hi = +infinity (unbounded inner).
    Rat lo;
    std::optional<Rat> hi;

    static Domain disc(const Rat& r) { return Domain{r, std::nullopt}; }
    static Domain annulus(const Rat& outer, const Rat& inner) {
        if (inner < outer) throw err(Error::Code::DomainMismatch, "annulus radii out of order");
        return Domain{outer, inner};
    }
    bool contains(const Rat& t) const { return t >= lo && (!hi || t <= *hi); }
};

class ValuedSeries {
public:
    ValuedSeries() = default;
    explicit ValuedSeries(const CoeffModel& model, Domain dom = Domain::disc(Rat(0)))
        : model_(model), domain_(dom) {}

    static ValuedSeries zero(const CoeffModel& model) { return ValuedSeries(model); }

    static ValuedSeries monomial(const CoeffModel& model, const Coeff& c, long xi_exp) {
        ValuedSeries f(model);
        if (!c.is_zero()) f.terms_[xi_exp] = c;
        return f;
    }

    const CoeffModel& model() const { return model_; }
    const Domain& domain() const { return domain_; }
    void set_domain(const Domain& d) { domain_ = d; }

    const std::map<long, Coeff>& terms() const { return terms_; }

    bool exact() const { return !prec_; }
    std::optional<long> precision() const { return prec_; }
    const Rat& tail_val() const { return tail_val_; }

    void truncate(long prec, const Rat& tail_bound) {
        std::optional<Rat> dropped;
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->first >= prec) {
                Rat v = it->second.valuation();
                dropped = dropped ? rat_min(*dropped, v) : v;
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
        Rat t = tail_bound;
        if (prec_) t = rat_min(t, tail_val_);
        if (dropped) t = rat_min(t, *dropped);
        prec_ = prec_ ? std::min(*prec_, prec) : prec;
        tail_val_ = t;
    }

    void set_term(long n, const Coeff& c) {
        if (prec_ && n >= *prec_) throw err(Error::Code::InsufficientPrecision, "term beyond precision");
        if (c.is_zero())
            terms_.erase(n);
        else
            terms_[n] = c;
    }

    bool known_zero() const { return terms_.empty() && exact(); }

    long min_exp() const {
        if (terms_.empty()) throw err(Error::Code::ZeroInput, "empty series");
        return terms_.begin()->first;
    }

    // lower bound on the valuation of every coefficient, stored or not
    std::optional<Rat> coeff_floor() const {
        std::optional<Rat> f;
        for (const auto& [n, c] : terms_) {
            Rat v = c.valuation();
            f = f ? rat_min(*f, v) : v;
        }
        if (prec_) f = f ? rat_min(*f, tail_val_) : tail_val_;
        return f;
    }

    ValuedSeries operator+(const ValuedSeries& o) const {
        check(o);
        ValuedSeries r(model_, domain_);
        r.terms_ = terms_;
        for (const auto& [n, c] : o.terms_) {
            auto it = r.terms_.find(n);
            if (it == r.terms_.end()) {
                r.terms_[n] = c;
            } else {
                Coeff s = it->second + c;
                if (s.is_zero())
                    r.terms_.erase(it);
                else
                    it->second = s;
            }
        }
        if (prec_ || o.prec_) {
            long p = std::min(prec_.value_or(std::numeric_limits<long>::max()),
                              o.prec_.value_or(std::numeric_limits<long>::max()));
            Rat t = prec_ ? tail_val_ : Rat(0);
            if (prec_ && o.prec_)
                t = rat_min(tail_val_, o.tail_val_);
            else if (o.prec_)
                t = o.tail_val_;
            r.truncate(p, t);
        }
        return r;
    }

    ValuedSeries operator-() const {
        ValuedSeries r = *this;
        for (auto& [n, c] : r.terms_) c = -c;
        return r;
    }

    ValuedSeries operator-(const ValuedSeries& o) const { return *this + (-o); }

    ValuedSeries operator*(const ValuedSeries& o) const {
        check(o);
        ValuedSeries r(model_, domain_);
        if (known_zero() || o.known_zero()) return r;
        for (const auto& [n1, c1] : terms_)
            for (const auto& [n2, c2] : o.terms_) {
                Coeff pr = c1 * c2;
                if (pr.is_zero()) continue;
                long n = n1 + n2;
                auto it = r.terms_.find(n);
                if (it == r.terms_.end()) {
                    r.terms_[n] = pr;
                } else {
                    Coeff s = it->second + pr;
                    if (s.is_zero())
                        r.terms_.erase(it);
                    else
                        it->second = s;
                }
            }
        if (prec_ || o.prec_) {
            auto low_exp = [](const ValuedSeries& s) -> std::optional<long> {
                if (!s.terms_.empty())
                    return s.prec_ ? std::min(s.min_exp(), *s.prec_) : s.min_exp();
                if (s.prec_) return *s.prec_;
                return std::nullopt;  // exactly zero
            };
            long p = std::numeric_limits<long>::max();
            if (auto lo = low_exp(o); prec_ && lo) p = std::min(p, *prec_ + *lo);
            if (auto lo = low_exp(*this); o.prec_ && lo) p = std::min(p, *o.prec_ + *lo);
            auto f1 = coeff_floor(), f2 = o.coeff_floor();
            Rat t = (f1 && f2) ? *f1 + *f2 : Rat(0);
            r.truncate(p, t);
        }
        return r;
    }

    ValuedSeries scaled(const Coeff& c) const {
        ValuedSeries r(model_, domain_);
        if (c.is_zero()) return r;
        for (const auto& [n, cf] : terms_) {
            Coeff pr = cf * c;
            if (!pr.is_zero()) r.terms_[n] = pr;
        }
        if (prec_) {
            r.prec_ = prec_;
            r.tail_val_ = tail_val_ + c.valuation();
        }
        return r;
    }

    ValuedSeries shifted(long k) const {  // multiply by xi^k
        ValuedSeries r(model_, domain_);
        for (const auto& [n, c] : terms_) r.terms_[n + k] = c;
        if (prec_) {
            r.prec_ = *prec_ + k;
            r.tail_val_ = tail_val_;
        }
        return r;
    }

    // d/dxi
    ValuedSeries derivative() const {
        ValuedSeries r(model_, domain_);
        for (const auto& [n, c] : terms_) {
            Coeff d = c * Coeff::from_rational(model_, Rat(n));
            if (!d.is_zero()) r.terms_[n - 1] = d;
        }
        if (prec_) {
            r.prec_ = *prec_ - 1;
            r.tail_val_ = tail_val_;  // v(n * a_n) >= v(a_n)
        }
        return r;
    }

    // substitute xi = pi^r * xi', the coordinate change onto the radius-r model
    ValuedSeries rescaled(const Rat& r) const {
        ValuedSeries out(model_, Domain::disc(Rat(0)));
        for (const auto& [n, c] : terms_) {
            Coeff s = c * Coeff::pi_power(model_, r * n);
            if (!s.is_zero()) out.terms_[n] = s;
        }
        if (prec_) {
            out.prec_ = prec_;
            if (r < 0)
                throw err(Error::Code::InsufficientPrecision,
                          "cannot bound tail under negative-radius rescaling");
            out.tail_val_ = tail_val_ + r * Rat(*prec_);
        }
        return out;
    }

    // v_t(f) = min_n (v(a_n) + n t); +infinity (nullopt) iff f is exactly 0.
    std::optional<Rat> gauss_valuation_at(const Rat& t) const {
        if (!domain_.contains(t)) throw err(Error::Code::OutOfDomain, "t outside series domain");
        std::optional<Rat> best;
        for (const auto& [n, c] : terms_) {
            Rat v = c.valuation() + t * n;
            if (!best || v < *best) best = v;
        }
        if (prec_) {
            if (t < 0)
                throw err(Error::Code::InsufficientPrecision,
                          "negative radius with truncated tail");
            Rat floor = tail_val_ + t * (*prec_);
            if (!best || floor < *best)
                throw err(Error::Code::InsufficientPrecision,
                          "tail could undercut the stored minimum");
        }
        return best;  // nullopt: exactly zero
    }

    // (v_t(f), order at the origin of the residue of f * pi^{-v_t(f)})
    Z2Val gauss_z2_valuation_at(const Rat& t) const {
        auto a = gauss_valuation_at(t);
        if (!a) throw err(Error::Code::ZeroInput, "z2 valuation of zero");
        for (const auto& [n, c] : terms_)
            if (c.valuation() + t * n == *a) return Z2Val{*a, Rat(n)};
        throw err(Error::Code::NonComputableResidue, "minimum attained by no stored term");
    }

    // residue of f * pi^{-v_t(f)}: polynomial in the reduced coordinate,
    // exponent -> residue-field unit (the terms attaining the minimum)
    std::map<long, Fq::Elem> residue_at(const Rat& t) const {
        auto a = gauss_valuation_at(t);
        if (!a) throw err(Error::Code::ZeroInput, "residue of zero");
        std::map<long, Fq::Elem> res;
        for (const auto& [n, c] : terms_)
            if (c.valuation() + t * n == *a) res[n] = c.leading_unit();
        return res;
    }

    // can an unknown term reach valuation <= v at radius t?
    bool tail_could_reach(const Rat& t, const Rat& v) const {
        if (!prec_) return false;
        if (t < 0) return true;
        return tail_val_ + t * (*prec_) <= v;
    }

    ValuedSeries in_model(const CoeffModel& big) const {
        ValuedSeries r(big, domain_);
        for (const auto& [n, c] : terms_) r.terms_[n] = c.in_model(big);
        r.prec_ = prec_;
        r.tail_val_ = tail_val_;
        return r;
    }

    bool operator==(const ValuedSeries& o) const {
        return terms_ == o.terms_ && prec_ == o.prec_ && (!prec_ || tail_val_ == o.tail_val_);
    }

private:
    CoeffModel model_{CoeffModel::Kind::EqualChar, 2, nullptr};
    Domain domain_{Rat(0), std::nullopt};
    std::map<long, Coeff> terms_;
    std::optional<long> prec_;
    Rat tail_val_ = 0;

    void check(const ValuedSeries& o) const {
        if (!model_.compatible(o.model_))
            throw err(Error::Code::DomainMismatch, "series model mismatch");
    }
};

inline std::optional<Rat> gauss_valuation_at(const ValuedSeries& f, const Rat& t) {
    return f.gauss_valuation_at(t);
}

inline Z2Val gauss_z2_valuation(const ValuedSeries& f, const Rat& t) {
    return f.gauss_z2_valuation_at(t);
}

}  // namespace ramiflow

#endif
