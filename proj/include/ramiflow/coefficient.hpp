#ifndef RAMIFLOW_COEFFICIENT_HPP
#define RAMIFLOW_COEFFICIENT_HPP

#include <map>
#include <memory>
#include <optional>

#include "ramiflow/finite_field.hpp"
#include "ramiflow/rational.hpp"

namespace ramiflow {

// The two coefficient fields: fragments of F_{p^m}((pi)) with rational
// pi-exponents (equal characteristic), and Q with its p-adic valuation
// (mixed characteristic).  Both give every nonzero element an exact
// valuation in Q, normalized v(pi) = 1 resp. v(p) = 1.
struct CoeffModel {
    enum class Kind { EqualChar, MixedChar };
    Kind kind;
    long p;
    std::shared_ptr<const Fq> residue;  // F_{p^m} (EqualChar) or F_p (MixedChar)

    static CoeffModel equal_char(long p, long m = 1) {
        return CoeffModel{Kind::EqualChar, p, std::make_shared<Fq>(p, m)};
    }
    static CoeffModel mixed_char(long p) {
        return CoeffModel{Kind::MixedChar, p, std::make_shared<Fq>(p, 1)};
    }

    bool compatible(const CoeffModel& o) const {
        return kind == o.kind && p == o.p && residue->degree() == o.residue->degree();
    }

    // Same model over a residue field extension of degree factor k.
    CoeffModel enlarged(long k) const {
        if (kind == Kind::MixedChar) return *this;
        return CoeffModel{kind, p, std::make_shared<Fq>(p, residue->degree() * k)};
    }
};

class Coeff {
public:
    Coeff() = default;

    static Coeff zero(const CoeffModel& model) {
        Coeff c;
        c.model_ = model;
        return c;
    }

    static Coeff from_rational(const CoeffModel& model, const Rat& x) {
        Coeff c;
        c.model_ = model;
        if (x == 0) return c;
        if (model.kind == CoeffModel::Kind::MixedChar) {
            c.value_ = x;
            return c;
        }
        // rational constants embed through the residue field at pi-exponent 0
        c.terms_[Rat(0)] = model.residue->from_rat(x);
        return c;
    }

    // unit * pi^e
    static Coeff monomial(const CoeffModel& model, const Fq::Elem& unit, const Rat& e) {
        Coeff c;
        c.model_ = model;
        if (model.kind == CoeffModel::Kind::MixedChar) {
            if (!is_integer(e))
                throw err(Error::Code::UnsupportedCover, "fractional p-exponent in mixed characteristic");
            Rat u(unit[0]);
            if (unit[0] % model.p == 0) throw err(Error::Code::ZeroInput, "unit divisible by p");
            Int pe = 1;
            for (Int i = 0; i < (rat_num(e) < 0 ? -rat_num(e) : rat_num(e)); ++i) pe *= model.p;
            c.value_ = rat_num(e) >= 0 ? u * Rat(pe) : u / Rat(pe);
            return c;
        }
        if (!model.residue->is_zero(unit)) c.terms_[e] = unit;
        return c;
    }

    static Coeff pi_power(const CoeffModel& model, const Rat& e) {
        return monomial(model, model.residue->one(), e);
    }

    const CoeffModel& model() const { return model_; }

    bool is_zero() const {
        if (model_.kind == CoeffModel::Kind::MixedChar) return value_ == 0;
        return terms_.empty();
    }

    Rat valuation() const {
        if (is_zero()) throw err(Error::Code::ZeroInput, "valuation of zero");
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            Int num = rat_num(value_), den = rat_den(value_);
            long v = 0;
            Int p(model_.p);
            while (num % p == 0) { num /= p; ++v; }
            while (den % p == 0) { den /= p; --v; }
            return Rat(v);
        }
        return terms_.begin()->first;
    }

    // residue-field unit of the lowest term (x * pi^{-v(x)} mod m)
    Fq::Elem leading_unit() const {
        if (is_zero()) throw err(Error::Code::ZeroInput, "unit of zero");
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            Rat v = valuation();
            Int p(model_.p);
            Int num = rat_num(value_), den = rat_den(value_);
            long e = to_long(rat_num(v));
            for (long i = 0; i < e; ++i) num /= p;
            for (long i = 0; i < -e; ++i) den /= p;
            long n = static_cast<long>(num % p), d = static_cast<long>(den % p);
            if (n < 0) n += model_.p;
            if (d < 0) d += model_.p;
            return model_.residue->from_int(n * mod_pow(d, model_.p - 2, model_.p));
        }
        return terms_.begin()->second;
    }

    Coeff operator+(const Coeff& o) const {
        check(o);
        Coeff c = *this;
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            c.value_ += o.value_;
            return c;
        }
        for (const auto& [e, u] : o.terms_) {
            auto it = c.terms_.find(e);
            if (it == c.terms_.end()) {
                c.terms_[e] = u;
            } else {
                it->second = model_.residue->add(it->second, u);
                if (model_.residue->is_zero(it->second)) c.terms_.erase(it);
            }
        }
        return c;
    }

    Coeff operator-() const {
        Coeff c = *this;
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            c.value_ = -c.value_;
            return c;
        }
        for (auto& [e, u] : c.terms_) u = model_.residue->neg(u);
        return c;
    }

    Coeff operator-(const Coeff& o) const { return *this + (-o); }

    Coeff operator*(const Coeff& o) const {
        check(o);
        Coeff c = Coeff::zero(model_);
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            c.value_ = value_ * o.value_;
            return c;
        }
        for (const auto& [e1, u1] : terms_)
            for (const auto& [e2, u2] : o.terms_) {
                Rat e = e1 + e2;
                Fq::Elem u = model_.residue->mul(u1, u2);
                auto it = c.terms_.find(e);
                if (it == c.terms_.end()) {
                    if (!model_.residue->is_zero(u)) c.terms_[e] = u;
                } else {
                    it->second = model_.residue->add(it->second, u);
                    if (model_.residue->is_zero(it->second)) c.terms_.erase(it);
                }
            }
        return c;
    }

    bool operator==(const Coeff& o) const {
        if (model_.kind != o.model_.kind) return false;
        if (model_.kind == CoeffModel::Kind::MixedChar) return value_ == o.value_;
        return terms_ == o.terms_;
    }

    bool is_monomial() const {
        if (model_.kind == CoeffModel::Kind::MixedChar) return value_ != 0;
        return terms_.size() == 1;
    }

    // exact inverse, monomials only (all unit inversions in the pipelines are monomial)
    Coeff monomial_inverse() const {
        if (!is_monomial()) throw err(Error::Code::NotInvertible, "inverse of non-monomial");
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            Coeff c = Coeff::zero(model_);
            c.value_ = Rat(1) / value_;
            return c;
        }
        const auto& [e, u] = *terms_.begin();
        return monomial(model_, model_.residue->inv(u), -e);
    }

    // exact n-th root of a monomial; fails if the unit has no root in the residue field
    std::optional<Coeff> monomial_root(long n) const {
        if (!is_monomial()) return std::nullopt;
        if (model_.kind == CoeffModel::Kind::MixedChar) {
            // exact rational n-th root or nothing
            auto iroot = [n](Int v) -> std::optional<Int> {
                if (v < 0) return std::nullopt;
                Int lo = 0, hi = v + 1;
                while (lo < hi) {
                    Int mid = (lo + hi) / 2, pw = 1;
                    for (long i = 0; i < n && pw <= v; ++i) pw *= mid;
                    if (pw < v)
                        lo = mid + 1;
                    else
                        hi = mid;
                }
                Int pw = 1;
                for (long i = 0; i < n; ++i) pw *= lo;
                if (pw == v) return lo;
                return std::nullopt;
            };
            bool neg = value_ < 0;
            if (neg && n % 2 == 0) return std::nullopt;
            Rat a = neg ? -value_ : value_;
            auto rn = iroot(rat_num(a)), rd = iroot(rat_den(a));
            if (!rn || !rd) return std::nullopt;
            Coeff c = Coeff::zero(model_);
            c.value_ = Rat(*rn, *rd) * (neg ? -1 : 1);
            return c;
        }
        const auto& [e, u] = *terms_.begin();
        auto r = model_.residue->nth_root(u, n);
        if (!r) return std::nullopt;
        return monomial(model_, *r, e / n);
    }

    // map through a residue-field enlargement
    Coeff in_model(const CoeffModel& big) const {
        if (model_.kind == CoeffModel::Kind::MixedChar) return *this;
        Coeff c = Coeff::zero(big);
        for (const auto& [e, u] : terms_) c.terms_[e] = big.residue->embed_from(*model_.residue, u);
        return c;
    }

    const std::map<Rat, Fq::Elem>& terms() const { return terms_; }
    const Rat& rational_value() const { return value_; }

private:
    CoeffModel model_{CoeffModel::Kind::EqualChar, 2, nullptr};
    std::map<Rat, Fq::Elem> terms_;  // EqualChar
    Rat value_ = 0;                  // MixedChar

    void check(const Coeff& o) const {
        if (!model_.compatible(o.model_))
            throw err(Error::Code::DomainMismatch, "coefficient model mismatch");
    }
};

inline Rat coeff_valuation(const Coeff& c) { return c.valuation(); }

}  // namespace ramiflow

#endif
