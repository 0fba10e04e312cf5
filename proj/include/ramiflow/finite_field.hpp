#ifndef RAMIFLOW_FINITE_FIELD_HPP
#define RAMIFLOW_FINITE_FIELD_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "ramiflow/rational.hpp"

namespace ramiflow {

// F_{p^m} as F_p[x]/(modulus), modulus monic irreducible of degree m.
// Elements are coefficient vectors of length m (little-endian), entries in [0,p).
// Fields are small (p^m bounded by the fixtures), so searches are brute force.
class Fq {
public:
    Fq(long p, long m) : p_(p), m_(m) {
        if (m_ == 1) {
            modulus_ = {0, 1};  // x
        } else {
            modulus_ = find_irreducible(p, m);
        }
        card_ = 1;
        for (long i = 0; i < m_; ++i) card_ *= p_;
    }

    long p() const { return p_; }
    long degree() const { return m_; }
    long card() const { return card_; }

    using Elem = std::vector<long>;

    Elem zero() const { return Elem(m_, 0); }
    Elem one() const { return from_int(1); }

    Elem from_int(long v) const {
        Elem e(m_, 0);
        v %= p_;
        if (v < 0) v += p_;
        e[0] = v;
        return e;
    }

    // Reduce a rational with p-prime denominator into the prime field.
    Elem from_rat(const Rat& r) const {
        Int num = rat_num(r), den = rat_den(r);
        Int pn = Int(p_);
        if (den % pn == 0) throw err(Error::Code::ZeroInput, "denominator divisible by p");
        long n = static_cast<long>(num % pn), d = static_cast<long>(den % pn);
        if (n < 0) n += p_;
        if (d < 0) d += p_;
        long dinv = mod_pow(d, p_ - 2, p_);
        return from_int((n * dinv) % p_);
    }

    bool is_zero(const Elem& a) const {
        return std::all_of(a.begin(), a.end(), [](long c) { return c == 0; });
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem c(m_);
        for (long i = 0; i < m_; ++i) c[i] = (a[i] + b[i]) % p_;
        return c;
    }

    Elem neg(const Elem& a) const {
        Elem c(m_);
        for (long i = 0; i < m_; ++i) c[i] = (p_ - a[i]) % p_;
        return c;
    }

    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<long> prod(2 * m_ - 1, 0);
        for (long i = 0; i < m_; ++i)
            for (long j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
        // reduce mod modulus (monic)
        for (long d = 2 * m_ - 2; d >= m_; --d) {
            long c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            for (long i = 0; i < m_; ++i)
                prod[d - m_ + i] = (prod[d - m_ + i] + c * (p_ - modulus_[i])) % p_;
        }
        prod.resize(m_);
        return prod;
    }

    Elem pow(Elem a, Int e) const {
        Int order = Int(card_) - 1;
        if (e < 0) e = order - ((-e) % order);
        e %= order == 0 ? Int(1) : order;
        Elem r = one();
        while (e > 0) {
            if ((e & 1) != 0) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw err(Error::Code::ZeroInput, "inverse of zero");
        return pow(a, Int(card_) - 2);
    }

    // index <-> element, for brute-force scans
    Elem elem_at(long idx) const {
        Elem e(m_);
        for (long i = 0; i < m_; ++i) {
            e[i] = idx % p_;
            idx /= p_;
        }
        return e;
    }

    std::optional<Elem> nth_root(const Elem& a, long n) const {
        if (is_zero(a)) return zero();
        for (long i = 1; i < card_; ++i) {
            Elem x = elem_at(i);
            if (pow(x, Int(n)) == a) return x;
        }
        return std::nullopt;
    }

    // x^p - x = a
    std::optional<Elem> artin_schreier_root(const Elem& a) const {
        for (long i = 0; i < card_; ++i) {
            Elem x = elem_at(i);
            if (sub(pow(x, Int(p_)), x) == a) return x;
        }
        return std::nullopt;
    }

    bool has_primitive_root_of_unity(long n) const { return (card_ - 1) % n == 0; }

    std::optional<Elem> primitive_root_of_unity(long n) const {
        if (!has_primitive_root_of_unity(n)) return std::nullopt;
        for (long i = 1; i < card_; ++i) {
            Elem x = elem_at(i);
            if (pow(x, Int(n)) == one()) {
                bool prim = true;
                for (long d = 1; d < n; ++d)
                    if (n % d == 0 && pow(x, Int(d)) == one()) { prim = false; break; }
                if (prim) return x;
            }
        }
        return std::nullopt;
    }

    // Embed an element of a degree-d subfield model into this field,
    // by sending the subfield generator to a root of its modulus here.
    Elem embed_from(const Fq& sub, const Elem& a) const {
        if (sub.p_ != p_) throw err(Error::Code::GroupMismatch, "different characteristic");
        if (sub.m_ == 1) return from_int(a[0]);
        if (m_ % sub.m_ != 0)
            throw err(Error::Code::ResidueFieldTooSmall, "no subfield embedding");
        Elem root = zero();
        bool found = false;
        for (long i = 0; i < card_ && !found; ++i) {
            Elem x = elem_at(i);
            // evaluate sub.modulus_ at x
            Elem acc = from_int(sub.modulus_.back());
            for (long d = (long)sub.modulus_.size() - 2; d >= 0; --d)
                acc = add(mul(acc, x), from_int(sub.modulus_[d]));
            if (is_zero(acc)) { root = x; found = true; }
        }
        if (!found) throw err(Error::Code::ResidueFieldTooSmall, "modulus has no root");
        Elem acc = zero();
        for (long d = sub.m_ - 1; d >= 0; --d) acc = add(mul(acc, root), from_int(a[d]));
        return acc;
    }

private:
    long p_, m_, card_;
    std::vector<long> modulus_;  // little-endian, degree m, monic

    static std::vector<long> find_irreducible(long p, long m) {
        // scan monic degree-m polynomials, reject those with a factor of degree <= m/2
        std::vector<long> mod(m + 1, 0);
        mod[m] = 1;
        long total = 1;
        for (long i = 0; i < m; ++i) total *= p;
        for (long code = 0; code < total; ++code) {
            long c = code;
            for (long i = 0; i < m; ++i) {
                mod[i] = c % p;
                c /= p;
            }
            if (mod[0] == 0) continue;
            if (is_irreducible(mod, p, m)) return mod;
        }
        throw err(Error::Code::ResidueFieldTooSmall, "no irreducible polynomial found");
    }

    static bool is_irreducible(const std::vector<long>& f, long p, long m) {
        // trial division by all monic polynomials of degree 1..m/2
        for (long d = 1; 2 * d <= m; ++d) {
            long total = 1;
            for (long i = 0; i < d; ++i) total *= p;
            std::vector<long> g(d + 1, 0);
            g[d] = 1;
            for (long code = 0; code < total; ++code) {
                long c = code;
                for (long i = 0; i < d; ++i) {
                    g[i] = c % p;
                    c /= p;
                }
                if (divides(g, f, p)) return false;
            }
        }
        return true;
    }

    // g monic; remainder of f by g is zero?
    static bool divides(const std::vector<long>& g, std::vector<long> f, long p) {
        long dg = (long)g.size() - 1;
        auto deg = [](const std::vector<long>& h) {
            long d = (long)h.size() - 1;
            while (d >= 0 && h[d] == 0) --d;
            return d;
        };
        long df = deg(f);
        while (df >= dg) {
            long c = f[df];
            for (long i = 0; i <= dg; ++i)
                f[df - dg + i] = ((f[df - dg + i] - c * g[i]) % p + p * p) % p;
            df = deg(f);
        }
        return df < 0;
    }
};

}  // namespace ramiflow

#endif
