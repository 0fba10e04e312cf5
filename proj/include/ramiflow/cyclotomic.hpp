#ifndef RAMIFLOW_CYCLOTOMIC_HPP
#define RAMIFLOW_CYCLOTOMIC_HPP

#include <memory>
#include <vector>

#include "ramiflow/rational.hpp"

namespace ramiflow {

// Q(zeta_N) as Q[x]/(Phi_N), elements as rational coefficient vectors.
class Cyclo {
public:
    using Elem = std::vector<Rat>;

    explicit Cyclo(long N) : N_(N), phi_(cyclotomic_polynomial(N)) {
        deg_ = (long)phi_.size() - 1;
    }

    long N() const { return N_; }
    long degree() const { return deg_; }

    Elem zero() const { return Elem(deg_, Rat(0)); }

    Elem from_rat(const Rat& r) const {
        Elem e = zero();
        if (deg_ > 0) e[0] = r;
        return e;
    }

    Elem one() const { return from_rat(Rat(1)); }

    // zeta_N^k reduced mod Phi_N
    Elem zeta_pow(long k) const {
        k %= N_;
        if (k < 0) k += N_;
        std::vector<Rat> x(k + 1, Rat(0));
        x[k] = 1;
        return reduce(x);
    }

    bool is_zero(const Elem& a) const {
        for (const auto& c : a)
            if (c != 0) return false;
        return true;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem c(deg_);
        for (long i = 0; i < deg_; ++i) c[i] = a[i] + b[i];
        return c;
    }

    Elem sub(const Elem& a, const Elem& b) const {
        Elem c(deg_);
        for (long i = 0; i < deg_; ++i) c[i] = a[i] - b[i];
        return c;
    }

    Elem neg(const Elem& a) const {
        Elem c(deg_);
        for (long i = 0; i < deg_; ++i) c[i] = -a[i];
        return c;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<Rat> prod(2 * deg_ - 1, Rat(0));
        for (long i = 0; i < deg_; ++i) {
            if (a[i] == 0) continue;
            for (long j = 0; j < deg_; ++j) prod[i + j] += a[i] * b[j];
        }
        return reduce(prod);
    }

    Elem scale(const Elem& a, const Rat& c) const {
        Elem r = a;
        for (auto& x : r) x *= c;
        return r;
    }

    bool is_rational(const Elem& a) const {
        for (long i = 1; i < deg_; ++i)
            if (a[i] != 0) return false;
        return true;
    }

    Rat rational_part(const Elem& a) const {
        if (!is_rational(a))
            throw err(Error::Code::NotIntegral, "cyclotomic value is not rational");
        return a[0];
    }

    static std::vector<Rat> cyclotomic_polynomial(long N) {
        // Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d, exact division over Z
        std::vector<std::vector<Int>> cache(N + 1);
        for (long n = 1; n <= N; ++n) {
            if (N % n != 0) continue;
            std::vector<Int> num(n + 1, Int(0));
            num[0] = -1;
            num[n] = 1;
            for (long d = 1; d < n; ++d) {
                if (n % d != 0) continue;
                num = poly_div_exact(num, cache[d]);
            }
            cache[n] = num;
        }
        std::vector<Rat> out;
        for (const auto& c : cache[N]) out.push_back(Rat(c));
        return out;
    }

private:
    long N_, deg_;
    std::vector<Rat> phi_;  // monic, little-endian

    Elem reduce(std::vector<Rat> v) const {
        for (long d = (long)v.size() - 1; d >= deg_; --d) {
            Rat c = v[d];
            if (c == 0) continue;
            for (long i = 0; i <= deg_; ++i) v[d - deg_ + i] -= c * phi_[i];
        }
        v.resize(deg_);
        return v;
    }

    static std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
        long dn = (long)num.size() - 1, dd = (long)den.size() - 1;
        std::vector<Int> q(dn - dd + 1, Int(0));
        for (long d = dn; d >= dd; --d) {
            Int c = num[d];
            if (c == 0) continue;
            q[d - dd] = c;  // den is monic
            for (long i = 0; i <= dd; ++i) num[d - dd + i] -= c * den[i];
        }
        return q;
    }
};

}  // namespace ramiflow

#endif
