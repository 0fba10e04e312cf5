#ifndef RAMIFLOW_GROUP_HPP
#define RAMIFLOW_GROUP_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ramiflow/cyclotomic.hpp"

namespace ramiflow {

// Concrete finite group with multiplication table; the supported families
// are the ones arising from the cover constructions plus their products.
class FiniteGroup {
public:
    enum class Family { Cyclic, ElementaryAbelian, Metacyclic, Product };

    long size() const { return n_; }
    int mul(int a, int b) const { return mul_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int identity() const { return 0; }
    long element_order(int a) const { return order_[a]; }
    long exponent() const { return exponent_; }
    Family family() const { return family_; }
    const std::string& name() const { return name_; }
    bool abelian() const { return abelian_; }

    int conjugate(int g, int x) const { return mul(mul(g, x), inv(g)); }

    const std::vector<std::vector<int>>& classes() const { return classes_; }
    int class_of(int a) const { return class_of_[a]; }

    static FiniteGroup cyclic(long n) {
        FiniteGroup G;
        G.family_ = Family::Cyclic;
        G.name_ = "C" + std::to_string(n);
        G.n_ = n;
        G.cyc_factors_ = {n};
        G.coords_.resize(n);
        for (long a = 0; a < n; ++a) G.coords_[a] = {a};
        G.build_from_coords();
        return G;
    }

    static FiniteGroup elementary_abelian(long p, long k) {
        FiniteGroup G;
        G.family_ = Family::ElementaryAbelian;
        G.name_ = "E" + std::to_string(p) + "^" + std::to_string(k);
        G.n_ = 1;
        for (long i = 0; i < k; ++i) G.n_ *= p;
        G.cyc_factors_.assign(k, p);
        G.coords_.resize(G.n_);
        for (long a = 0; a < G.n_; ++a) {
            long v = a;
            for (long i = 0; i < k; ++i) {
                G.coords_[a].push_back(v % p);
                v /= p;
            }
        }
        G.build_from_coords();
        return G;
    }

    // Z/q x| Z/m with tau sigma tau^{-1} = sigma^r.  r = 1 gives Z/q x Z/m.
    static FiniteGroup metacyclic(long q, long m, long r) {
        r %= q;
        if (r < 0) r += q;
        if (mod_pow(r, m, q) != 1 % q)
            throw err(Error::Code::GroupMismatch, "action exponent must have order dividing m");
        if (r == 1) {
            FiniteGroup G = product(cyclic(q), cyclic(m));
            G.family_ = Family::Metacyclic;
            G.name_ = "M(" + std::to_string(q) + "," + std::to_string(m) + ";1)";
            return G;
        }
        FiniteGroup G;
        G.family_ = Family::Metacyclic;
        G.name_ = "M(" + std::to_string(q) + "," + std::to_string(m) + ";" + std::to_string(r) + ")";
        G.n_ = q * m;
        G.meta_q_ = q;
        G.meta_m_ = m;
        G.meta_r_ = r;
        auto enc = [q](long a, long b) { return (int)(b * q + a); };
        G.mul_.assign(G.n_, std::vector<int>(G.n_));
        for (long a = 0; a < q; ++a)
            for (long b = 0; b < m; ++b)
                for (long a2 = 0; a2 < q; ++a2)
                    for (long b2 = 0; b2 < m; ++b2) {
                        long rb = mod_pow(r, b, q);
                        G.mul_[enc(a, b)][enc(a2, b2)] =
                            enc((a + rb * a2) % q, (b + b2) % m);
                    }
        G.finish();
        return G;
    }

    static FiniteGroup product(const FiniteGroup& A, const FiniteGroup& B) {
        FiniteGroup G;
        G.family_ = Family::Product;
        G.name_ = A.name_ + "x" + B.name_;
        G.n_ = A.n_ * B.n_;
        G.prod_a_ = std::make_shared<FiniteGroup>(A);
        G.prod_b_ = std::make_shared<FiniteGroup>(B);
        G.mul_.assign(G.n_, std::vector<int>(G.n_));
        for (int a1 = 0; a1 < A.n_; ++a1)
            for (int b1 = 0; b1 < B.n_; ++b1)
                for (int a2 = 0; a2 < A.n_; ++a2)
                    for (int b2 = 0; b2 < B.n_; ++b2)
                        G.mul_[b1 * A.n_ + a1][b2 * A.n_ + a2] =
                            B.mul(b1, b2) * A.n_ + A.mul(a1, a2);
        if (!A.cyc_factors_.empty() && !B.cyc_factors_.empty()) {
            G.cyc_factors_ = A.cyc_factors_;
            G.cyc_factors_.insert(G.cyc_factors_.end(), B.cyc_factors_.begin(),
                                  B.cyc_factors_.end());
            G.coords_.resize(G.n_);
            for (int b = 0; b < B.n_; ++b)
                for (int a = 0; a < A.n_; ++a) {
                    auto c = A.coords_[a];
                    c.insert(c.end(), B.coords_[b].begin(), B.coords_[b].end());
                    G.coords_[b * A.n_ + a] = c;
                }
        }
        G.finish();
        return G;
    }

    int product_encode(int a, int b) const { return b * (int)prod_a_->size() + a; }
    std::pair<int, int> product_decode(int g) const {
        int an = (int)prod_a_->size();
        return {g % an, g / an};
    }
    const FiniteGroup& factor_a() const { return *prod_a_; }
    const FiniteGroup& factor_b() const { return *prod_b_; }

    // abelian coordinate data (empty for nonabelian metacyclic)
    const std::vector<long>& cyclic_factors() const { return cyc_factors_; }
    const std::vector<std::vector<long>>& coords() const { return coords_; }
    long meta_q() const { return meta_q_; }
    long meta_m() const { return meta_m_; }
    long meta_r() const { return meta_r_; }

    // --- subgroup machinery (brute force, |G| small) ---

    std::vector<int> generated_by(std::vector<int> gens) const {
        std::set<int> s{0};
        for (int g : gens) s.insert(g);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(s.begin(), s.end());
            for (int a : cur)
                for (int b : cur)
                    if (s.insert(mul(a, b)).second) grew = true;
        }
        return std::vector<int>(s.begin(), s.end());
    }

    bool is_subgroup(const std::vector<int>& H) const {
        std::set<int> s(H.begin(), H.end());
        if (!s.count(0)) return false;
        for (int a : H)
            for (int b : H)
                if (!s.count(mul(a, inv(b)))) return false;
        return true;
    }

    bool is_normal(const std::vector<int>& H) const {
        std::set<int> s(H.begin(), H.end());
        for (int g = 0; g < n_; ++g)
            for (int h : H)
                if (!s.count(conjugate(g, h))) return false;
        return true;
    }

    std::vector<std::vector<int>> all_subgroups() const {
        std::set<std::vector<int>> found;
        found.insert({0});
        bool grew = true;
        while (grew) {
            grew = false;
            auto snapshot = found;
            for (const auto& H : snapshot)
                for (int g = 0; g < n_; ++g) {
                    auto gens = H;
                    gens.push_back(g);
                    auto K = generated_by(gens);
                    if (found.insert(K).second) grew = true;
                }
        }
        return std::vector<std::vector<int>>(found.begin(), found.end());
    }

    std::vector<std::vector<int>> normal_subgroups() const {
        std::vector<std::vector<int>> out;
        for (auto& H : all_subgroups())
            if (is_normal(H)) out.push_back(H);
        return out;
    }

    // quotient by a normal subgroup; proj maps elements onto quotient indices
    FiniteGroup quotient(const std::vector<int>& H, std::vector<int>& proj) const {
        if (!is_normal(H)) throw err(Error::Code::NotNormal, "quotient by non-normal subgroup");
        std::set<int> hs(H.begin(), H.end());
        proj.assign(n_, -1);
        std::vector<int> reps;
        for (int g = 0; g < n_; ++g) {
            if (proj[g] >= 0) continue;
            int idx = (int)reps.size();
            for (int h : H) proj[mul(g, h)] = idx;
            reps.push_back(g);
        }
        // force the identity coset to index 0
        if (proj[0] != 0) {
            int z = proj[0];
            for (auto& p : proj) {
                if (p == 0)
                    p = z;
                else if (p == z)
                    p = 0;
            }
            std::swap(reps[0], reps[z]);
        }
        FiniteGroup Q;
        Q.family_ = Family::Product;  // structure recovered from the table
        Q.name_ = name_ + "/H" + std::to_string(H.size());
        Q.n_ = (long)reps.size();
        Q.mul_.assign(Q.n_, std::vector<int>(Q.n_));
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = 0; j < reps.size(); ++j)
                Q.mul_[i][j] = proj[mul(reps[i], reps[j])];
        Q.finish();
        return Q;
    }

    bool operator==(const FiniteGroup& o) const { return mul_ == o.mul_; }

    // standalone group object for a subgroup; embed maps its indices into G
    std::pair<FiniteGroup, std::vector<int>> subgroup_group(const std::vector<int>& H) const {
        if (!is_subgroup(H)) throw err(Error::Code::GroupMismatch, "not a subgroup");
        std::vector<int> embed = H;
        std::sort(embed.begin(), embed.end());  // identity (0) first
        std::map<int, int> idx;
        for (size_t k = 0; k < embed.size(); ++k) idx[embed[k]] = (int)k;
        FiniteGroup S;
        S.family_ = Family::Product;
        S.name_ = name_ + ".sub" + std::to_string(H.size());
        S.n_ = (long)embed.size();
        S.mul_.assign(S.n_, std::vector<int>(S.n_));
        for (size_t a = 0; a < embed.size(); ++a)
            for (size_t b = 0; b < embed.size(); ++b)
                S.mul_[a][b] = idx[mul(embed[a], embed[b])];
        S.finish();
        return {S, embed};
    }

private:
    Family family_ = Family::Cyclic;
    std::string name_;
    long n_ = 1;
    std::vector<std::vector<int>> mul_;
    std::vector<int> inv_;
    std::vector<long> order_;
    long exponent_ = 1;
    bool abelian_ = true;
    std::vector<std::vector<int>> classes_;
    std::vector<int> class_of_;
    // family metadata
    std::vector<long> cyc_factors_;
    std::vector<std::vector<long>> coords_;
    long meta_q_ = 0, meta_m_ = 0, meta_r_ = 0;
    std::shared_ptr<FiniteGroup> prod_a_, prod_b_;

    void build_from_coords() {
        mul_.assign(n_, std::vector<int>(n_));
        long k = (long)cyc_factors_.size();
        std::map<std::vector<long>, int> lookup;
        for (int a = 0; a < n_; ++a) lookup[coords_[a]] = a;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) {
                std::vector<long> c(k);
                for (long i = 0; i < k; ++i)
                    c[i] = (coords_[a][i] + coords_[b][i]) % cyc_factors_[i];
                mul_[a][b] = lookup[c];
            }
        finish();
    }

    void finish() {
        inv_.assign(n_, -1);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                if (mul_[a][b] == 0) inv_[a] = b;
        order_.assign(n_, 1);
        for (int a = 0; a < n_; ++a) {
            int x = a;
            long o = 1;
            while (x != 0) {
                x = mul_[x][a];
                ++o;
            }
            order_[a] = o;
        }
        exponent_ = 1;
        for (int a = 0; a < n_; ++a) exponent_ = std::lcm(exponent_, order_[a]);
        abelian_ = true;
        for (int a = 0; a < n_ && abelian_; ++a)
            for (int b = 0; b < n_; ++b)
                if (mul_[a][b] != mul_[b][a]) {
                    abelian_ = false;
                    break;
                }
        class_of_.assign(n_, -1);
        classes_.clear();
        for (int a = 0; a < n_; ++a) {
            if (class_of_[a] >= 0) continue;
            std::set<int> cls;
            for (int g = 0; g < n_; ++g) cls.insert(conjugate(g, a));
            std::vector<int> v(cls.begin(), cls.end());
            for (int x : v) class_of_[x] = (int)classes_.size();
            classes_.push_back(v);
        }
    }
};

}  // namespace ramiflow

#endif
