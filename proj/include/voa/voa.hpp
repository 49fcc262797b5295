#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "errors.hpp"
#include "partitions.hpp"
#include "scalar.hpp"
#include "vec.hpp"

namespace voa {

// A concrete VOA truncated to a weight cutoff, with one strong generator:
// the rank-one free boson (generator weight 1, c = 1) or the vacuum Virasoro
// algebra (generator weight 2, central charge a parameter).
//
// Basis labels are PBW partitions; the mode table Y(e_a)_n e_b is built
// lazily by the normal-ordered reconstruction recursion
//   Y(g_{-p} b, z) = (1/(p - wt g)!) : d^{p - wt g} Y(g,z) Y(b,z) :
// and memoized per (a, n, b). The basis extends a little past the public
// cutoff so that normal ordering's transient weight raises stay
// representable; the public module surface enforces the declared cutoff.
template <class K>
class VertexAlgebra {
  public:
    static VertexAlgebra free_boson(int cutoff) {
        check_cutoff(cutoff);
        VertexAlgebra v;
        v.cache_ = std::make_unique<Cache>();
        v.name_ = "heisenberg";
        v.gen_weight_ = 1;
        v.central_charge_ = K(1);
        v.cutoff_ = cutoff;
        v.internal_cutoff_ = cutoff; // oscillator annihilators never raise weight
        v.basis_ = PartitionBasis(v.internal_cutoff_, 1);
        v.conformal_ = vec_scaled(vec_unit<K>(v.basis_.index_of({1, 1})), k_frac<K>(1, 2));
        return v;
    }

    static VertexAlgebra virasoro(K c, int cutoff) {
        check_cutoff(cutoff);
        VertexAlgebra v;
        v.cache_ = std::make_unique<Cache>();
        v.name_ = "virasoro";
        v.gen_weight_ = 2;
        v.central_charge_ = std::move(c);
        v.cutoff_ = cutoff;
        v.internal_cutoff_ = cutoff + cutoff / 2; // slack for transient L(-1) raises
        v.basis_ = PartitionBasis(v.internal_cutoff_, 2);
        v.conformal_ = vec_unit<K>(v.basis_.index_of({2}));
        return v;
    }

    const std::string& name() const { return name_; }
    const K& central_charge() const { return central_charge_; }
    int cutoff() const { return cutoff_; }
    int internal_cutoff() const { return internal_cutoff_; }
    int gen_weight() const { return gen_weight_; }

    const PartitionBasis& basis() const { return basis_; }
    int dim() const { return basis_.first_index_at(cutoff_ + 1); } // public truncation
    int dim_at(int w) const { return basis_.dim_at(w); }
    int weight(int idx) const { return basis_.weight(idx); }
    int vacuum_index() const { return 0; }
    int generator_index() const { return basis_.index_of({gen_weight_}); }
    const Vec<K>& conformal_vector() const { return conformal_; }

    // weight of a homogeneous vector; -1 for the zero vector
    int vec_weight(const Vec<K>& v) const {
        return v.empty() ? -1 : basis_.weight(v.begin()->first);
    }

    bool is_homogeneous(const Vec<K>& v) const {
        if (v.empty())
            return true;
        const int w = basis_.weight(v.begin()->first);
        for (const auto& [i, c] : v)
            if (basis_.weight(i) != w)
                return false;
        return true;
    }

    std::string label_string(int idx) const {
        return basis_.label_string(idx, gen_weight_ == 1 ? "a" : "L");
    }

    // ---- generator modes ---------------------------------------------------

    // Field mode of the strong generator: Y(alpha)_j = a_j for the free
    // boson, Y(omega)_j = L(j-1) for Virasoro. Memoized per basis label.
    Vec<K> gen_field_mode_basis(int j, int idx) const {
        const long key = (static_cast<long>(j) << 32) ^ static_cast<long>(idx);
        {
            std::lock_guard<std::mutex> g(cache_->mu);
            auto it = cache_->gen.find(key);
            if (it != cache_->gen.end())
                return it->second;
        }
        Vec<K> r = gen_weight_ == 1 ? boson_mode(j, idx) : virasoro_mode(j - 1, basis_.label(idx));
        {
            std::lock_guard<std::mutex> g(cache_->mu);
            cache_->gen.emplace(key, r);
        }
        return r;
    }

    Vec<K> gen_field_mode(int j, const Vec<K>& v) const {
        Vec<K> out;
        for (const auto& [idx, c] : v)
            vec_axpy(out, c, gen_field_mode_basis(j, idx));
        return out;
    }

    // Virasoro mode L(n) on a vector, within the internal truncation.
    Vec<K> L(int n, const Vec<K>& v) const {
        if (gen_weight_ == 2)
            return gen_field_mode(n + 1, v);
        return mode(conformal_, n + 1, v);
    }

    Vec<K> L1_power(int k, Vec<K> v) const {
        for (int i = 0; i < k && !v.empty(); ++i)
            v = L(1, v);
        return v;
    }

    // ---- the mode table ------------------------------------------------------

    // Y(e_a)_n e_b, exact, memoized. Throws CutoffExceeded when the output
    // weight would exceed the internal truncation.
    Vec<K> table(int a_idx, int n, int b_idx) const {
        const Key key{a_idx, n, b_idx};
        {
            std::lock_guard<std::mutex> g(cache_->mu);
            auto it = cache_->table.find(key);
            if (it != cache_->table.end())
                return it->second;
        }
        Vec<K> result = compute_mode(a_idx, n, b_idx);
        {
            std::lock_guard<std::mutex> g(cache_->mu);
            cache_->table.emplace(key, result);
        }
        return result;
    }

    // Y(u)_n v extended bilinearly.
    Vec<K> mode(const Vec<K>& u, int n, const Vec<K>& v) const {
        Vec<K> out;
        for (const auto& [a, ca] : u)
            for (const auto& [b, cb] : v)
                vec_axpy(out, ca * cb, table(a, n, b));
        return out;
    }

  private:
    struct Key {
        int a, n, b;
        bool operator==(const Key& o) const { return a == o.a && n == o.n && b == o.b; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            size_t h = static_cast<size_t>(k.a);
            h = h * 1000003u ^ static_cast<size_t>(k.n + 4096);
            h = h * 1000003u ^ static_cast<size_t>(k.b);
            return h;
        }
    };

    static void check_cutoff(int cutoff) {
        if (cutoff < 2)
            throw std::invalid_argument("cutoff must be >= 2 (the conformal vector has weight 2)");
    }

    Vec<K> boson_mode(int j, int idx) const {
        // oscillator a_j on a Fock monomial, [a_m, a_n] = m delta_{m+n,0}
        const Partition& p = basis_.label(idx);
        Vec<K> out;
        if (j == 0)
            return out;
        if (j < 0) {
            const int w = basis_.weight(idx) - j;
            if (w > internal_cutoff_)
                throw CutoffExceeded(w, internal_cutoff_);
            Partition q = p;
            q.insert(std::lower_bound(q.begin(), q.end(), -j, std::greater<int>()), -j);
            vec_add_term(out, basis_.index_of(q), K(1));
            return out;
        }
        int count = 0;
        for (int part : p)
            if (part == j)
                ++count;
        if (count == 0)
            return out;
        Partition q = p;
        q.erase(std::find(q.begin(), q.end(), j));
        vec_add_term(out, basis_.index_of(q), K(static_cast<long>(count) * j));
        return out;
    }

    // L(m) on a PBW monomial via [L(m), L(n)] = (m-n) L(m+n) + c/12 (m^3-m) delta_{m+n,0}.
    Vec<K> virasoro_mode(int m, const Partition& p) const {
        Vec<K> out;
        if (p.empty()) {
            if (m <= -2) {
                if (-m > internal_cutoff_)
                    throw CutoffExceeded(-m, internal_cutoff_);
                vec_add_term(out, basis_.index_of({-m}), K(1));
            }
            return out;
        }
        const int q = p.front();
        if (m <= -2 && -m >= q) {
            const int w = partition_weight(p) - m;
            if (w > internal_cutoff_)
                throw CutoffExceeded(w, internal_cutoff_);
            Partition r = p;
            r.insert(r.begin(), -m);
            vec_add_term(out, basis_.index_of(r), K(1));
            return out;
        }
        Partition rest(p.begin() + 1, p.end());
        const int rest_idx = basis_.index_of(rest);
        // L(m) L(-q) = L(-q) L(m) + (m+q) L(m-q) + delta_{m,q} c (m^3-m)/12
        Vec<K> inner = gen_field_mode_basis(m + 1, rest_idx);
        for (const auto& [idx, c] : inner)
            vec_axpy(out, c, gen_field_mode_basis(-q + 1, idx));
        vec_axpy(out, K(m + q), gen_field_mode_basis(m - q + 1, rest_idx));
        if (m == q) {
            Rat mm(static_cast<long>(m));
            vec_add_term(out, rest_idx, central_charge_ * k_rat<K>((mm * mm * mm - mm) / Rat(12)));
        }
        return out;
    }

    Vec<K> compute_mode(int a_idx, int n, int b_idx) const {
        const Partition& a = basis_.label(a_idx);
        Vec<K> out;
        if (a.empty()) { // vacuum: Y(|0>, z) = id
            if (n == -1)
                vec_add_term(out, b_idx, K(1));
            return out;
        }
        const int wa = basis_.weight(a_idx);
        const int wb = basis_.weight(b_idx);
        const int out_wt = wa + wb - n - 1;
        if (out_wt < 0)
            return out;
        if (out_wt > internal_cutoff_)
            throw CutoffExceeded(out_wt, internal_cutoff_);

        const int p = a.front();
        Partition rest_label(a.begin() + 1, a.end());
        const int rest_idx = basis_.index_of(rest_label);
        const int wrest = wa - p;
        const int nd = p - gen_weight_; // derivative order in the reconstruction

        // creation side: sum_{m <= -1} (-1)^nd C(m,nd) g_{m-nd} Y(rest)_{n-m-1} b
        for (int m = -1; m >= n - wrest - wb; --m) {
            const K coeff = signed_binom(m, nd);
            if (coeff.is_zero())
                continue;
            Vec<K> inner = table(rest_idx, n - m - 1, b_idx);
            if (inner.empty())
                continue;
            vec_axpy(out, coeff, gen_field_mode(m - nd, inner));
        }
        // annihilation side: sum_{m >= max(0,nd)} (-1)^nd C(m,nd) Y(rest)_{n-m-1} g_{m-nd} b
        const int m_hi = nd + gen_weight_ - 1 + wb;
        for (int m = std::max(0, nd); m <= m_hi; ++m) {
            const K coeff = signed_binom(m, nd);
            if (coeff.is_zero())
                continue;
            Vec<K> x = gen_field_mode_basis(m - nd, b_idx);
            if (x.empty())
                continue;
            Vec<K> term;
            for (const auto& [xi, cx] : x)
                vec_axpy(term, cx, table(rest_idx, n - m - 1, xi));
            vec_axpy(out, coeff, term);
        }
        return out;
    }

    K signed_binom(long m, long nd) const {
        Rat b = binomial(m, nd);
        if (nd % 2 != 0)
            b = -b;
        return k_rat<K>(b);
    }

    std::string name_;
    int gen_weight_ = 1;
    int cutoff_ = 0, internal_cutoff_ = 0;
    K central_charge_ = K(0);
    PartitionBasis basis_;
    Vec<K> conformal_;

    // Lazy memoized tables; an idempotent cache, so concurrent fills of the
    // same key agree. Boxed to keep the algebra movable.
    struct Cache {
        std::mutex mu;
        std::unordered_map<Key, Vec<K>, KeyHash> table;
        std::unordered_map<long, Vec<K>> gen;
    };
    std::unique_ptr<Cache> cache_;
};

} // namespace voa
