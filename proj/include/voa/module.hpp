#pragma once

#include <string>
#include <vector>

#include "voa.hpp"

namespace voa {

// A truncated module over one or several commuting VOA actions ("slots").
// Indices run over a graded basis; weight(idx, slot) is the slot grading
// eigenvalue. Actions are exact; an output outside the truncation is a hard
// CutoffExceeded error, never a silent drop.
template <class K>
class Module {
  public:
    virtual ~Module() = default;

    virtual const VertexAlgebra<K>& algebra(int slot) const = 0;
    virtual int slots() const = 0;
    virtual int cutoff() const = 0;
    virtual int dim() const = 0;
    virtual int weight(int idx, int slot) const = 0;
    virtual std::string label(int idx) const = 0;

    // Y_slot(e_a)_n e_w with e_a a basis vector of the slot algebra.
    virtual Vec<K> act_basis(int slot, int a_idx, int n, int w_idx) const = 0;

    int total_weight(int idx) const {
        int w = 0;
        for (int j = 0; j < slots(); ++j)
            w += weight(idx, j);
        return w;
    }

    int vec_total_weight(const Vec<K>& v) const {
        return v.empty() ? -1 : total_weight(v.begin()->first);
    }

    std::vector<int> indices_with_weights(const std::vector<int>& wts) const {
        std::vector<int> out;
        for (int i = 0; i < dim(); ++i) {
            bool ok = true;
            for (int j = 0; j < slots(); ++j)
                if (weight(i, j) != wts[j]) {
                    ok = false;
                    break;
                }
            if (ok)
                out.push_back(i);
        }
        return out;
    }

    Vec<K> act(int slot, const Vec<K>& u, int n, const Vec<K>& w) const {
        Vec<K> out;
        for (const auto& [a, ca] : u)
            for (const auto& [b, cb] : w)
                vec_axpy(out, ca * cb, act_basis(slot, a, n, b));
        return out;
    }

    Vec<K> act_basis_vec(int slot, int a_idx, int n, const Vec<K>& w) const {
        Vec<K> out;
        for (const auto& [b, cb] : w)
            vec_axpy(out, cb, act_basis(slot, a_idx, n, b));
        return out;
    }

    Vec<K> virasoro(int slot, int n, const Vec<K>& w) const {
        return act(slot, algebra(slot).conformal_vector(), n + 1, w);
    }
};

// Y'_slot(u)_n w = sum_k ((-1)^{wt u}/k!) Y_slot(L(1)^k u)_{-n-k-2+2 wt u} w,
// the coordinate-inverted action entering contragredient modules.
template <class K>
Vec<K> act_prime(const Module<K>& mod, int slot, const Vec<K>& u, int n, const Vec<K>& w) {
    const VertexAlgebra<K>& alg = mod.algebra(slot);
    Vec<K> out;
    for (const auto& [a, ca] : u) {
        const int h = alg.weight(a);
        const K sign = K(h % 2 == 0 ? 1 : -1);
        Vec<K> lk = vec_unit<K>(a);
        Rat fact(1);
        for (int k = 0; !lk.empty(); ++k) {
            if (k > 0)
                fact = fact * Rat(k);
            const K coeff = ca * sign * k_rat<K>(Rat(1) / fact);
            vec_axpy(out, coeff, mod.act(slot, lk, -n - k - 2 + 2 * h, w));
            lk = alg.L(1, lk);
        }
    }
    return out;
}

// The VOA as a module over itself (the vacuum module). The public cutoff is
// enforced here; the algebra's internal slack is not exposed.
template <class K>
class VacuumModule : public Module<K> {
  public:
    explicit VacuumModule(const VertexAlgebra<K>& v) : v_(v) {}

    const VertexAlgebra<K>& algebra(int) const override { return v_; }
    int slots() const override { return 1; }
    int cutoff() const override { return v_.cutoff(); }
    int dim() const override { return v_.dim(); }
    int weight(int idx, int) const override { return v_.weight(idx); }
    std::string label(int idx) const override { return v_.label_string(idx); }

    Vec<K> act_basis(int, int a_idx, int n, int w_idx) const override {
        const int out_wt = v_.weight(a_idx) + v_.weight(w_idx) - n - 1;
        if (out_wt > v_.cutoff())
            throw CutoffExceeded(out_wt, v_.cutoff());
        return v_.table(a_idx, n, w_idx);
    }

  private:
    const VertexAlgebra<K>& v_;
};

// Contragredient module W': same graded basis read as the dual one, with
// <Y_{W'}(v)_n w', w> = <w', Y'_W(v)_n w>. The matrix of Y_{W'}(v)_n is the
// transpose of the matrix of Y'_W(v)_n.
template <class K>
class ContragredientModule : public Module<K> {
  public:
    explicit ContragredientModule(const Module<K>& base) : base_(base) {}

    const Module<K>& base() const { return base_; }
    const VertexAlgebra<K>& algebra(int slot) const override { return base_.algebra(slot); }
    int slots() const override { return base_.slots(); }
    int cutoff() const override { return base_.cutoff(); }
    int dim() const override { return base_.dim(); }
    int weight(int idx, int slot) const override { return base_.weight(idx, slot); }
    std::string label(int idx) const override { return base_.label(idx) + "'"; }

    Vec<K> act_basis(int slot, int a_idx, int n, int d_idx) const override {
        const VertexAlgebra<K>& alg = base_.algebra(slot);
        const int h = alg.weight(a_idx);
        const int shift = h - n - 1;
        std::vector<int> target(base_.slots());
        int total = 0;
        for (int j = 0; j < base_.slots(); ++j) {
            target[j] = base_.weight(d_idx, j) + (j == slot ? shift : 0);
            if (target[j] < 0)
                return {};
            total += target[j];
        }
        if (total > cutoff())
            throw CutoffExceeded(total, cutoff());
        Vec<K> out;
        const Vec<K> ea = vec_unit<K>(a_idx);
        for (int y : base_.indices_with_weights(target)) {
            Vec<K> img = act_prime(base_, slot, ea, n, vec_unit<K>(y));
            auto it = img.find(d_idx);
            if (it != img.end())
                vec_add_term(out, y, it->second);
        }
        return out;
    }

  private:
    const Module<K>& base_;
};

// ---- verification helpers (voa-core invariants) ----------------------------

// The three-term Jacobi identity for the slot action: returns the difference
// (empty vector = identity holds). Computes the cutoff needed first and
// raises CutoffExceeded rather than truncating.
template <class K>
int max_component_weight(const VertexAlgebra<K>& alg, const Vec<K>& v) {
    int w = -1;
    for (const auto& [i, c] : v)
        w = std::max(w, alg.weight(i));
    return w;
}

template <class K>
int max_total_weight(const Module<K>& mod, const Vec<K>& v) {
    int w = -1;
    for (const auto& [i, c] : v)
        w = std::max(w, mod.total_weight(i));
    return w;
}

template <class K>
Vec<K> jacobi_difference(const Module<K>& mod, int slot, const Vec<K>& u, const Vec<K>& v,
                         const Vec<K>& w, int m, int n, int h) {
    const VertexAlgebra<K>& alg = mod.algebra(slot);
    const int wu = max_component_weight(alg, u), wv = max_component_weight(alg, v);
    const int ww = max_total_weight(mod, w);
    if (wu < 0 || wv < 0 || ww < 0)
        return {};
    const int final_wt = wu + wv + ww - m - n - h - 2;
    int req = final_wt;
    req = std::max(req, wv + ww - h - 1);   // first factor of the straight side
    req = std::max(req, wu + ww - m - 1);   // first factor of the skew side
    if (req > mod.cutoff())
        throw CutoffExceeded(req, mod.cutoff());
    if (final_wt < 0)
        return {};

    Vec<K> diff;
    // sum_l C(m,l) Y(Y(u)_{n+l} v)_{m+h-l} w
    for (int l = 0; l < wu + wv - n; ++l) {
        const K c = k_rat<K>(binomial(m, l));
        if (c.is_zero())
            continue;
        Vec<K> inner = alg.mode(u, n + l, v);
        if (inner.empty())
            continue;
        vec_axpy(diff, c, mod.act(slot, inner, m + h - l, w));
    }
    // - sum_l (-1)^l C(n,l) Y(u)_{m+n-l} Y(v)_{h+l} w
    for (int l = 0; l < wv + ww - h; ++l) {
        K c = k_rat<K>(binomial(n, l));
        if (l % 2 != 0)
            c = -c;
        if (c.is_zero())
            continue;
        Vec<K> inner = mod.act(slot, v, h + l, w);
        if (inner.empty())
            continue;
        vec_axpy(diff, -c, mod.act(slot, u, m + n - l, inner));
    }
    // + sum_l (-1)^{l+n} C(n,l) Y(v)_{n+h-l} Y(u)_{m+l} w
    for (int l = 0; l < wu + ww - m; ++l) {
        K c = k_rat<K>(binomial(n, l));
        if ((l + n) % 2 != 0)
            c = -c;
        if (c.is_zero())
            continue;
        Vec<K> inner = mod.act(slot, u, m + l, w);
        if (inner.empty())
            continue;
        vec_axpy(diff, c, mod.act(slot, v, n + h - l, inner));
    }
    return diff;
}

// Skew symmetry Y(u)_n v - sum_k (-1)^{n+k+1} L(-1)^k Y(v)_{n+k} u / k!,
// an independent cross-check of the reconstruction.
template <class K>
Vec<K> skew_symmetry_difference(const VertexAlgebra<K>& alg, const Vec<K>& u, const Vec<K>& v,
                                int n) {
    Vec<K> diff = alg.mode(u, n, v);
    const int wu = max_component_weight(alg, u), wv = max_component_weight(alg, v);
    if (wu < 0 || wv < 0)
        return diff;
    for (int k = 0; n + k < wu + wv; ++k) {
        Vec<K> t = alg.mode(v, n + k, u);
        if (t.empty())
            continue;
        for (int i = 0; i < k; ++i)
            t = alg.L(-1, t);
        K c = k_rat<K>(Rat(1) / factorial(k));
        if ((n + k + 1) % 2 != 0)
            c = -c;
        vec_axpy(diff, -c, t);
    }
    return diff;
}

// Exact basis of { w : Y_j(v)_k w = 0 for all homogeneous v with wt v <= vcap
// and all k >= wt v + a_j }, the top-level subspace at levels a.
template <class K>
std::vector<Vec<K>> omega_subspace(const Module<K>& mod, const std::vector<int>& levels,
                                   int vcap) {
    const int dim = mod.dim();
    SparseMatrix<K> rows(0, dim);
    for (int slot = 0; slot < mod.slots(); ++slot) {
        const VertexAlgebra<K>& alg = mod.algebra(slot);
        const int cap = std::min(vcap, alg.cutoff());
        for (int a = 0; a < alg.dim(); ++a) {
            if (alg.weight(a) > cap)
                continue;
            const int hv = alg.weight(a);
            for (int k = hv + levels[slot]; k <= hv + mod.cutoff() - 1; ++k) {
                std::map<int, SparseRow<K>> out_rows; // output index -> row
                for (int w = 0; w < dim; ++w) {
                    Vec<K> img = mod.act_basis(slot, a, k, w);
                    for (const auto& [o, c] : img)
                        out_rows[o][w] = c;
                }
                for (auto& [o, r] : out_rows)
                    rows.append_row(std::move(r));
            }
        }
    }
    std::vector<Vec<K>> kernel = kernel_basis(rows);
    return kernel;
}

} // namespace voa
