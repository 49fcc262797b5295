#pragma once

#include <cmath>
#include <functional>

#include "laurent.hpp"
#include "module.hpp"

namespace voa {

// ---- normalized sewing -------------------------------------------------------

// Grade-wise contraction of a functional against q^{L(0)} sum_a m_a (x) m?_a
// inserted along a paired module/dual slot pair:
//   series(q) = sum_{n <= order} q^n sum_{wt m = n} psi(m, m^vee).
// The inner pairing is supplied as a callable on the basis index of the
// pairing module (the dual insertion is the matching dual basis vector).
template <class K>
Laurent<K> normalized_sewing(const Module<K>& pairing_mod,
                             const std::function<K(int)>& psi_diag, int order) {
    Laurent<K> out;
    for (int idx = 0; idx < pairing_mod.dim(); ++idx) {
        const int n = pairing_mod.total_weight(idx);
        if (n > order)
            continue;
        out.add_term(n, psi_diag(idx));
    }
    return out;
}

// The sewn mode series of a one-incoming-slot block: the geometry that glues
// a standard 3-pointed sphere into the incoming point turns phi into
//   series(q) = sum_n q^{wt u + wt w - n - 1} phi(Y(u)_n w),
// each term graded by the weight of the intermediate state.
template <class K>
Laurent<K> sewn_mode_series(const Module<K>& mod, int slot, const Vec<K>& phi, const Vec<K>& u,
                            const Vec<K>& w, int order) {
    Laurent<K> out;
    const VertexAlgebra<K>& alg = mod.algebra(slot);
    const int hu = max_component_weight(alg, u);
    const int ww = max_total_weight(mod, w);
    if (hu < 0 || ww < 0)
        return out;
    for (int e = 0; e <= order; ++e) {
        // modes with intermediate weight e
        K c(0);
        bool any = false;
        for (const auto& [ui, cu] : u)
            for (const auto& [wi, cw] : w) {
                const int n = alg.weight(ui) + mod.total_weight(wi) - e - 1;
                Vec<K> img = mod.act_basis(slot, ui, n, wi);
                if (!img.empty()) {
                    any = true;
                    c += cu * cw * vec_dot(phi, img);
                }
            }
        if (any)
            out.add_term(e, c);
    }
    return out;
}

// The same series in the propagation orientation: sum_n q^{-n-1} phi(Y(u)_n w)
// (exponent = -n-1), for comparing with the Laurent expansion of the
// propagated rational function at the glued point.
template <class K>
Laurent<K> sewn_expansion_series(const Module<K>& mod, int slot, const Vec<K>& phi,
                                 const Vec<K>& u, const Vec<K>& w, int min_exp, int max_exp) {
    Laurent<K> out;
    for (int m = min_exp; m <= max_exp; ++m) {
        Vec<K> img = mod.act(slot, u, -m - 1, w);
        if (!img.empty())
            out.add_term(m, vec_dot(phi, img));
    }
    return out;
}

// ---- the two-sided residue identity of the sewing construction ---------------

// Both residue routes through the sewing insertion, as (M (x) M')-valued
// q-series: for a monomial twist xi^a varpi^b,
//   left:  sum_n q^{n+b} [ Y_M(u)_{wt u + a - b - 1} P_n ] (x) id
//   right: sum_n q^{n+a} id (x) [ Y_{M'}(U(gamma_1) u-comp)_{...} P_n ]
// Their difference must vanish identically; the check reports the first
// failing q-order. Entries are returned as maps (q-power, m_idx, mdual_idx).
template <class K>
using SewnTwoSided = std::map<std::tuple<int, int, int>, K>;

template <class K>
SewnTwoSided<K> sewing_residue_left(const Module<K>& m_mod, const Vec<K>& u, int a, int b,
                                    int order) {
    SewnTwoSided<K> out;
    const VertexAlgebra<K>& alg = m_mod.algebra(0);
    for (int idx = 0; idx < m_mod.dim(); ++idx) {
        const int n = m_mod.total_weight(idx);
        if (n + b > order || n + b < 0)
            continue;
        for (const auto& [ui, cu] : u) {
            const int k = alg.weight(ui) + a - b - 1;
            Vec<K> img = m_mod.act_basis(0, ui, k, idx);
            for (const auto& [o, c] : img) {
                auto key = std::make_tuple(n + b, o, idx);
                auto it = out.find(key);
                if (it == out.end())
                    out.emplace(key, cu * c);
                else {
                    it->second += cu * c;
                    if (it->second.is_zero())
                        out.erase(it);
                }
            }
        }
    }
    return out;
}

template <class K>
SewnTwoSided<K> sewing_residue_right(const Module<K>& m_mod, const Module<K>& m_dual,
                                     const Vec<K>& u, int a, int b, int order) {
    SewnTwoSided<K> out;
    const VertexAlgebra<K>& alg = m_mod.algebra(0);
    // U(gamma_1) u = e^{L(1)} (-1)^{L(0)} u
    Vec<K> gu;
    for (const auto& [ui, cu] : u) {
        const K sign = cu * K(alg.weight(ui) % 2 == 0 ? 1 : -1);
        Vec<K> cur = vec_unit<K>(ui);
        Rat fact(1);
        vec_axpy(gu, sign, cur);
        for (int k = 1; !cur.empty(); ++k) {
            cur = alg.L(1, cur);
            fact = fact * Rat(k);
            if (!cur.empty())
                vec_axpy(gu, sign * k_rat<K>(Rat(1) / fact), cur);
        }
    }
    for (int idx = 0; idx < m_dual.dim(); ++idx) {
        const int n = m_dual.total_weight(idx);
        if (n + a > order || n + a < 0)
            continue;
        for (const auto& [xi, cx] : gu) {
            const int j = alg.weight(xi) + b - a - 1;
            Vec<K> img = m_dual.act_basis(0, xi, j, idx);
            for (const auto& [o, c] : img) {
                auto key = std::make_tuple(n + a, idx, o);
                auto it = out.find(key);
                if (it == out.end())
                    out.emplace(key, cx * c);
                else {
                    it->second += cx * c;
                    if (it->second.is_zero())
                        out.erase(it);
                }
            }
        }
    }
    return out;
}

// ---- numeric convergence probe (advisory only) -------------------------------

struct ProbeResult {
    double root_radius = 0.0;  // 1 / limsup |c_n|^{1/n}
    double ratio_radius = 0.0; // lim |c_n / c_{n+1}|
    int terms_used = 0;
};

inline ProbeResult convergence_probe(const std::vector<std::pair<int, double>>& coeffs) {
    std::vector<std::pair<int, double>> nz;
    for (auto& [n, c] : coeffs)
        if (c != 0.0 && n > 0)
            nz.push_back({n, std::fabs(c)});
    if (nz.size() < 8)
        throw std::invalid_argument("convergence_probe: needs at least 8 nonzero coefficients");
    // root test on the deepest terms
    double root = 0.0;
    int used = 0;
    for (size_t i = nz.size() - 4; i < nz.size(); ++i) {
        root += 1.0 / std::pow(nz[i].second, 1.0 / nz[i].first);
        ++used;
    }
    root /= used;
    // ratio test with Richardson extrapolation: for c_n ~ n^p / R^n the
    // model r_n = R (1 - p/n) gives R = n r_n - (n-1) r_{n-1} exactly
    std::vector<std::pair<int, double>> ratios;
    for (size_t i = 0; i + 1 < nz.size(); ++i)
        if (nz[i + 1].first == nz[i].first + 1)
            ratios.push_back({nz[i].first, nz[i].second / nz[i + 1].second});
    double ratio = 0.0;
    if (ratios.size() >= 2) {
        double acc = 0.0;
        int rc = 0;
        for (size_t i = ratios.size() - std::min<size_t>(3, ratios.size() - 1);
             i < ratios.size(); ++i) {
            const double n1 = ratios[i].first, n0 = ratios[i - 1].first;
            acc += n1 * ratios[i].second - n0 * ratios[i - 1].second;
            ++rc;
        }
        ratio = acc / rc / 1.0;
        // the extrapolation spans (n1 - n0) steps; normalize when gaps exist
        // (consecutive exponents give n1 - n0 = 1)
    } else if (ratios.size() == 1) {
        ratio = ratios[0].second;
    }
    ProbeResult out;
    out.root_radius = root;
    out.ratio_radius = ratio;
    out.terms_used = static_cast<int>(nz.size());
    return out;
}

} // namespace voa
