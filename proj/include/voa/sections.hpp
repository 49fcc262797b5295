#pragma once

#include "sphere.hpp"

namespace voa {

// Enumeration of global sections of the twisted VOA bundle with 1-form twist:
// H^0( V^{<=E}_{X,a} (x) omega (k S_X) ) in the standard trivialization.
//
// The ansatz builds the zero orders at finite outgoing points and the pole
// budget at finite incoming points into the coefficient functions
//    f_v = P_v(zeta) * prod_out (zeta - y_j)^{a_j + wt v} / prod_in (zeta - x_i)^k,
// with deg P_v capped so that the condition at infinity can still be met;
// the infinity condition itself (where the inversion chart mixes weights)
// is imposed as exact linear constraints and the kernel is returned.
//
// Thresholds at infinity per target weight g: incoming -> -k, outgoing at
// level a -> a + g, unmarked -> 0 (coefficients of u^e, e < threshold, must
// vanish).

namespace detail {

template <class K>
struct SectionAnsatz {
    struct Gen {
        int v_idx;
        RationalFn<K> f;
    };
    std::vector<Gen> gens;
};

// zeta-degree cap for the coefficient of a weight-h vector, wide enough to
// contain every true section (cancellation against the chart mixing of
// higher-weight coefficients is accounted for).
inline int infinity_degree_cap(int h, int E, int inf_role_level /* >=0 outgoing level */,
                               bool inf_incoming, int budget) {
    if (inf_incoming)
        return budget + E + h - 2;
    if (inf_role_level >= 0)
        return h - inf_role_level - 2;
    return E + h - 2; // unmarked
}

template <class K>
SectionAnsatz<K> build_ansatz(const VertexAlgebra<K>& alg, const PointedSphere<K>& X, int E,
                              int budget) {
    SectionAnsatz<K> out;
    auto inf = X.infinity_role();
    const bool inf_in = inf && *inf >= 0;
    const int inf_out_level = (inf && *inf < 0) ? X.outgoing[-1 - *inf].level : -1;

    for (int v = 0; v < alg.dim(); ++v) {
        const int h = alg.weight(v);
        if (h > E)
            break;
        int base_deg = 0;
        std::map<K, int> poles;
        Poly<K> num(K(1));
        for (const auto& y : X.outgoing) {
            if (y.at_infinity)
                continue;
            for (int i = 0; i < y.level + h; ++i)
                num *= Poly<K>(std::vector<K>{-y.x, K(1)});
            base_deg += y.level + h;
        }
        for (const auto& x : X.incoming) {
            if (x.at_infinity)
                continue;
            poles[x.x] = budget;
            base_deg -= budget;
        }
        const int cap = infinity_degree_cap(h, E, inf_out_level, inf_in, budget);
        for (int d = 0; base_deg + d <= cap; ++d)
            out.gens.push_back({v, RationalFn<K>(num * Poly<K>::monomial(d), poles)});
    }
    return out;
}

} // namespace detail

// Exact basis of the section space. Deterministic (echelon kernel over the
// ansatz coordinates in enumeration order).
template <class K>
std::vector<VSection<K>> section_basis(const VertexAlgebra<K>& alg, const PointedSphere<K>& X,
                                       int E, int budget) {
    X.validate();
    auto ansatz = detail::build_ansatz(alg, X, E, budget);
    const int n_unknown = static_cast<int>(ansatz.gens.size());
    if (n_unknown == 0)
        return {};

    auto inf = X.infinity_role();
    const bool inf_in = inf && *inf >= 0;
    const int inf_out_level = (inf && *inf < 0) ? X.outgoing[-1 - *inf].level : -1;

    // rows: sub-threshold coefficients of the infinity expansion, per target
    // basis vector and exponent
    std::map<std::pair<int, int>, SparseRow<K>> rows;
    for (int col = 0; col < n_unknown; ++col) {
        VSection<K> single{{ansatz.gens[col].v_idx, ansatz.gens[col].f}};
        auto exp = section_local_expansion(alg, single, MarkedPoint<K>::infinity(),
                                           alg.cutoff() + inf_out_level + budget + 4);
        for (const auto& [w_idx, lau] : exp) {
            const int g = alg.weight(w_idx);
            int threshold = inf_in ? -budget : (inf_out_level >= 0 ? inf_out_level + g : 0);
            for (const auto& [e, c] : lau.terms()) {
                if (e >= threshold)
                    continue;
                rows[{w_idx, e}][col] = c;
            }
        }
    }
    SparseMatrix<K> m(0, n_unknown);
    for (auto& [key, row] : rows)
        m.append_row(std::move(row));

    std::vector<VSection<K>> basis;
    for (const auto& kvec : kernel_basis(m)) {
        std::map<int, RationalFn<K>> byv;
        for (const auto& [col, c] : kvec) {
            auto& f = byv[ansatz.gens[col].v_idx];
            f = f + ansatz.gens[col].f.scaled(c);
        }
        VSection<K> s;
        for (auto& [v, f] : byv)
            if (!f.is_zero())
                s.push_back({v, std::move(f)});
        if (!s.empty())
            basis.push_back(std::move(s));
    }
    return basis;
}

// Dual-bundle sections H^0( (V^{<=E}_{X,a})^vee (budget S_X) ): functionals
// sum_v g_v . e_v^vee with poles <= a_j + wt v at outgoing points and <= budget
// at incoming ones. Used as the witness pool of the gluing test.
template <class K>
struct DualSectionTerm {
    int v_idx;
    RationalFn<K> g;
};
template <class K>
using DualSection = std::vector<DualSectionTerm<K>>;

// V^vee-valued expansion of a dual section at a marked point in that point's
// dual trivialization: <expansion, e_w> transported against the chart.
template <class K>
std::map<int, Laurent<K>> dual_section_local_expansion(const VertexAlgebra<K>& alg,
                                                       const DualSection<K>& s,
                                                       const MarkedPoint<K>& pt, int max_order) {
    std::map<int, Laurent<K>> out;
    auto add = [&](int idx, const Laurent<K>& l) {
        if (l.is_zero())
            return;
        auto it = out.find(idx);
        if (it == out.end())
            out.emplace(idx, l);
        else {
            it->second += l;
            if (it->second.is_zero())
                out.erase(it);
        }
    };
    if (!pt.at_infinity) {
        for (const auto& term : s)
            add(term.v_idx, term.g.expand_at(pt.x, max_order));
        return out;
    }
    // <nu, e_w>-component at infinity: (-1)^{h_w} sum_k (1/k!) u^{-(2h_w - k)}
    //   * sum over v in L(1)^k e_w of g_v(1/u)
    for (int w = 0; w < alg.dim(); ++w) {
        const int hw = alg.weight(w);
        Vec<K> lk = vec_unit<K>(w);
        Rat fact(1);
        for (int k = 0; !lk.empty(); ++k) {
            if (k > 0)
                fact = fact * Rat(k);
            for (const auto& term : s) {
                auto it = lk.find(term.v_idx);
                if (it == lk.end())
                    continue;
                K c = it->second * k_rat<K>(Rat(1) / fact);
                if (hw % 2 != 0)
                    c = -c;
                Laurent<K> g = term.g.expand_at_infinity(max_order + 2 * hw - k);
                add(w, g.shifted(-(2 * hw - k)).truncated(max_order).scaled(c));
            }
            lk = alg.L(1, lk);
        }
    }
    return out;
}

template <class K>
std::vector<DualSection<K>> dual_section_basis(const VertexAlgebra<K>& alg,
                                               const PointedSphere<K>& X, int E, int budget) {
    X.validate();
    auto inf = X.infinity_role();
    const bool inf_in = inf && *inf >= 0;
    const int inf_out_level = (inf && *inf < 0) ? X.outgoing[-1 - *inf].level : -1;

    struct Gen {
        int v_idx;
        RationalFn<K> g;
    };
    std::vector<Gen> gens;
    for (int v = 0; v < alg.dim(); ++v) {
        const int h = alg.weight(v);
        if (h > E)
            break;
        std::map<K, int> poles;
        int base_deg = 0;
        for (const auto& y : X.outgoing) {
            if (y.at_infinity)
                continue;
            poles[y.x] = y.level + h;
            base_deg -= y.level + h;
        }
        for (const auto& x : X.incoming) {
            if (x.at_infinity)
                continue;
            poles[x.x] += budget;
            base_deg -= budget;
        }
        // own-term constraint at infinity: deg g_v <= level - h (outgoing),
        // budget + ... (incoming), -2h (unmarked); widened for mixing room.
        int cap = inf_in ? budget - h + E : (inf_out_level >= 0 ? inf_out_level - h : E - 2 * h);
        for (int d = 0; base_deg + d <= cap; ++d)
            gens.push_back({v, RationalFn<K>(Poly<K>::monomial(d), poles)});
    }
    if (gens.empty())
        return {};

    std::map<std::pair<int, int>, SparseRow<K>> rows;
    for (size_t col = 0; col < gens.size(); ++col) {
        DualSection<K> single{{gens[col].v_idx, gens[col].g}};
        auto exp = dual_section_local_expansion(alg, single, MarkedPoint<K>::infinity(),
                                                inf_out_level + alg.cutoff() + budget + 4);
        for (const auto& [w_idx, lau] : exp) {
            const int g = alg.weight(w_idx);
            int threshold = inf_in ? -budget : (inf_out_level >= 0 ? -(inf_out_level + g) : 0);
            for (const auto& [e, c] : lau.terms()) {
                if (e >= threshold)
                    continue;
                rows[{w_idx, e}][static_cast<int>(col)] = c;
            }
        }
    }
    SparseMatrix<K> m(0, static_cast<int>(gens.size()));
    for (auto& [key, row] : rows)
        m.append_row(std::move(row));
    std::vector<DualSection<K>> basis;
    for (const auto& kvec : kernel_basis(m)) {
        std::map<int, RationalFn<K>> byv;
        for (const auto& [col, c] : kvec) {
            auto& f = byv[gens[col].v_idx];
            f = f + gens[col].g.scaled(c);
        }
        DualSection<K> s;
        for (auto& [v, f] : byv)
            if (!f.is_zero())
                s.push_back({v, std::move(f)});
        if (!s.empty())
            basis.push_back(std::move(s));
    }
    return basis;
}

} // namespace voa
