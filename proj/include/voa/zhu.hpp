#pragma once

#include "propagate.hpp"

namespace voa {

// ---- the classical relation span -------------------------------------------

// Spanning vectors Res_z z^{-2n-2} Y((1+z)^{wt u + n} u, z) v dz
//               = sum_j C(wt u + n, j) Y(u)_{j-2n-2} v
// over homogeneous basis pairs whose top output weight stays inside the
// truncation.
template <class K>
std::vector<Vec<K>> o_n_span(const VertexAlgebra<K>& alg, int n) {
    std::vector<Vec<K>> out;
    const int K_cut = alg.cutoff();
    for (int u = 0; u < alg.dim(); ++u) {
        const int hu = alg.weight(u);
        for (int v = 0; v < alg.dim(); ++v) {
            if (hu + alg.weight(v) + 2 * n + 1 > K_cut)
                continue;
            Vec<K> rel;
            for (int j = 0; j <= hu + n; ++j)
                vec_axpy(rel, k_rat<K>(binomial(hu + n, j)),
                         alg.table(u, j - 2 * n - 2, v));
            if (!rel.empty())
                out.push_back(std::move(rel));
        }
    }
    return out;
}

// u diamond_L v and u diamond_R v as truncated vectors (not yet reduced):
//   u .L v = sum_{m=0}^n (-1)^m C(m+n,n) Res (1+z)^{wt u + n} z^{-m-n-1} Y(u,z) v
//   u .R v = sum_{m=0}^n (-1)^n C(m+n,n) Res (1+z)^{wt v + m - 1} z^{-m-n-1} Y(v,z) u
template <class K>
Vec<K> diamond_raw(const VertexAlgebra<K>& alg, int n, const Vec<K>& u, const Vec<K>& v,
                   bool left) {
    Vec<K> out;
    for (const auto& [ui, cu] : u)
        for (const auto& [vi, cv] : v) {
            const int hu = alg.weight(ui), hv = alg.weight(vi);
            for (int m = 0; m <= n; ++m) {
                Rat c = binomial(m + n, n);
                if ((left ? m : n) % 2 != 0)
                    c = -c;
                const int e = left ? hu + n : hv + m - 1;
                // for negative binomial exponents the series is cut by the
                // lower truncation of the modes instead
                const int jmax = e >= 0 ? e : m + n + hu + hv + 1;
                for (int j = 0; j <= jmax; ++j) {
                    Rat cj = c * binomial(e, j);
                    if (cj == Rat(0))
                        continue;
                    Vec<K> t = left ? alg.table(ui, j - m - n - 1, vi)
                                    : alg.table(vi, j - m - n - 1, ui);
                    vec_axpy(out, cu * cv * k_rat<K>(cj), t);
                }
            }
        }
    return out;
}

// ---- the level-n algebra data ----------------------------------------------

template <class K>
struct ZhuData {
    int level = 0;
    int cutoff = 0;
    CoinvariantResult<K> geometric;  // quotient through the sphere sections
    QuotientData<K> classical;       // quotient through the o_n span
    QuotientData<K> full;            // further quotient by (L(0)+L(-1))V
    bool pipelines_match = false;
    bool stable = true;              // low-weight dims agree with a smaller run
    std::vector<int> z_n_killed;     // representative indices collapsed in full
};

template <class K>
ZhuData<K> build_zhu(const VertexAlgebra<K>& alg, int n, int extra_budget = 2) {
    VacuumModule<K> mod(alg);
    auto X = zhu_sphere<K>(n);
    ZhuData<K> out;
    out.level = n;
    out.cutoff = alg.cutoff();

    const int budget = 2 * n + 2 + extra_budget;
    out.geometric = coinvariant_quotient(alg, X, mod, alg.cutoff(), budget);
    out.classical = QuotientData<K>(alg.dim(), [&] {
        std::vector<SparseRow<K>> rels;
        for (auto& r : o_n_span(alg, n))
            rels.push_back(r);
        return rels;
    }());

    out.pipelines_match = out.geometric.quotient.representatives() ==
                          out.classical.representatives();
    if (out.pipelines_match) {
        for (int i = 0; i < alg.dim() && out.pipelines_match; ++i)
            if (out.geometric.quotient.project(vec_unit<K>(i)) !=
                out.classical.project(vec_unit<K>(i)))
                out.pipelines_match = false;
    }

    // A_n = quotient by the o_n span together with (L(0)+L(-1))V
    std::vector<SparseRow<K>> rels;
    for (auto& r : o_n_span(alg, n))
        rels.push_back(std::move(r));
    for (int v = 0; v < alg.dim(); ++v) {
        if (alg.weight(v) + 1 > alg.cutoff())
            continue;
        Vec<K> z = alg.L(-1, vec_unit<K>(v));
        vec_axpy(z, K(alg.weight(v)), vec_unit<K>(v));
        rels.push_back(std::move(z));
    }
    out.full = QuotientData<K>(alg.dim(), rels);

    // stability: representatives below half the cutoff should already be
    // fixed when the window shrinks by one
    out.stable = true;
    {
        std::vector<SparseRow<K>> rels_small;
        const int K_small = alg.cutoff() - 1;
        for (int u = 0; u < alg.dim(); ++u)
            for (int v = 0; v < alg.dim(); ++v) {
                const int hu = alg.weight(u);
                if (hu + alg.weight(v) + 2 * n + 1 > K_small)
                    continue;
                Vec<K> rel;
                for (int j = 0; j <= hu + n; ++j)
                    vec_axpy(rel, k_rat<K>(binomial(hu + n, j)), alg.table(u, j - 2 * n - 2, v));
                if (!rel.empty())
                    rels_small.push_back(std::move(rel));
            }
        QuotientData<K> small(alg.dim(), rels_small);
        const int watch = alg.cutoff() / 2;
        auto dims_below = [&](const QuotientData<K>& q) {
            std::vector<int> d;
            for (int r : q.representatives())
                if (alg.weight(r) <= watch)
                    d.push_back(r);
            return d;
        };
        out.stable = dims_below(small) == dims_below(out.classical);
        if (2 * n + 1 > alg.cutoff())
            out.stable = false; // window too small to see the level at all
    }
    return out;
}

// Reduced products on representatives of the truncated quotient.
template <class K>
SparseRow<K> diamond_reduced(const VertexAlgebra<K>& alg, const QuotientData<K>& q, int n,
                             const Vec<K>& u, const Vec<K>& v, bool left) {
    return q.project(diamond_raw(alg, n, u, v, left));
}

// ---- functionals on the truncated quotient ----------------------------------

// Dual basis of the truncated quotient: phi_r(w) = coefficient of the
// representative r in the projection of w.
template <class K>
std::vector<Vec<K>> quotient_dual_basis_tensor(const Module<K>& mod, const QuotientData<K>& q) {
    std::map<int, int> pos;
    for (size_t i = 0; i < q.representatives().size(); ++i)
        pos[q.representatives()[i]] = static_cast<int>(i);
    std::vector<Vec<K>> out(q.representatives().size());
    for (int i = 0; i < mod.dim(); ++i) {
        SparseRow<K> pr = q.project(vec_unit<K>(i));
        for (const auto& [r, c] : pr)
            vec_add_term(out[pos.at(r)], i, c);
    }
    return out;
}

template <class K>
std::vector<Vec<K>> quotient_dual_basis(const VertexAlgebra<K>& alg, const QuotientData<K>& q) {
    std::map<int, int> pos;
    for (size_t i = 0; i < q.representatives().size(); ++i)
        pos[q.representatives()[i]] = static_cast<int>(i);
    std::vector<Vec<K>> out(q.representatives().size());
    for (int i = 0; i < alg.dim(); ++i) {
        SparseRow<K> pr = q.project(vec_unit<K>(i));
        for (const auto& [r, c] : pr)
            vec_add_term(out[pos.at(r)], i, c);
    }
    return out;
}

// ---- interpolating sections and the functional actions ----------------------

// Modes of the weak module structure on block functionals over the level-n
// sphere: Y_minus acts at the outgoing point 0, Y_plus at the outgoing
// infinity. Computed through interpolating sections (a Mittag-Leffler
// construction swept over the incoming pole budget) and the pairing relation
// <Y_j(v)_k phi, w> = -phi(sigma *_1 w).
template <class K>
class FunctionalModes {
  public:
    FunctionalModes(const VertexAlgebra<K>& alg, int level, int insertion_cap)
        : alg_(alg), mod_(alg), level_(level), cap_(insertion_cap) {}

    const VertexAlgebra<K>& algebra() const { return alg_; }
    const VacuumModule<K>& mod() const { return mod_; }
    int level() const { return level_; }

    // <Y_minus(e_v)_k phi, w>; the optional levels are the multi-level of phi
    // (defaults to the construction level at both outgoing points)
    K minus_mode(int v_idx, int k, const Vec<K>& phi, const Vec<K>& w) const {
        return minus_mode_at(level_, level_, v_idx, k, phi, w);
    }
    K minus_mode_at(int level_inf, int level_zero, int v_idx, int k, const Vec<K>& phi,
                    const Vec<K>& w) const {
        const VSection<K>& s = section_for(false, v_idx, k, level_inf, level_zero);
        return -vec_dot(phi, section_dot(alg_, zhu_sphere<K>(level_), s, mod_, w));
    }

    // <Y_plus(e_v)_k phi, w>  (the plain action at infinity)
    K plus_mode(int v_idx, int k, const Vec<K>& phi, const Vec<K>& w) const {
        return plus_mode_at(level_, level_, v_idx, k, phi, w);
    }
    K plus_mode_at(int level_inf, int level_zero, int v_idx, int k, const Vec<K>& phi,
                   const Vec<K>& w) const {
        const VSection<K>& s = section_for(true, v_idx, k, level_inf, level_zero);
        return -vec_dot(phi, section_dot(alg_, zhu_sphere<K>(level_), s, mod_, w));
    }

    // <Y'_plus(e_v)_k phi, w> via the coordinate-inverted mode expansion
    K plus_prime_mode(int v_idx, int k, const Vec<K>& phi, const Vec<K>& w) const {
        const int h = alg_.weight(v_idx);
        K out(0);
        Vec<K> lk = vec_unit<K>(v_idx);
        Rat fact(1);
        for (int j = 0; !lk.empty(); ++j) {
            if (j > 0)
                fact = fact * Rat(j);
            K c = k_rat<K>(Rat(1) / fact);
            if (h % 2 != 0)
                c = -c;
            for (const auto& [xi, cx] : lk)
                out += c * cx * plus_mode(xi, -k - j - 2 + 2 * h, phi, w);
            lk = alg_.L(1, lk);
        }
        return out;
    }

    // the interpolating section behind a mode (data at infinity for the plus
    // action, at 0 for the minus action)
    const VSection<K>& interpolating_section(bool at_inf, int v_idx, int k) const {
        return section_for(at_inf, v_idx, k, level_, level_);
    }
    const VSection<K>& interpolating_section_at(bool at_inf, int v_idx, int k, int level_inf,
                                                int level_zero) const {
        return section_for(at_inf, v_idx, k, level_inf, level_zero);
    }

    // largest module weight the mode evaluation can accept
    int weight_room(int v_idx, int k, bool plus) const {
        const VSection<K>& s = section_for(plus, v_idx, k, level_, level_);
        auto X = zhu_sphere<K>(level_);
        return alg_.cutoff() - std::max(0, section_weight_gain(alg_, X, s));
    }

  private:
    // interpolating section: local behavior e_v theta^k dtheta at the chosen
    // outgoing point, trivial modulo the vanishing threshold at the other
    const VSection<K>& section_for(bool at_inf, int v_idx, int k, int level_inf,
                                   int level_zero) const {
        auto key = std::make_tuple(at_inf, v_idx, k, level_inf, level_zero);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        VSection<K> s = build_section(at_inf, v_idx, k, level_inf, level_zero);
        return cache_.emplace(key, std::move(s)).first->second;
    }

    VSection<K> build_section(bool at_inf, int v_idx, int k, int level_inf, int level_zero) const {
        // sections only need the insertion's own weight: smaller caps keep
        // the incoming pole budget (and hence the weight room) small
        const int E = alg_.weight(v_idx);
        if (E > cap_)
            throw std::invalid_argument("FunctionalModes: insertion beyond the declared cap");
        const int b_inf = level_inf + E, b_zero = level_zero + E;
        if (k >= (at_inf ? b_inf : b_zero))
            return {}; // the data already lies inside the vanishing threshold
        std::string last_err;
        for (int T = 1; T <= b_inf + b_zero + 8; ++T) {
            try {
                return solve_section(at_inf, v_idx, k, T, b_inf, b_zero, E);
            } catch (const SolveError& e) {
                last_err = e.what();
            }
        }
        throw SolveError("interpolating section: pole budget sweep exhausted (" + last_err + ")");
    }

    VSection<K> solve_section(bool at_inf, int v_idx, int k, int T, int b_inf, int b_zero,
                              int E) const {
        // ansatz: poles at the incoming point 1 up to T; at the outgoing data
        // point poles to reach the exponent k; holomorphic elsewhere except
        // the allowed degree at infinity
        struct Gen {
            int v;
            RationalFn<K> f;
        };
        std::vector<Gen> gens;
        const int pole0 = at_inf ? 0 : std::max(0, -k);
        const int dinf = at_inf ? std::max(0, -k - 2) + 2 * E : 0;
        for (int v = 0; v < alg_.dim() && alg_.weight(v) <= E; ++v) {
            std::map<K, int> poles;
            poles[K(1)] = T;
            if (pole0 > 0)
                poles[K(0)] = pole0;
            int base_deg = -T - pole0;
            for (int d = 0; base_deg + d <= dinf; ++d)
                gens.push_back({v, RationalFn<K>(Poly<K>::monomial(d), poles)});
        }
        // rows: windows at the two outgoing points
        std::map<std::tuple<int, int, int>, SparseRow<K>> rows; // (point, w, e) -> row
        std::map<std::tuple<int, int, int>, K> target;
        auto X = zhu_sphere<K>(level_);
        const MarkedPoint<K> p_inf = MarkedPoint<K>::infinity();
        const MarkedPoint<K> p_zero = MarkedPoint<K>::finite(K(0));
        for (size_t col = 0; col < gens.size(); ++col) {
            VSection<K> single{{gens[col].v, gens[col].f}};
            auto e_inf = section_local_expansion(alg_, single, p_inf, b_inf - 1);
            for (const auto& [wi, lau] : e_inf)
                for (const auto& [e, c] : lau.terms())
                    rows[{0, wi, e}][static_cast<int>(col)] = c;
            auto e_zero = section_local_expansion(alg_, single, p_zero, b_zero - 1);
            for (const auto& [wi, lau] : e_zero)
                for (const auto& [e, c] : lau.terms())
                    rows[{1, wi, e}][static_cast<int>(col)] = c;
        }
        // prescribed data: e_v theta^k at the chosen point, zero at the other
        target[{at_inf ? 0 : 1, v_idx, k}] = K(1);

        std::vector<std::vector<K>> A;
        std::vector<K> rhs;
        for (auto& [key, row] : rows) {
            std::vector<K> dense(gens.size(), K(0));
            for (const auto& [c, val] : row)
                dense[c] = val;
            A.push_back(std::move(dense));
            auto it = target.find(key);
            rhs.push_back(it == target.end() ? K(0) : it->second);
            target.erase(key);
        }
        // any prescribed coefficient not reachable by the ansatz
        for (auto& [key, val] : target) {
            if (!val.is_zero())
                throw SolveError("interpolating section: data exponent outside the ansatz");
        }
        auto sol = solve_linear(A, rhs);
        if (!sol)
            throw SolveError("interpolating section: no solution at this budget");
        VSection<K> out;
        std::map<int, RationalFn<K>> byv;
        for (size_t c = 0; c < gens.size(); ++c) {
            if (sol->x[c].is_zero())
                continue;
            auto& f = byv[gens[c].v];
            f = f + gens[c].f.scaled(sol->x[c]);
        }
        for (auto& [v, f] : byv)
            if (!f.is_zero())
                out.push_back({v, std::move(f)});
        return out;
    }

    const VertexAlgebra<K>& alg_;
    VacuumModule<K> mod_;
    int level_;
    int cap_;
    mutable std::map<std::tuple<bool, int, int, int, int>, VSection<K>> cache_;
};

// o(v) w = Y(v)_{wt v - 1} w, the zero-mode action on the level-n top space.
template <class K>
Vec<K> zero_mode(const Module<K>& mod, const Vec<K>& v, const Vec<K>& w) {
    const VertexAlgebra<K>& alg = mod.algebra(0);
    Vec<K> out;
    for (const auto& [i, c] : v)
        vec_axpy(out, c, mod.act_basis_vec(0, i, alg.weight(i) - 1, w));
    return out;
}

} // namespace voa
