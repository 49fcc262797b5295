#pragma once

#include "coinvariant.hpp"
#include "ratfunc.hpp"

namespace voa {

// Verify that phi kills every relation sigma . w inside the truncation, over
// the full section pool up to the given caps.
template <class K>
bool is_partial_block(const VertexAlgebra<K>& alg, const PointedSphere<K>& X,
                      const Module<K>& mod, const Vec<K>& phi, int section_weight_cap,
                      int pole_budget) {
    for (int budget = 1; budget <= pole_budget; ++budget) {
        for (const auto& s : section_basis(alg, X, section_weight_cap, budget)) {
            const int gain = section_weight_gain(alg, X, s);
            for (int w = 0; w < mod.dim(); ++w) {
                if (mod.total_weight(w) + std::max(gain, 0) > mod.cutoff())
                    continue;
                Vec<K> rel = section_dot(alg, X, s, mod, vec_unit<K>(w));
                if (!vec_dot(phi, rel).is_zero())
                    return false;
            }
        }
    }
    return true;
}

namespace detail {

// All scalar rationals with pole order <= cap_p at the listed finite points
// and zeta-degree <= inf_cap.
template <class K>
std::vector<RationalFn<K>> scalar_ansatz(const std::map<K, int>& pole_caps, int inf_cap) {
    std::map<K, int> poles;
    int deg_base = 0;
    for (const auto& [p, c] : pole_caps)
        if (c > 0) {
            poles[p] = c;
            deg_base -= c;
        }
    std::vector<RationalFn<K>> gens;
    for (int d = 0; deg_base + d <= inf_cap; ++d)
        gens.push_back(RationalFn<K>(Poly<K>::monomial(d), poles));
    return gens;
}

template <class K>
struct MatchWindow {
    bool at_infinity = false;
    K x = K(0);
    int lo = 0, hi = -1;   // exponent window [lo, hi]
    Laurent<K> prescribed; // target coefficients inside the window
};

// The unique ansatz element matching all windows; throws SolveError when the
// data is inconsistent (not a block / caps too small) or underdetermined.
template <class K>
RationalFn<K> solve_rational(const std::vector<RationalFn<K>>& gens,
                             const std::vector<MatchWindow<K>>& windows) {
    int rows_n = 0;
    for (const auto& w : windows)
        rows_n += std::max(0, w.hi - w.lo + 1);
    std::vector<std::vector<K>> A(rows_n, std::vector<K>(gens.size(), K(0)));
    std::vector<K> b(rows_n, K(0));
    int r = 0;
    for (const auto& w : windows) {
        if (w.hi < w.lo)
            continue;
        for (size_t c = 0; c < gens.size(); ++c) {
            Laurent<K> e = w.at_infinity ? gens[c].expand_at_infinity(w.hi)
                                         : gens[c].expand_at(w.x, w.hi);
            for (int m = w.lo; m <= w.hi; ++m)
                A[r + m - w.lo][c] = e.coeff(m);
        }
        for (int m = w.lo; m <= w.hi; ++m)
            b[r + m - w.lo] = w.prescribed.coeff(m);
        r += w.hi - w.lo + 1;
    }
    auto sol = solve_linear(A, b);
    if (!sol)
        throw SolveError("no rational function matches the prescribed expansions "
                         "(not a partial block, or caps too small)");
    if (sol->kernel_dim > 0)
        throw SolveAmbiguous("prescribed expansions underdetermine the rational function; "
                             "raise the matching depth");
    RationalFn<K> f;
    for (size_t c = 0; c < gens.size(); ++c)
        f = f + gens[c].scaled(sol->x[c]);
    return f;
}

// Assemble a rational function from a known Laurent principal part at a
// finite point.
template <class K>
RationalFn<K> principal_part(const K& x, const Laurent<K>& series) {
    RationalFn<K> out;
    for (const auto& [m, c] : series.terms()) {
        if (m >= 0)
            continue;
        // c (zeta - x)^m
        Poly<K> one(K(1));
        out = out + RationalFn<K>(Poly<K>(c), std::map<K, int>{{x, -m}});
    }
    return out;
}

} // namespace detail

// Propagation of a partial block phi on W attached to the incoming points:
// for each insertion v (constant in the standard trivialization) and module
// vector w, the unique rational function with poles bounded by the outgoing
// levels whose expansion at each incoming point x_i is phi(Y_i(v, z) w).
// Computed by exact linear solving against the prescribed principal parts;
// certified afterwards by the gluing test.
template <class K>
class Propagation {
  public:
    Propagation(const VertexAlgebra<K>& alg, const PointedSphere<K>& X, const Module<K>& mod,
                Vec<K> phi)
        : alg_(alg), X_(X), mod_(mod), phi_(std::move(phi)) {
        X_.validate();
        if (static_cast<int>(X_.incoming.size()) != mod_.slots())
            throw GeometryError("Propagation: one module slot per incoming point");
    }

    const VertexAlgebra<K>& algebra() const { return alg_; }
    const PointedSphere<K>& sphere() const { return X_; }
    const Module<K>& mod() const { return mod_; }
    const Vec<K>& functional() const { return phi_; }

    K eval_block(const Vec<K>& w) const { return vec_dot(phi_, w); }

    // The solved family is bilinear in (v, w): everything expands over the
    // memoized basis pairs.
    RationalFn<K> function(const Vec<K>& v, const Vec<K>& w) const {
        RationalFn<K> out;
        for (const auto& [vi, cv] : v)
            for (const auto& [wi, cw] : w) {
                const RationalFn<K>& f = function_basis(vi, wi);
                if (!f.is_zero())
                    out = out + f.scaled(cv * cw);
            }
        return out;
    }

    // memoized per basis pair
    const RationalFn<K>& function_basis(int v_idx, int w_idx) const {
        auto key = std::make_pair(v_idx, w_idx);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        RationalFn<K> f =
            homogeneous_function(alg_.weight(v_idx), vec_unit<K>(v_idx), vec_unit<K>(w_idx));
        return cache_.emplace(key, std::move(f)).first->second;
    }

    // Certify the solved family for a fixed w against the section pool: the
    // expansions of the rational family at the incoming points must satisfy
    // the residue criterion for gluing to a section of the dual bundle.
    bool passes_gluing_test(const Vec<K>& w, int insertion_cap, int pole_budget) const {
        const int order = 2 * alg_.cutoff() + pole_budget + 4;
        // the solved family is a functional-valued (dual) section in the
        // standard trivialization; expand it locally like any dual section
        DualSection<K> family;
        for (int v = 0; v < alg_.dim() && alg_.weight(v) <= insertion_cap; ++v) {
            RationalFn<K> f = function(vec_unit<K>(v), w);
            if (!f.is_zero())
                family.push_back({v, std::move(f)});
        }
        std::vector<FunctionalLaurent<K>> data;
        for (const auto& pt : X_.incoming)
            data.push_back(dual_section_local_expansion(alg_, family, pt, order));
        auto pool = section_basis(alg_, X_, insertion_cap, pole_budget);
        return !functional_data_witness(alg_, X_, data, pool, order).has_value();
    }

  private:
    RationalFn<K> homogeneous_function(int h, const Vec<K>& v, const Vec<K>& w) const {
        if (v.empty() || w.empty())
            return {};
        const int wt_w = max_total_weight(mod_, w);
        auto inf = X_.infinity_role();
        std::vector<int> wt_slot(mod_.slots(), 0);
        for (const auto& [i, c] : w)
            for (int j = 0; j < mod_.slots(); ++j)
                wt_slot[j] = std::max(wt_slot[j], mod_.weight(i, j));

        if (inf && *inf >= 0)
            return dense_function(h, v, w, wt_w, wt_slot); // incoming point at infinity

        // the principal parts at the incoming points are the prescribed data;
        // only the outgoing-pole tails and the polynomial part are unknown
        const int m_hi = mod_.cutoff() - h - wt_w;
        RationalFn<K> p0;
        std::vector<detail::MatchWindow<K>> windows;
        for (size_t i = 0; i < X_.incoming.size(); ++i) {
            detail::MatchWindow<K> win;
            win.x = X_.incoming[i].x;
            win.lo = 0;
            win.hi = m_hi;
            Laurent<K> data;
            for (int m = -(h + wt_slot[i]); m <= m_hi; ++m)
                data.add_term(m, vec_dot(phi_, mod_.act(static_cast<int>(i), v, -m - 1, w)));
            p0 = p0 + detail::principal_part(X_.incoming[i].x, data);
            win.prescribed = data.truncated(m_hi); // regular coefficients matched below
            windows.push_back(std::move(win));
        }

        std::map<K, int> caps;
        for (const auto& y : X_.outgoing)
            if (!y.at_infinity)
                caps[y.x] = y.level + h;
        const int inf_cap = (inf && *inf < 0) ? X_.outgoing[-1 - *inf].level - h : 0;
        // corrections may decay as slowly as 1/zeta; deeper decay of the
        // total is enforced through the rows at infinity
        auto gens = detail::scalar_ansatz(caps, std::max(inf_cap, -1));
        detail::MatchWindow<K> inf_win;
        if (inf_cap < 0) {
            inf_win.at_infinity = true;
            inf_win.lo = 1;
            inf_win.hi = -inf_cap - 1;
        }
        return finish_solve(p0, gens, windows, inf_win);
    }

    RationalFn<K> finish_solve(const RationalFn<K>& p0, const std::vector<RationalFn<K>>& gens,
                               std::vector<detail::MatchWindow<K>> windows,
                               detail::MatchWindow<K> inf_win) const {
        // subtract the known part from every window target
        for (auto& win : windows) {
            Laurent<K> p = p0.expand_at(win.x, win.hi);
            for (int m = win.lo; m <= win.hi; ++m)
                win.prescribed.add_term(m, -p.coeff(m));
        }
        if (inf_win.hi >= inf_win.lo) {
            Laurent<K> p = p0.expand_at_infinity(inf_win.hi);
            for (int m = inf_win.lo; m <= inf_win.hi; ++m)
                inf_win.prescribed.add_term(m, -p.coeff(m));
            windows.push_back(std::move(inf_win));
        }
        if (gens.empty()) {
            for (const auto& win : windows)
                for (int m = win.lo; m <= win.hi; ++m)
                    if (!win.prescribed.coeff(m).is_zero())
                        throw SolveError("no rational function matches the prescribed expansions "
                                         "(not a partial block, or caps too small)");
            return p0;
        }
        return p0 + detail::solve_rational(gens, windows);
    }

    // dense fallback covering an incoming point at infinity
    RationalFn<K> dense_function(int h, const Vec<K>& v, const Vec<K>& w, int wt_w,
                                 const std::vector<int>& wt_slot) const {
        auto inf = X_.infinity_role();
        std::map<K, int> caps;
        for (size_t i = 0; i < X_.incoming.size(); ++i)
            if (!X_.incoming[i].at_infinity)
                caps[X_.incoming[i].x] = h + wt_slot[i];
        for (const auto& y : X_.outgoing)
            if (!y.at_infinity)
                caps[y.x] = y.level + h;
        int inf_cap = wt_slot[*inf] - h;
        auto gens = detail::scalar_ansatz(caps, inf_cap);
        if (gens.empty())
            return {};
        std::vector<detail::MatchWindow<K>> windows;
        const int m_hi = mod_.cutoff() - h - wt_w;
        for (size_t i = 0; i < X_.incoming.size(); ++i) {
            detail::MatchWindow<K> win;
            if (!X_.incoming[i].at_infinity) {
                win.x = X_.incoming[i].x;
                win.lo = -(h + wt_slot[i]);
                win.hi = m_hi;
                for (int m = win.lo; m <= win.hi; ++m)
                    win.prescribed.add_term(
                        m, vec_dot(phi_, mod_.act(static_cast<int>(i), v, -m - 1, w)));
            } else {
                win.at_infinity = true;
                win.lo = h - wt_slot[i];
                win.hi = mod_.cutoff() + h - wt_w;
                Vec<K> lk = v;
                Rat fact(1);
                for (int k = 0; !lk.empty(); ++k) {
                    if (k > 0)
                        fact = fact * Rat(k);
                    K coeff = k_rat<K>(Rat(1) / fact);
                    if (h % 2 != 0)
                        coeff = -coeff;
                    for (int e = win.lo; e <= win.hi; ++e) {
                        const int n = 2 * h - k - e - 1;
                        win.prescribed.add_term(
                            e, coeff * vec_dot(phi_, mod_.act(static_cast<int>(i), lk, n, w)));
                    }
                    lk = alg_.L(1, lk);
                }
            }
            windows.push_back(std::move(win));
        }
        return detail::solve_rational(gens, windows);
    }

    const VertexAlgebra<K>& alg_;
    PointedSphere<K> X_;
    const Module<K>& mod_;
    Vec<K> phi_;
    mutable std::map<std::pair<int, int>, RationalFn<K>> cache_;
};

// ---- double propagation -----------------------------------------------------

// Field extension K -> K(t) used to carry the second insertion point as a
// generic (formal) point.
template <class K>
RatFunc<K> embed_scalar(const K& c) { return RatFunc<K>(c); }

template <class K>
Poly<RatFunc<K>> embed_poly(const Poly<K>& p) {
    Poly<RatFunc<K>> out;
    for (int i = 0; i <= p.degree(); ++i)
        out.set_coeff(i, RatFunc<K>(p.coeff(i)));
    return out;
}

// A rational function of zeta (over K) read as an element of K(t) by the
// substitution zeta = t.
template <class K>
RatFunc<K> as_field_element(const RationalFn<K>& f) {
    Poly<K> den(K(1));
    for (const auto& [p, k] : f.poles())
        for (int i = 0; i < k; ++i)
            den *= Poly<K>(std::vector<K>{-p, K(1)});
    return RatFunc<K>(f.num(), den);
}

// The two-variable propagated function for insertions (v1, v2): a rational
// function of zeta_1 over K(t), the second point held at the generic t. Poles
// only at the marked points and on the diagonal zeta_1 = t.
template <class K>
class DoublePropagation {
  public:
    using F2 = RatFunc<K>;

    explicit DoublePropagation(const Propagation<K>& base) : base_(base) {}

    RationalFn<F2> function(const Vec<K>& v1, const Vec<K>& v2, const Vec<K>& w) const {
        const VertexAlgebra<K>& alg = base_.algebra();
        const PointedSphere<K>& X = base_.sphere();
        const Module<K>& mod = base_.mod();
        const int h1 = homogeneous_weight(alg, v1);
        const int h2 = homogeneous_weight(alg, v2);
        const int wt_w = max_total_weight(mod, w);
        auto inf = X.infinity_role();
        if (inf && *inf >= 0)
            throw GeometryError("DoublePropagation: incoming point at infinity not supported");

        std::vector<int> wt_slot(mod.slots(), 0);
        for (const auto& [i, c] : w)
            for (int j = 0; j < mod.slots(); ++j)
                wt_slot[j] = std::max(wt_slot[j], mod.weight(i, j));

        // known principal parts: at the incoming points from the first-stage
        // family, on the diagonal from the algebra product
        RationalFn<F2> p0;
        std::vector<detail::MatchWindow<F2>> windows;
        const int m_hi = mod.cutoff() - h1 - h2 - wt_w;
        for (size_t i = 0; i < X.incoming.size(); ++i) {
            detail::MatchWindow<F2> win;
            win.x = embed_scalar(X.incoming[i].x);
            win.lo = 0;
            win.hi = m_hi;
            Laurent<F2> data;
            for (int m = -(h1 + wt_slot[i]); m <= m_hi; ++m) {
                Vec<K> w2 = mod.act(static_cast<int>(i), v1, -m - 1, w);
                if (w2.empty())
                    continue;
                data.add_term(m, as_field_element(base_.function(v2, w2)));
            }
            p0 = p0 + detail::principal_part(win.x, data);
            win.prescribed = data.truncated(m_hi);
            windows.push_back(std::move(win));
        }
        {
            Laurent<F2> diag;
            for (int m = -(h1 + h2); m <= -1; ++m) {
                Vec<K> prod = alg.mode(v1, -m - 1, v2);
                if (prod.empty())
                    continue;
                diag.add_term(m, as_field_element(base_.function(prod, w)));
            }
            p0 = p0 + detail::principal_part(F2::t(), diag);
        }

        std::map<F2, int> caps;
        for (const auto& y : X.outgoing)
            if (!y.at_infinity)
                caps[embed_scalar(y.x)] = y.level + h1;
        const int inf_cap = (inf && *inf < 0) ? X.outgoing[-1 - *inf].level - h1 : 0;
        auto gens = detail::scalar_ansatz(caps, std::max(inf_cap, -1));
        detail::MatchWindow<F2> inf_win;
        if (inf_cap < 0) {
            inf_win.at_infinity = true;
            inf_win.lo = 1;
            inf_win.hi = -inf_cap - 1;
        }
        // subtract the known part and solve for the outgoing tails
        for (auto& win : windows) {
            Laurent<F2> p = p0.expand_at(win.x, win.hi);
            for (int m = win.lo; m <= win.hi; ++m)
                win.prescribed.add_term(m, -p.coeff(m));
        }
        if (inf_win.hi >= inf_win.lo) {
            Laurent<F2> p = p0.expand_at_infinity(inf_win.hi);
            for (int m = inf_win.lo; m <= inf_win.hi; ++m)
                inf_win.prescribed.add_term(m, -p.coeff(m));
            windows.push_back(std::move(inf_win));
        }
        if (gens.empty()) {
            for (const auto& win : windows)
                for (int m = win.lo; m <= win.hi; ++m)
                    if (!win.prescribed.coeff(m).is_zero())
                        throw SolveError("double propagation: data does not glue");
            return p0;
        }
        return p0 + detail::solve_rational(gens, windows);
    }

  private:
    static int homogeneous_weight(const VertexAlgebra<K>& alg, const Vec<K>& v) {
        if (v.empty())
            throw std::invalid_argument("DoublePropagation: zero insertion");
        int h = alg.weight(v.begin()->first);
        for (const auto& [i, c] : v)
            if (alg.weight(i) != h)
                throw std::invalid_argument("DoublePropagation: insertion must be homogeneous");
        return h;
    }

    const Propagation<K>& base_;
};

} // namespace voa
