#pragma once

#include <optional>
#include <string>
#include <vector>

#include "module.hpp"
#include "rationalfn.hpp"

namespace voa {

// A marked point of P^1 in the global coordinate zeta: either a finite value
// with the translated coordinate zeta - x, or infinity with coordinate 1/zeta.
template <class K>
struct MarkedPoint {
    bool at_infinity = false;
    K x = K(0);     // finite position (ignored at infinity)
    int level = 0;  // pole weight a_j (outgoing points only)

    static MarkedPoint finite(K v) { return {false, std::move(v), 0}; }
    static MarkedPoint infinity() { return {true, K(0), 0}; }

    bool same_point(const MarkedPoint& o) const {
        if (at_infinity != o.at_infinity)
            return false;
        return at_infinity || x == o.x;
    }
};

// (M,N)-pointed sphere with outgoing levels: incoming points carry the module
// slots, outgoing points carry the pole-weight levels a_j.
template <class K>
struct PointedSphere {
    std::vector<MarkedPoint<K>> incoming;
    std::vector<MarkedPoint<K>> outgoing;

    void validate() const {
        if (incoming.empty())
            throw GeometryError("a pointed sphere needs at least one incoming point");
        std::vector<const MarkedPoint<K>*> all;
        for (const auto& p : incoming)
            all.push_back(&p);
        for (const auto& p : outgoing) {
            if (p.level < 0)
                throw GeometryError("outgoing level must be a natural number");
            all.push_back(&p);
        }
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j)
                if (all[i]->same_point(*all[j]))
                    throw GeometryError("marked points must be pairwise distinct");
    }

    std::optional<int> infinity_role() const {
        // 0..N-1: incoming index; -1 - j: outgoing index j; nullopt: unmarked
        for (size_t i = 0; i < incoming.size(); ++i)
            if (incoming[i].at_infinity)
                return static_cast<int>(i);
        for (size_t j = 0; j < outgoing.size(); ++j)
            if (outgoing[j].at_infinity)
                return -1 - static_cast<int>(j);
        return std::nullopt;
    }
};

// The sphere underlying the level-n Zhu quotient: outgoing infinity and 0 at
// level n each, incoming point 1.
template <class K>
PointedSphere<K> zhu_sphere(int level) {
    PointedSphere<K> X;
    X.incoming.push_back(MarkedPoint<K>::finite(K(1)));
    MarkedPoint<K> inf = MarkedPoint<K>::infinity();
    inf.level = level;
    MarkedPoint<K> zero = MarkedPoint<K>::finite(K(0));
    zero.level = level;
    X.outgoing = {inf, zero};
    return X;
}

// One term U_rho(zeta)^{-1} e_v * f(zeta) dzeta of a VOA-valued rational
// 1-form; a section is a finite sum of terms.
template <class K>
struct SectionTerm {
    int v_idx;
    RationalFn<K> f;
};

template <class K>
using VSection = std::vector<SectionTerm<K>>;

template <class K>
VSection<K> section_scaled(const VSection<K>& s, const K& c) {
    VSection<K> out;
    for (const auto& t : s) {
        RationalFn<K> f = t.f.scaled(c);
        if (!f.is_zero())
            out.push_back({t.v_idx, f});
    }
    return out;
}

// V-valued Laurent expansion (per basis index) of a section in the local
// coordinate and trivialization of a marked point; the dtheta factor is
// divided out. At a finite point x this is plain expansion in z = zeta - x;
// at infinity the inversion chart contributes e^{zL(1)}(-z^-2)^{L(0)} and
// dzeta = -u^-2 du.
template <class K>
std::map<int, Laurent<K>> section_local_expansion(const VertexAlgebra<K>& alg,
                                                  const VSection<K>& s,
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
    for (const auto& term : s) {
        if (!pt.at_infinity) {
            add(term.v_idx, term.f.expand_at(pt.x, max_order));
            continue;
        }
        const int h = alg.weight(term.v_idx);
        Vec<K> lk = vec_unit<K>(term.v_idx);
        Rat fact(1);
        for (int k = 0; !lk.empty(); ++k) {
            if (k > 0)
                fact = fact * Rat(k);
            // component: (-1)^{h+1}/k! * L(1)^k v * u^{2h-k-2} g(u)
            K c = k_rat<K>(Rat(1) / fact);
            if (h % 2 == 0)
                c = -c;
            Laurent<K> g = term.f.expand_at_infinity(max_order - (2 * h - k - 2));
            Laurent<K> shifted = g.shifted(2 * h - k - 2).truncated(max_order);
            for (const auto& [vi, cv] : lk)
                add(vi, shifted.scaled(c * cv));
            lk = alg.L(1, lk);
        }
    }
    return out;
}

// Residue action of a section at the i-th incoming point on a module vector:
// sigma *_i w = sum_m [local expansion]_m Y_i(.)_m w.
template <class K>
Vec<K> residue_act(const VertexAlgebra<K>& alg, const PointedSphere<K>& X, const VSection<K>& s,
                   int i, const Module<K>& mod, const Vec<K>& w) {
    if (w.empty())
        return {};
    int wslot = 0;
    for (const auto& [idx, c] : w)
        wslot = std::max(wslot, mod.weight(idx, i));
    const int vmax = alg.cutoff();
    const int m_max = vmax + wslot - 1; // lower truncation bound over all v
    auto expansion = section_local_expansion(alg, s, X.incoming[i], m_max);
    Vec<K> out;
    for (const auto& [v_idx, lau] : expansion)
        for (const auto& [m, c] : lau.terms()) {
            if (m > alg.weight(v_idx) + wslot - 1)
                continue;
            vec_axpy(out, c, mod.act_basis_vec(i, v_idx, m, w));
        }
    return out;
}

// sigma . w = sum over incoming points of sigma *_i w.
template <class K>
Vec<K> section_dot(const VertexAlgebra<K>& alg, const PointedSphere<K>& X, const VSection<K>& s,
                   const Module<K>& mod, const Vec<K>& w) {
    Vec<K> out;
    for (size_t i = 0; i < X.incoming.size(); ++i)
        vec_axpy(out, K(1), residue_act(alg, X, s, static_cast<int>(i), mod, w));
    return out;
}

} // namespace voa
