#pragma once

#include "sections.hpp"

namespace voa {

// Largest weight a section can add to a vector it acts on, over all incoming
// points: wt v + (pole order of f there) - 1 per term.
template <class K>
int section_weight_gain(const VertexAlgebra<K>& alg, const PointedSphere<K>& X,
                        const VSection<K>& s) {
    int gain = std::numeric_limits<int>::min();
    for (size_t i = 0; i < X.incoming.size(); ++i) {
        const auto& pt = X.incoming[i];
        for (const auto& term : s) {
            const int h = alg.weight(term.v_idx);
            if (pt.at_infinity) {
                // chart exponents run down to 2h-k-2-deg(f); the weight shift
                // of every such mode is 1 - h + deg(f)
                gain = std::max(gain, 1 - h + term.f.degree_at_infinity());
            } else {
                gain = std::max(gain, h + term.f.pole_order_at(pt.x) - 1);
            }
        }
    }
    return gain;
}

template <class K>
struct CoinvariantResult {
    QuotientData<K> quotient{};
    int relation_count = 0;
    int section_count = 0;
    // representative labels of the quotient, in module index order
    std::vector<int> representatives;
};

// W^{<=K} modulo the span of the residue-action relations sigma . w that fit
// inside the truncation. Relations with vectors that would leave the cutoff
// are not formed (the quotient is of the truncated space, reported as such).
template <class K>
CoinvariantResult<K> coinvariant_quotient(const VertexAlgebra<K>& alg, const PointedSphere<K>& X,
                                          const Module<K>& mod, int section_weight_cap,
                                          int pole_budget) {
    if (static_cast<int>(X.incoming.size()) != mod.slots())
        throw GeometryError("coinvariant_quotient: one module slot per incoming point");
    // sweep the budget upward so that shallow-pole sections contribute their
    // full relation window (the section spaces are nested; a mixed basis
    // vector alone would shrink the window to its deepest pole)
    std::vector<SparseRow<K>> rels;
    int section_count = 0;
    for (int budget = 1; budget <= pole_budget; ++budget) {
        auto sections = section_basis(alg, X, section_weight_cap, budget);
        if (budget == pole_budget)
            section_count = static_cast<int>(sections.size());
        for (const auto& s : sections) {
            const int gain = section_weight_gain(alg, X, s);
            for (int w = 0; w < mod.dim(); ++w) {
                if (mod.total_weight(w) + std::max(gain, 0) > mod.cutoff())
                    continue;
                Vec<K> rel = section_dot(alg, X, s, mod, vec_unit<K>(w));
                if (!rel.empty())
                    rels.push_back(rel);
            }
        }
    }
    CoinvariantResult<K> out{QuotientData<K>(mod.dim(), rels), static_cast<int>(rels.size()),
                             section_count,
                             {}};
    out.representatives = out.quotient.representatives();
    return out;
}

// ---- the gluing criterion -------------------------------------------------

// Candidate local data: for each incoming point, functional-valued Laurent
// coefficients s_j = sum_n e_{j,n} z^n with e_{j,n} in (V^{<=E})^vee, given in
// that point's local trivialization as a map v_idx -> Laurent.
template <class K>
using FunctionalLaurent = std::map<int, Laurent<K>>;

// Pass iff sum_j Res <s_j, nu_j> = 0 for every nu in the section pool; on
// failure returns the witness index. Used to certify that solved functional
// data glues to a global section of the dual bundle.
template <class K>
std::optional<size_t> functional_data_witness(const VertexAlgebra<K>& alg,
                                              const PointedSphere<K>& X,
                                              const std::vector<FunctionalLaurent<K>>& data,
                                              const std::vector<VSection<K>>& pool,
                                              int expansion_order) {
    for (size_t t = 0; t < pool.size(); ++t) {
        K total(0);
        for (size_t j = 0; j < X.incoming.size(); ++j) {
            auto nu = section_local_expansion(alg, pool[t], X.incoming[j], expansion_order);
            for (const auto& [v, s_series] : data[j]) {
                auto it = nu.find(v);
                if (it == nu.end())
                    continue;
                for (const auto& [m, c] : s_series.terms())
                    total += c * it->second.coeff(-1 - m);
            }
        }
        if (!total.is_zero())
            return t;
    }
    return std::nullopt;
}

// Form-valued variant: candidate expansions of a section of V_{X,a} (x) omega
// (the dtheta factor divided out), paired against the dual-bundle pool.
template <class K>
using VectorLaurent = std::map<int, Laurent<K>>;

template <class K>
std::optional<size_t> form_data_witness(const VertexAlgebra<K>& alg, const PointedSphere<K>& X,
                                        const std::vector<VectorLaurent<K>>& data,
                                        const std::vector<DualSection<K>>& pool,
                                        int expansion_order) {
    for (size_t t = 0; t < pool.size(); ++t) {
        K total(0);
        for (size_t j = 0; j < X.incoming.size(); ++j) {
            auto nu = dual_section_local_expansion(alg, pool[t], X.incoming[j], expansion_order);
            for (const auto& [v, s_series] : data[j]) {
                auto it = nu.find(v);
                if (it == nu.end())
                    continue;
                for (const auto& [m, c] : s_series.terms())
                    total += c * it->second.coeff(-1 - m);
            }
        }
        if (!total.is_zero())
            return t;
    }
    return std::nullopt;
}

} // namespace voa
