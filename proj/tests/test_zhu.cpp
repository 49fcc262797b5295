#include <catch2/catch_amalgamated.hpp>

#include "voa/zhu.hpp"

using namespace voa;

namespace {
const VertexAlgebra<Rat>& heis6() {
    static auto v = VertexAlgebra<Rat>::free_boson(6);
    return v;
}
} // namespace

TEST_CASE("classical relation span basics") {
    const auto& h = heis6();
    // n = 0, u = |0>: Y(|0>)_{-2} v = 0 by the vacuum axiom
    Vec<Rat> vac = vec_unit<Rat>(h.vacuum_index());
    for (int v = 0; v < h.dim() && h.weight(v) <= 3; ++v) {
        Vec<Rat> rel;
        for (int j = 0; j <= 0; ++j)
            vec_axpy(rel, binomial(0, j), h.table(h.vacuum_index(), j - 2, v));
        REQUIRE(rel.empty());
    }
    // n = 0, u = v = alpha: Y(a)_{-2}a + Y(a)_{-1}a = a(-2)a(-1)|0> + a(-1)^2|0>
    Vec<Rat> alpha = vec_unit<Rat>(h.generator_index());
    Vec<Rat> rel;
    for (int j = 0; j <= 1; ++j)
        vec_axpy(rel, binomial(1, j), h.table(h.generator_index(), j - 2, h.generator_index()));
    Vec<Rat> want;
    vec_add_term(want, h.basis().index_of({2, 1}), Rat(1));
    vec_add_term(want, h.basis().index_of({1, 1}), Rat(1));
    REQUIRE(rel == want);
    // weight window bookkeeping: the relation built from (u, v) has all its
    // homogeneous components inside [wt v + 1, wt u + wt v + 2n + 1]
    for (int n : {0, 1})
        for (int u = 0; u < h.dim(); ++u)
            for (int v = 0; v < h.dim(); ++v) {
                const int hu = h.weight(u), hv = h.weight(v);
                if (hu + hv + 2 * n + 1 > h.cutoff())
                    continue;
                Vec<Rat> r;
                for (int j = 0; j <= hu + n; ++j)
                    vec_axpy(r, binomial(hu + n, j), h.table(u, j - 2 * n - 2, v));
                for (const auto& [i, c] : r) {
                    REQUIRE(h.weight(i) >= hv + 1);
                    REQUIRE(h.weight(i) <= hu + hv + 2 * n + 1);
                }
            }
}

TEST_CASE("two-pipeline equality for the free boson") {
    for (int n : {0, 1}) {
        auto z = build_zhu(heis6(), n);
        REQUIRE(z.pipelines_match);
        REQUIRE(z.stable);
    }
}

TEST_CASE("two-pipeline equality for virasoro c = 1/2") {
    auto vir = VertexAlgebra<Rat>::virasoro(Rat(1, 2), 6);
    auto z = build_zhu(vir, 0);
    REQUIRE(z.pipelines_match);
}

TEST_CASE("level-zero quotient of the free boson is a polynomial algebra") {
    // representatives |0>, a(-1)|0>, a(-1)^2|0>, ... survive; the product is
    // [a]^k . [a]^m = [a]^{k+m} modulo lower filtration corrections
    auto z = build_zhu(heis6(), 0);
    const auto& h = heis6();
    const auto& q = z.classical;
    // 1, alpha, a(-1)^2 remain independent
    std::vector<int> want = {h.vacuum_index(), h.generator_index(), h.basis().index_of({1, 1})};
    for (int r : want)
        REQUIRE(!q.project(vec_unit<Rat>(r)).empty());
    // Z_0 = 0: the A_0 quotient equals the level quotient
    REQUIRE(z.full.representatives() == q.representatives());

    // alpha .L alpha = a(-1)^2|0> exactly at n = 0
    Vec<Rat> alpha = vec_unit<Rat>(h.generator_index());
    Vec<Rat> prod = diamond_raw(h, 0, alpha, alpha, true);
    REQUIRE(prod == vec_unit<Rat>(h.basis().index_of({1, 1})));
    // [alpha] . [a(-1)^2] = [a(-1)^3] modulo corrections: leading term present
    Vec<Rat> sq = vec_unit<Rat>(h.basis().index_of({1, 1}));
    Vec<Rat> cube = diamond_raw(h, 0, alpha, sq, true);
    REQUIRE(cube.count(h.basis().index_of({1, 1, 1})) == 1);
}

TEST_CASE("unit and centrality laws in the truncated quotient") {
    const auto& h = heis6();
    auto z = build_zhu(h, 0);
    Vec<Rat> vac = vec_unit<Rat>(h.vacuum_index());
    for (int v = 0; v < h.dim() && h.weight(v) <= 4; ++v) {
        Vec<Rat> ev = vec_unit<Rat>(v);
        // |0> .L v = v and v .R |0> = v on the nose
        REQUIRE(diamond_raw(h, 0, vac, ev, true) == ev);
        REQUIRE(diamond_raw(h, 0, ev, vac, false) == ev);
        // omega .L v - v .R omega = (L(0) + L(-1)) v
        Vec<Rat> lhs = vec_sub(diamond_raw(h, 0, h.conformal_vector(), ev, true),
                               diamond_raw(h, 0, ev, h.conformal_vector(), false));
        Vec<Rat> rhs = h.L(-1, ev);
        vec_axpy(rhs, Rat(h.weight(v)), ev);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("omega centrality across levels") {
    const auto& h = heis6();
    for (int n : {0, 1}) {
        auto z = build_zhu(h, n);
        for (int v = 0; v < h.dim() && h.weight(v) + 2 + 2 * n <= h.cutoff(); ++v) {
            Vec<Rat> ev = vec_unit<Rat>(v);
            Vec<Rat> lhs = vec_sub(diamond_raw(h, n, h.conformal_vector(), ev, true),
                                   diamond_raw(h, n, ev, h.conformal_vector(), false));
            Vec<Rat> rhs = h.L(-1, ev);
            vec_axpy(rhs, Rat(h.weight(v)), ev);
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("left and right products agree modulo Z_n and associate") {
    const auto& h = heis6();
    for (int n : {0, 1}) {
        auto z = build_zhu(h, n);
        const auto& q = z.full;
        for (int u = 0; u < h.dim() && h.weight(u) <= 2; ++u)
            for (int v = 0; v < h.dim() && h.weight(v) <= 2; ++v) {
                if (h.weight(u) + h.weight(v) + 2 * n > h.cutoff())
                    continue;
                Vec<Rat> eu = vec_unit<Rat>(u), ev = vec_unit<Rat>(v);
                REQUIRE(q.project(diamond_raw(h, n, eu, ev, true)) ==
                        q.project(diamond_raw(h, n, eu, ev, false)));
            }
        // associativity (u .L v) .R w = u .L (v .R w) in the level quotient
        const auto& ql = z.classical;
        for (int u = 0; u < h.dim() && h.weight(u) <= 1; ++u)
            for (int v = 0; v < h.dim() && h.weight(v) <= 1; ++v)
                for (int w = 0; w < h.dim() && h.weight(w) <= 1; ++w) {
                    if (h.weight(u) + h.weight(v) + h.weight(w) + 4 * n > h.cutoff())
                        continue;
                    Vec<Rat> eu = vec_unit<Rat>(u), ev = vec_unit<Rat>(v), ew = vec_unit<Rat>(w);
                    Vec<Rat> l = diamond_raw(h, n, diamond_raw(h, n, eu, ev, true), ew, false);
                    Vec<Rat> r = diamond_raw(h, n, eu, diamond_raw(h, n, ev, ew, false), true);
                    REQUIRE(ql.project(l) == ql.project(r));
                }
    }
}

TEST_CASE("zero mode representation on the top level") {
    const auto& h = heis6();
    VacuumModule<Rat> mod(h);
    // o(|0>) is the identity on any Omega_n
    for (int n : {0, 1}) {
        auto om = omega_subspace(mod, {n}, 4);
        for (auto& w : om)
            REQUIRE(zero_mode(mod, vec_unit<Rat>(h.vacuum_index()), w) == w);
    }
    // W = V, n = 0, w = |0>: o(alpha)|0> = Y(a)_0 |0> = 0
    Vec<Rat> vac = vec_unit<Rat>(h.vacuum_index());
    REQUIRE(zero_mode(mod, vec_unit<Rat>(h.generator_index()), vac).empty());
    // W = V, n = 1, w = alpha: o(omega) alpha = L(0) alpha = alpha,
    // and o(omega .L omega) alpha = o(omega) o(omega) alpha = alpha
    Vec<Rat> alpha = vec_unit<Rat>(h.generator_index());
    REQUIRE(zero_mode(mod, h.conformal_vector(), alpha) == alpha);
    Vec<Rat> ww = diamond_raw(h, 1, h.conformal_vector(), h.conformal_vector(), true);
    auto z1 = build_zhu(h, 1);
    // reduce the product before applying o: o annihilates the relation span
    // only on Omega_n, so check on alpha directly
    REQUIRE(zero_mode(mod, ww, alpha) == zero_mode(mod, h.conformal_vector(),
                                                   zero_mode(mod, h.conformal_vector(), alpha)));
}

TEST_CASE("o annihilates the relation span on the top level") {
    const auto& h = heis6();
    VacuumModule<Rat> mod(h);
    for (int n : {0, 1}) {
        auto om = omega_subspace(mod, {n}, 3);
        for (auto& rel : o_n_span(h, n)) {
            if (max_total_weight(mod, rel) > 4)
                continue;
            for (auto& w : om) {
                if (max_total_weight(mod, w) + max_total_weight(mod, rel) > h.cutoff())
                    continue;
                REQUIRE(zero_mode(mod, rel, w).empty());
            }
        }
    }
}

TEST_CASE("o is multiplicative for the reduced product") {
    const auto& h = heis6();
    VacuumModule<Rat> mod(h);
    for (int n : {0, 1}) {
        auto om = omega_subspace(mod, {n}, 3);
        for (int u = 0; u < h.dim() && h.weight(u) <= 3; ++u)
            for (int v = 0; v < h.dim() && h.weight(v) <= 3; ++v) {
                if (h.weight(u) + h.weight(v) + 2 * n + 1 > h.cutoff())
                    continue;
                Vec<Rat> prod = diamond_raw(h, n, vec_unit<Rat>(u), vec_unit<Rat>(v), true);
                for (auto& w : om) {
                    if (max_total_weight(mod, w) > 3)
                        continue;
                    Vec<Rat> lhs = zero_mode(mod, prod, w);
                    Vec<Rat> rhs = zero_mode(mod, vec_unit<Rat>(u),
                                             zero_mode(mod, vec_unit<Rat>(v), w));
                    REQUIRE(lhs == rhs);
                }
            }
    }
}

TEST_CASE("module pairing functionals land among the blocks") {
    // for w in Omega_n(V) and w' a matching-weight dual vector, the functional
    // v -> <w', Y(v, 1) w> kills the level-n relations and is grading-balanced
    auto alg = VertexAlgebra<Rat>::free_boson(6);
    VacuumModule<Rat> mod(alg);
    for (int n : {0, 1}) {
        auto X = zhu_sphere<Rat>(n);
        auto om = omega_subspace(mod, {n}, 3);
        int tested = 0;
        for (const auto& w : om) {
            const int ww = max_total_weight(mod, w);
            if (ww > 2 || ww < 0)
                continue;
            for (int wp = 0; wp < mod.dim(); ++wp) {
                if (mod.total_weight(wp) != ww)
                    continue;
                Vec<Rat> phi;
                for (int v = 0; v < alg.dim(); ++v) {
                    Rat val(0);
                    for (int k = alg.weight(v) + ww - 1 - alg.cutoff();
                         k <= alg.weight(v) + ww - 1; ++k) {
                        Vec<Rat> img = mod.act_basis_vec(0, v, k, w);
                        auto it = img.find(wp);
                        if (it != img.end())
                            val += it->second;
                    }
                    vec_add_term(phi, v, val);
                }
                if (phi.empty())
                    continue;
                ++tested;
                REQUIRE(is_partial_block(alg, X, mod, phi, 3, 3));
            }
        }
        REQUIRE(tested > 0);
    }
}
