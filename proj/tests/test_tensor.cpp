#include <catch2/catch_amalgamated.hpp>

#include "voa/tensor.hpp"

using namespace voa;

namespace {

struct Fixture {
    VertexAlgebra<Rat> heis = VertexAlgebra<Rat>::free_boson(5);
    VertexAlgebra<Rat> vir = VertexAlgebra<Rat>::virasoro(Rat(1, 2), 5);
    VacuumModule<Rat> mh{heis}, mv{vir};
};

} // namespace

TEST_CASE_METHOD(Fixture, "tensor grading multiplies partition counts") {
    TensorModule<Rat> t({&mh, &mv}, 5);
    // dim (Heis (x) Vir)(n1, n2) = p(n1) * p_{>=2}(n2)
    for (int n1 = 0; n1 <= 5; ++n1)
        for (int n2 = 0; n1 + n2 <= 5; ++n2) {
            int got = 0;
            for (int i = 0; i < t.dim(); ++i)
                if (t.weight(i, 0) == n1 && t.weight(i, 1) == n2)
                    ++got;
            REQUIRE(got == heis.dim_at(n1) * vir.dim_at(n2));
        }
}

TEST_CASE_METHOD(Fixture, "single factor tensor is the module itself") {
    TensorModule<Rat> t({&mh}, 5);
    REQUIRE(t.dim() == mh.dim());
    Vec<Rat> a = vec_unit<Rat>(heis.generator_index());
    for (int i = 0; i < t.dim(); ++i)
        for (int n = -2; n <= 2; ++n) {
            int out = 1 + t.total_weight(i) - n - 1;
            if (out < 0 || out > 5)
                continue;
            REQUIRE(t.act(0, a, n, vec_unit<Rat>(i)) == mh.act(0, a, n, vec_unit<Rat>(i)));
        }
}

TEST_CASE_METHOD(Fixture, "distinct slots commute") {
    TensorModule<Rat> t({&mh, &mh}, 4);
    Vec<Rat> a = vec_unit<Rat>(heis.generator_index());
    for (int i = 0; i < t.dim(); ++i) {
        if (t.total_weight(i) > 4)
            continue;
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                int out = t.total_weight(i) + (1 - m - 1) + (1 - n - 1);
                if (out < 0 || out > 4)
                    continue;
                Vec<Rat> x = vec_unit<Rat>(i);
                Vec<Rat> ab, ba;
                try {
                    ab = t.act(0, a, m, t.act(1, a, n, x));
                    ba = t.act(1, a, n, t.act(0, a, m, x));
                } catch (const CutoffExceeded&) {
                    continue;
                }
                REQUIRE(ab == ba);
            }
    }
}

TEST_CASE_METHOD(Fixture, "slot grading bookkeeping") {
    // Y_i(v)_m W(n1,n2) lands in W(.., n_i + wt v - m - 1, ..)
    TensorModule<Rat> t({&mh, &mv}, 4);
    Vec<Rat> w2 = vir.conformal_vector();
    for (int i = 0; i < t.dim(); ++i)
        for (int m = 0; m <= 4; ++m) {
            if (t.total_weight(i) + 2 - m - 1 > 4)
                continue;
            Vec<Rat> img = t.act(1, w2, m, vec_unit<Rat>(i));
            for (const auto& [o, c] : img) {
                REQUIRE(t.weight(o, 0) == t.weight(i, 0));
                REQUIRE(t.weight(o, 1) == t.weight(i, 1) + 2 - m - 1);
            }
        }
}

TEST_CASE_METHOD(Fixture, "combined modes collapse on vacuum insertions") {
    TensorModule<Rat> t({&mh, &mh}, 4);
    Vec<Rat> vac = vec_unit<Rat>(heis.vacuum_index());
    Vec<Rat> a = vec_unit<Rat>(heis.generator_index());

    // all-vacuum insertion at k = -1 is the identity
    for (int i = 0; i < t.dim(); ++i) {
        long terms = 0;
        REQUIRE(tensor_mode(t, {vac, vac}, -1, vec_unit<Rat>(i), &terms) == vec_unit<Rat>(i));
        REQUIRE(terms == 1);
    }
    // (alpha (x) vacuum)_k w = Y_1(alpha)_k w (slot 2 contributes only mode -1)
    for (int i = 0; i < t.dim(); ++i)
        for (int k = -2; k <= 2; ++k) {
            int out = t.total_weight(i) - k;
            if (out < 0 || out > 4)
                continue;
            REQUIRE(tensor_mode(t, {a, vac}, k, vec_unit<Rat>(i)) ==
                    t.act(0, a, k, vec_unit<Rat>(i)));
        }
    // (alpha (x) alpha)_1 (vac (x) vac) = 0: creation kills all splittings
    Vec<Rat> vv = t.tensor_unit({heis.vacuum_index(), heis.vacuum_index()});
    long terms = -1;
    REQUIRE(tensor_mode(t, {a, a}, 1, vv, &terms).empty());
    REQUIRE(terms == 0);
}

TEST_CASE_METHOD(Fixture, "slot round-trip through combined modes") {
    TensorModule<Rat> t({&mh, &mv}, 4);
    Vec<Rat> vac_h = vec_unit<Rat>(heis.vacuum_index());
    Vec<Rat> vac_v = vec_unit<Rat>(vir.vacuum_index());
    Vec<Rat> a = vec_unit<Rat>(heis.generator_index());
    Vec<Rat> om = vir.conformal_vector();
    for (int i = 0; i < t.dim(); ++i) {
        for (int k = -2; k <= 3; ++k) {
            // slot 1: Y(v (x) 1)_k = Y_1(v)_k
            int out1 = t.total_weight(i) + 1 - k - 1;
            if (out1 >= 0 && out1 <= 4)
                REQUIRE(tensor_mode(t, {a, vac_v}, k, vec_unit<Rat>(i)) ==
                        t.act(0, a, k, vec_unit<Rat>(i)));
            // slot 2: Y(1 (x) v)_k = Y_2(v)_k
            int out2 = t.total_weight(i) + 2 - k - 1;
            if (out2 >= 0 && out2 <= 4)
                REQUIRE(tensor_mode(t, {vac_h, om}, k, vec_unit<Rat>(i)) ==
                        t.act(1, om, k, vec_unit<Rat>(i)));
        }
    }
}

TEST_CASE_METHOD(Fixture, "jacobi identity for combined modes") {
    // the combined operators satisfy the Jacobi identity on tensor modules:
    // verified through the TensorVoaView wrapper below
    TensorModule<Rat> t({&mh, &mh}, 4);
    Vec<Rat> a = vec_unit<Rat>(heis.generator_index());
    Vec<Rat> vac = vec_unit<Rat>(heis.vacuum_index());

    // Heis (x) Heis, u = v = alpha(x)alpha, w = vac(x)vac, (m,n,h) = (0,0,-1)
    std::vector<Vec<Rat>> aa = {a, a};
    Vec<Rat> w = t.tensor_unit({heis.vacuum_index(), heis.vacuum_index()});
    auto Yk = [&](const std::vector<Vec<Rat>>& vs, int k, const Vec<Rat>& x) {
        return tensor_mode(t, vs, k, x);
    };
    int m = 0, n = 0, h = -1;
    // lhs: sum_l C(m,l) Y(Y(u)_{n+l} v)_{m+h-l} w with u,v in the tensor VOA:
    // here compute through the two-factor expansion of Y(u)_{n+l} v
    // (u = v = alpha (x) alpha lives in the tensor algebra Heis (x) Heis).
    // We realize the inner modes by tensor_mode on the tensor module itself,
    // viewing the algebra tensor as the module tensor of vacuum modules.
    Vec<Rat> lhs, rhs;
    for (int l = 0; l <= 6; ++l) {
        Rat c = binomial(m, l);
        if (c.is_zero())
            continue;
        Vec<Rat> inner = Yk(aa, n + l, w);
        (void)inner;
    }
    // full check: both orders of the double sum agree with the straight bracket
    for (int l = 0; l <= 8; ++l) {
        Rat c = binomial(n, l);
        if (l % 2 != 0)
            c = -c;
        Vec<Rat> t1 = Yk(aa, h + l, w);
        if (!t1.empty())
            vec_axpy(rhs, c, Yk(aa, m + n - l, t1));
        Rat c2 = binomial(n, l);
        if ((l + n) % 2 != 0)
            c2 = -c2;
        Vec<Rat> t2 = Yk(aa, m + l, w);
        if (!t2.empty())
            vec_axpy(rhs, -c2, Yk(aa, n + h - l, t2));
    }
    // lhs via the inner tensor-algebra mode: Y(u)_{n+l} v computed in the
    // tensor algebra of two vacuum modules at matching cutoff
    TensorModule<Rat> talg({&mh, &mh}, 4);
    Vec<Rat> uu = talg.tensor_unit({heis.generator_index(), heis.generator_index()});
    for (int l = 0; l <= 8; ++l) {
        Rat c = binomial(m, l);
        if (c.is_zero())
            continue;
        Vec<Rat> inner = tensor_mode(talg, aa, n + l, uu);
        if (inner.empty())
            continue;
        // expand inner over pure tensors and act on w
        for (const auto& [idx, ci] : inner) {
            std::vector<Vec<Rat>> factors;
            factors.push_back(vec_unit<Rat>(talg.tuple(idx)[0]));
            factors.push_back(vec_unit<Rat>(talg.tuple(idx)[1]));
            vec_axpy(lhs, c * ci, Yk(factors, m + h - l, w));
        }
    }
    REQUIRE(lhs == rhs);
}
