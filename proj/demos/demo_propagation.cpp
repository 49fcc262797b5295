// Propagate a block functional of the level-0 sphere: print the rational
// functions attached to low-weight insertions and check them against the
// mode expansions at the incoming point.

#include <iostream>

#include "voa/zhu.hpp"

using namespace voa;

int main() {
    auto alg = VertexAlgebra<Rat>::free_boson(6);
    VacuumModule<Rat> mod(alg);
    auto X = zhu_sphere<Rat>(0);
    auto z = build_zhu(alg, 0);
    auto duals = quotient_dual_basis(alg, z.geometric.quotient);

    // the functional dual to the class of a(-1)|0>
    const Vec<Rat>& phi = duals[1];
    Propagation<Rat> prop(alg, X, mod, phi);

    for (int v = 0; v < alg.dim() && alg.weight(v) <= 2; ++v)
        for (int w = 0; w < mod.dim() && mod.total_weight(w) <= 1; ++w) {
            RationalFn<Rat> f = prop.function(vec_unit<Rat>(v), vec_unit<Rat>(w));
            if (f.is_zero())
                continue;
            std::cout << "insertion " << alg.label_string(v) << " against "
                      << alg.label_string(w) << ":\n";
            std::cout << "  numerator  " << f.num().str("z") << "\n";
            std::cout << "  poles     ";
            for (const auto& [p, k] : f.poles())
                std::cout << " (z - " << p.str() << ")^" << k;
            std::cout << "\n  expansion at the incoming point: "
                      << f.expand_at(Rat(1), 3).str("(z-1)") << " + ...\n";
        }
    std::cout << "gluing certificate: "
              << (prop.passes_gluing_test(vec_unit<Rat>(alg.vacuum_index()), 2, 3) ? "pass"
                                                                                   : "fail")
              << "\n";
    return 0;
}
