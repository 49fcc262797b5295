// Build the level-0 quotient algebra of the rank-one free boson and print its
// representatives and multiplication table. The quotient collapses each PBW
// monomial onto a polynomial algebra in the class of a(-1)|0>.

#include <iostream>

#include "voa/zhu.hpp"

using namespace voa;

int main() {
    const int cutoff = 6, level = 0;
    auto alg = VertexAlgebra<Rat>::free_boson(cutoff);
    auto z = build_zhu(alg, level);

    std::cout << "level " << level << " quotient of the free boson, cutoff " << cutoff << "\n";
    std::cout << "two quotient pipelines agree: " << (z.pipelines_match ? "yes" : "NO") << "\n\n";

    const auto& q = z.classical;
    std::cout << "representatives (" << q.dim() << "):\n";
    std::map<int, int> pos;
    for (size_t i = 0; i < q.representatives().size(); ++i) {
        int r = q.representatives()[i];
        pos[r] = static_cast<int>(i);
        std::cout << "  [" << i << "] " << alg.label_string(r) << "  (weight "
                  << alg.weight(r) << ")\n";
    }

    std::cout << "\nproducts [i].[j] reduced to representatives:\n";
    for (size_t i = 0; i < q.representatives().size(); ++i)
        for (size_t j = 0; j < q.representatives().size(); ++j) {
            int ri = q.representatives()[i], rj = q.representatives()[j];
            if (alg.weight(ri) + alg.weight(rj) + 2 * level > cutoff)
                continue;
            Vec<Rat> prod = diamond_raw(alg, level, vec_unit<Rat>(ri), vec_unit<Rat>(rj), true);
            SparseRow<Rat> red = q.project(prod);
            std::cout << "  [" << i << "].[" << j << "] =";
            if (red.empty())
                std::cout << " 0";
            for (const auto& [r, c] : red)
                std::cout << " + (" << c.str() << ")[" << pos.at(r) << "]";
            std::cout << "\n";
        }
    return 0;
}
