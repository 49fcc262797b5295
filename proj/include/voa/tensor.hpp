#pragma once

#include <numeric>

#include "module.hpp"

namespace voa {

// Tensor product of truncated modules, graded by the tuple of factor weights
// and truncated by total weight. Slot j acts on factor j; actions in distinct
// slots commute.
template <class K>
class TensorModule : public Module<K> {
  public:
    TensorModule(std::vector<const Module<K>*> factors, int cutoff)
        : factors_(std::move(factors)), cutoff_(cutoff) {
        for (const Module<K>* f : factors_) {
            if (f->slots() != 1)
                throw std::invalid_argument("TensorModule: factors must be single-slot modules");
            if (f->cutoff() < cutoff_)
                throw std::invalid_argument("TensorModule: factor cutoff below product cutoff");
        }
        std::vector<int> tuple(factors_.size(), 0);
        enumerate(0, 0, tuple);
        std::sort(tuples_.begin(), tuples_.end(), [&](const auto& a, const auto& b) {
            int wa = tuple_weight(a), wb = tuple_weight(b);
            if (wa != wb)
                return wa < wb;
            return a < b;
        });
        for (size_t i = 0; i < tuples_.size(); ++i)
            index_.emplace(tuples_[i], static_cast<int>(i));
    }

    int slots() const override { return static_cast<int>(factors_.size()); }
    const VertexAlgebra<K>& algebra(int slot) const override { return factors_[slot]->algebra(0); }
    int cutoff() const override { return cutoff_; }
    int dim() const override { return static_cast<int>(tuples_.size()); }
    int weight(int idx, int slot) const override {
        return factors_[slot]->weight(tuples_[idx][slot], 0);
    }
    std::string label(int idx) const override {
        std::string s;
        for (int j = 0; j < slots(); ++j) {
            if (j)
                s += " (x) ";
            s += factors_[j]->label(tuples_[idx][j]);
        }
        return s;
    }

    const std::vector<int>& tuple(int idx) const { return tuples_[idx]; }
    int index_of(const std::vector<int>& tuple) const {
        auto it = index_.find(tuple);
        return it == index_.end() ? -1 : it->second;
    }

    // Pure tensor of factor basis vectors.
    Vec<K> tensor_unit(const std::vector<int>& tuple) const {
        int idx = index_of(tuple);
        if (idx < 0)
            throw CutoffExceeded(tuple_weight(tuple), cutoff_);
        return vec_unit<K>(idx);
    }

    Vec<K> act_basis(int slot, int a_idx, int n, int w_idx) const override {
        const int shift = algebra(slot).weight(a_idx) - n - 1;
        const int out_wt = this->total_weight(w_idx) + shift;
        if (out_wt < 0)
            return {};
        if (out_wt > cutoff_)
            throw CutoffExceeded(out_wt, cutoff_);
        Vec<K> comp = factors_[slot]->act_basis(0, a_idx, n, tuples_[w_idx][slot]);
        Vec<K> out;
        std::vector<int> t = tuples_[w_idx];
        for (const auto& [j, c] : comp) {
            t[slot] = j;
            vec_add_term(out, index_.at(t), c);
        }
        return out;
    }

  private:
    void enumerate(size_t pos, int wt, std::vector<int>& tuple) {
        if (pos == factors_.size()) {
            tuples_.push_back(tuple);
            return;
        }
        const Module<K>* f = factors_[pos];
        for (int i = 0; i < f->dim(); ++i) {
            int w = f->weight(i, 0);
            if (wt + w > cutoff_)
                continue;
            tuple[pos] = i;
            enumerate(pos + 1, wt + w, tuple);
        }
    }

    int tuple_weight(const std::vector<int>& t) const {
        int w = 0;
        for (size_t j = 0; j < factors_.size(); ++j)
            w += factors_[j]->weight(t[j], 0);
        return w;
    }

    std::vector<const Module<K>*> factors_;
    int cutoff_;
    std::vector<std::vector<int>> tuples_;
    std::map<std::vector<int>, int> index_;
};

// The combined mode Y(v_1 (x) ... (x) v_N)_k w = sum over k_1+...+k_N = k+1-N
// of Y_1(v_1)_{k_1} ... Y_N(v_N)_{k_N} w. Slot actions commute, so each
// summand is applied lowering-slots-first; intermediates then never leave the
// truncation when the final weight is inside it. The number of nonzero
// summands (a finite count) is reported through `nonzero_terms`.
template <class K>
Vec<K> tensor_mode(const Module<K>& mod, const std::vector<Vec<K>>& vs, int k, const Vec<K>& w,
                   long* nonzero_terms = nullptr) {
    const int N = mod.slots();
    if (static_cast<int>(vs.size()) != N)
        throw std::invalid_argument("tensor_mode: one insertion per slot required");
    std::vector<int> hv(N);
    for (int j = 0; j < N; ++j) {
        hv[j] = max_component_weight(mod.algebra(j), vs[j]);
        if (hv[j] < 0) {
            if (nonzero_terms)
                *nonzero_terms = 0;
            return {};
        }
    }

    // split w into slot-homogeneous groups
    std::map<std::vector<int>, Vec<K>> groups;
    for (const auto& [i, c] : w) {
        std::vector<int> wt(N);
        for (int j = 0; j < N; ++j)
            wt[j] = mod.weight(i, j);
        groups[wt][i] = c;
    }

    long count = 0;
    Vec<K> out;
    for (const auto& [wt, piece] : groups) {
        // per-slot mode ranges for a nonzero summand on this weight block
        std::vector<int> lo(N), hi(N);
        for (int j = 0; j < N; ++j) {
            hi[j] = hv[j] + wt[j] - 1;                 // lower truncation
            lo[j] = hv[j] + wt[j] - 1 - mod.cutoff();  // slot output weight <= cutoff
        }
        std::vector<int> ks(N);
        auto emit = [&]() {
            // apply slots ordered by weight shift, lowering first
            std::vector<int> order(N);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                int sa = hv[a] - ks[a] - 1, sb = hv[b] - ks[b] - 1;
                if (sa != sb)
                    return sa < sb;
                return a < b;
            });
            Vec<K> x = piece;
            for (int j : order) {
                x = mod.act(j, vs[j], ks[j], x);
                if (x.empty())
                    return;
            }
            ++count;
            vec_axpy(out, K(1), x);
        };
        auto rec = [&](auto&& self, int slot, int budget) -> void {
            if (slot == 0) {
                if (budget >= lo[0] && budget <= hi[0]) {
                    ks[0] = budget;
                    emit();
                }
                return;
            }
            int rest_lo = 0, rest_hi = 0;
            for (int j = 0; j < slot; ++j) {
                rest_lo += lo[j];
                rest_hi += hi[j];
            }
            for (int kj = std::max(lo[slot], budget - rest_hi);
                 kj <= std::min(hi[slot], budget - rest_lo); ++kj) {
                ks[slot] = kj;
                self(self, slot - 1, budget - kj);
            }
        };
        rec(rec, N - 1, k + 1 - N);
    }
    if (nonzero_terms)
        *nonzero_terms = count;
    return out;
}

} // namespace voa
