#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace voa {

// A PBW label: modes of the generator applied to the vacuum, recorded as a
// descending multiset of positive integers (the label [3,1,1] stands for
// g(-3) g(-1)^2 |0>). The empty label is the vacuum.
using Partition = std::vector<int>;

inline int partition_weight(const Partition& p) {
    int w = 0;
    for (int x : p)
        w += x;
    return w;
}

inline std::vector<Partition> partitions_of(int n, int min_part) {
    std::vector<Partition> out;
    Partition cur;
    // largest part first, recursively
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= min_part; --p) {
            cur.push_back(p);
            self(self, remaining - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    // graded-lex convention: within a weight, labels ordered lexicographically
    std::sort(out.begin(), out.end());
    return out;
}

// Partition-indexed homogeneous basis of a truncated graded space; weight n
// slice holds all labels of weight n with parts >= min_part.
class PartitionBasis {
  public:
    PartitionBasis() = default;
    PartitionBasis(int cutoff, int min_part) : cutoff_(cutoff), min_part_(min_part) {
        offset_.resize(cutoff + 2, 0);
        for (int w = 0; w <= cutoff; ++w) {
            offset_[w] = static_cast<int>(labels_.size());
            for (auto& p : partitions_of(w, min_part)) {
                index_.emplace(p, static_cast<int>(labels_.size()));
                weight_of_.push_back(w);
                labels_.push_back(std::move(p));
            }
        }
        offset_[cutoff + 1] = static_cast<int>(labels_.size());
    }

    int cutoff() const { return cutoff_; }
    int min_part() const { return min_part_; }
    int dim() const { return static_cast<int>(labels_.size()); }
    int dim_at(int w) const { return offset_[w + 1] - offset_[w]; }
    int first_index_at(int w) const { return offset_[w]; }
    int weight(int idx) const { return weight_of_[idx]; }
    const Partition& label(int idx) const { return labels_[idx]; }

    int index_of(const Partition& p) const {
        auto it = index_.find(p);
        return it == index_.end() ? -1 : it->second;
    }

    std::string label_string(int idx, const std::string& gen) const {
        const Partition& p = labels_[idx];
        if (p.empty())
            return "|0>";
        std::string s;
        for (size_t i = 0; i < p.size();) {
            size_t j = i;
            while (j < p.size() && p[j] == p[i])
                ++j;
            s += gen + "(-" + std::to_string(p[i]) + ")";
            if (j - i > 1)
                s += "^" + std::to_string(j - i);
            i = j;
        }
        return s + "|0>";
    }

  private:
    int cutoff_ = 0, min_part_ = 1;
    std::vector<Partition> labels_;
    std::vector<int> weight_of_;
    std::vector<int> offset_;
    std::map<Partition, int> index_;
};

} // namespace voa
