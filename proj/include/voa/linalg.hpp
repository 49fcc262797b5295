#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace voa {

// Sparse row over K: column index -> nonzero entry.
template <class K>
using SparseRow = std::map<int, K>;

// Exact sparse matrix in row-major form. Row and column counts are fixed at
// construction; entries are kept free of stored zeros.
template <class K>
class SparseMatrix {
  public:
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), r_(rows) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void add(int i, int j, const K& v) {
        if (v.is_zero())
            return;
        auto it = r_[i].find(j);
        if (it == r_[i].end()) {
            r_[i].emplace(j, v);
        } else {
            it->second += v;
            if (it->second.is_zero())
                r_[i].erase(it);
        }
    }
    void set(int i, int j, K v) {
        if (v.is_zero())
            r_[i].erase(j);
        else
            r_[i][j] = std::move(v);
    }
    const SparseRow<K>& row(int i) const { return r_[i]; }
    void append_row(SparseRow<K> row) {
        r_.push_back(std::move(row));
        ++rows_;
    }

  private:
    int rows_, cols_;
    std::vector<SparseRow<K>> r_;

    template <class K2>
    friend class Echelon;
};

// Reduced row echelon form with the deterministic pivot rule: each elimination
// step pivots on the smallest column index present among the remaining rows,
// breaking ties by row order. Two runs on equal input produce equal output.
template <class K>
class Echelon {
  public:
    explicit Echelon(const SparseMatrix<K>& m) : cols_(m.cols()) {
        for (int i = 0; i < m.rows(); ++i)
            insert(m.row(i));
    }
    Echelon(int cols) : cols_(cols) {}

    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    // Reduce a row against the current basis; returns the fully reduced row.
    SparseRow<K> reduce(SparseRow<K> v) const {
        for (const auto& [piv, row] : rows_) {
            auto it = v.find(piv);
            if (it == v.end())
                continue;
            K f = it->second;
            v.erase(it);
            for (const auto& [j, c] : row) {
                if (j == piv)
                    continue;
                auto jt = v.find(j);
                if (jt == v.end()) {
                    K nv = -(f * c);
                    if (!nv.is_zero())
                        v.emplace(j, std::move(nv));
                } else {
                    jt->second -= f * c;
                    if (jt->second.is_zero())
                        v.erase(jt);
                }
            }
        }
        return v;
    }

    // Insert a row (reducing it first). Returns the pivot column if the row
    // added a new direction, nullopt if it was dependent.
    std::optional<int> insert(SparseRow<K> v) {
        v = reduce(std::move(v));
        if (v.empty())
            return std::nullopt;
        const int piv = v.begin()->first;
        const K inv = K(1) / v.begin()->second;
        for (auto& [j, c] : v)
            c = c * inv;
        // back-substitute into existing rows to keep the form fully reduced
        for (auto& [p, row] : rows_) {
            auto it = row.find(piv);
            if (it == row.end())
                continue;
            K f = it->second;
            row.erase(it);
            for (const auto& [j, c] : v) {
                if (j == piv)
                    continue;
                auto jt = row.find(j);
                if (jt == row.end()) {
                    K nv = -(f * c);
                    if (!nv.is_zero())
                        row.emplace(j, std::move(nv));
                } else {
                    jt->second -= f * c;
                    if (jt->second.is_zero())
                        row.erase(jt);
                }
            }
        }
        rows_.emplace(piv, std::move(v));
        return piv;
    }

    bool contains(const SparseRow<K>& v) const { return reduce(v).empty(); }

    const std::map<int, SparseRow<K>>& pivot_rows() const { return rows_; }

    std::vector<int> pivot_columns() const {
        std::vector<int> p;
        p.reserve(rows_.size());
        for (const auto& [piv, row] : rows_)
            p.push_back(piv);
        return p;
    }

    std::vector<int> free_columns() const {
        std::vector<int> f;
        auto piv = pivot_columns();
        size_t k = 0;
        for (int j = 0; j < cols_; ++j) {
            if (k < piv.size() && piv[k] == j)
                ++k;
            else
                f.push_back(j);
        }
        return f;
    }

  private:
    int cols_;
    std::map<int, SparseRow<K>> rows_; // pivot column -> normalized row
};

// Exact basis of ker M, one vector per free column, in column order.
template <class K>
std::vector<SparseRow<K>> kernel_basis(const SparseMatrix<K>& m) {
    Echelon<K> ech(m);
    std::vector<SparseRow<K>> basis;
    for (int j : ech.free_columns()) {
        SparseRow<K> v;
        v.emplace(j, K(1));
        for (const auto& [piv, row] : ech.pivot_rows()) {
            auto it = row.find(j);
            if (it != row.end())
                v.emplace(piv, -it->second);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class K>
int rank(const SparseMatrix<K>& m) {
    return Echelon<K>(m).rank();
}

// Quotient of an ambient space by the span of relation vectors.
// Representatives are the non-pivot coordinates under echelon reduction of the
// relations; project() rewrites any ambient vector in those representatives.
// Pivots are taken at the LARGEST coordinate index, so on a weight-ordered
// basis each relation eliminates its top-weight component and the
// representatives sit at the bottom of the filtration (stable under raising
// the cutoff). Projection coordinates are reported against ambient indices.
template <class K>
class QuotientData {
  public:
    QuotientData() : ech_(0) {}
    QuotientData(int ambient_dim, const std::vector<SparseRow<K>>& relations)
        : ambient_(ambient_dim), ech_(ambient_dim) {
        for (const auto& r : relations)
            ech_.insert(flip(r));
        for (int j : ech_.free_columns())
            reps_.push_back(ambient_ - 1 - j);
        std::sort(reps_.begin(), reps_.end());
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(reps_.size()); }
    const std::vector<int>& representatives() const { return reps_; }

    // Expresses an ambient vector over the representative coordinates
    // (keys are ambient indices of representatives), exactly.
    SparseRow<K> project(const SparseRow<K>& v) const {
        SparseRow<K> red = ech_.reduce(flip(v));
        return flip(red);
    }

    bool in_relation_span(const SparseRow<K>& v) const { return ech_.contains(flip(v)); }

  private:
    SparseRow<K> flip(const SparseRow<K>& v) const {
        SparseRow<K> out;
        for (const auto& [j, c] : v)
            out.emplace(ambient_ - 1 - j, c);
        return out;
    }

    int ambient_ = 0;
    Echelon<K> ech_;
    std::vector<int> reps_;
};

// Dense exact linear solve A x = b by Gauss elimination with the
// smallest-index pivot rule. Returns nullopt if inconsistent; reports the
// kernel dimension so callers can detect underdetermined systems.
template <class K>
struct LinearSolution {
    std::vector<K> x;
    int kernel_dim = 0;
};

template <class K>
std::optional<LinearSolution<K>> solve_linear(std::vector<std::vector<K>> a,
                                              std::vector<K> b) {
    const int m = static_cast<int>(a.size());
    const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
    std::vector<int> pivot_of_col(n, -1);
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i) {
            if (!a[i][col].is_zero()) {
                sel = i;
                break;
            }
        }
        if (sel < 0)
            continue;
        std::swap(a[sel], a[row]);
        std::swap(b[sel], b[row]);
        const K inv = K(1) / a[row][col];
        for (int j = col; j < n; ++j)
            a[row][j] = a[row][j] * inv;
        b[row] = b[row] * inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || a[i][col].is_zero())
                continue;
            const K f = a[i][col];
            for (int j = col; j < n; ++j)
                a[i][j] = a[i][j] - f * a[row][j];
            b[i] = b[i] - f * b[row];
        }
        pivot_of_col[col] = row;
        ++row;
    }
    for (int i = row; i < m; ++i)
        if (!b[i].is_zero())
            return std::nullopt;
    LinearSolution<K> sol;
    sol.x.assign(n, K(0));
    sol.kernel_dim = n - row;
    for (int col = 0; col < n; ++col)
        if (pivot_of_col[col] >= 0)
            sol.x[col] = b[pivot_of_col[col]];
    return sol;
}

} // namespace voa
