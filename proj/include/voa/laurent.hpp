#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "rational.hpp"

namespace voa {

// Sparse Laurent polynomial / truncated Laurent series over K, indexed by
// integer exponent. No zero coefficients are stored. Truncation orders are
// passed explicitly to the operations that need them.
template <class K>
class Laurent {
  public:
    Laurent() = default;
    explicit Laurent(K c) { add_term(0, std::move(c)); }

    static Laurent term(int n, K c) {
        Laurent f;
        f.add_term(n, std::move(c));
        return f;
    }

    bool is_zero() const { return c_.empty(); }
    int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
    int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    const K& coeff(int n) const {
        static const K zero = K(0);
        auto it = c_.find(n);
        return it == c_.end() ? zero : it->second;
    }

    // Res_{z=0} f dz = coefficient of z^{-1}.
    const K& residue() const { return coeff(-1); }

    void add_term(int n, K c) { acc(n, std::move(c)); }

    Laurent& operator+=(const Laurent& o) {
        for (const auto& [n, c] : o.c_)
            acc(n, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        for (const auto& [n, c] : o.c_)
            acc(n, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    Laurent operator-() const {
        Laurent r;
        for (const auto& [n, c] : c_)
            r.c_.emplace(n, -c);
        return r;
    }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (const auto& [n, cn] : a.c_)
            for (const auto& [m, cm] : b.c_)
                r.acc(n + m, cn * cm);
        return r;
    }

    Laurent scaled(const K& s) const {
        Laurent r;
        if (s.is_zero())
            return r;
        for (const auto& [n, c] : c_)
            r.acc(n, c * s);
        return r;
    }

    Laurent shifted(int k) const {
        Laurent r;
        for (const auto& [n, c] : c_)
            r.c_.emplace(n + k, c);
        return r;
    }

    Laurent truncated(int max_order) const {
        Laurent r;
        for (const auto& [n, c] : c_)
            if (n <= max_order)
                r.c_.emplace(n, c);
        return r;
    }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    const std::map<int, K>& terms() const { return c_; }

    // f(g(z)) to order <= max_order; g must have valuation >= 1 and f no
    // negative exponents (power series composition).
    static Laurent compose(const Laurent& f, const Laurent& g, int max_order) {
        if (f.min_exp() < 0)
            throw std::invalid_argument("Laurent::compose: negative exponent in outer series");
        if (!g.is_zero() && g.min_exp() < 1)
            throw std::invalid_argument("Laurent::compose: inner series must vanish at 0");
        Laurent result, power(K(1));
        for (int k = 0; k <= f.max_exp(); ++k) {
            result += power.scaled(f.coeff(k));
            if (k < f.max_exp())
                power = (power * g).truncated(max_order);
            if (power.is_zero() && k >= 1)
                break;
        }
        return result.truncated(max_order);
    }

    // 1/f to order <= max_order, for f with invertible lowest coefficient.
    Laurent reciprocal(int max_order) const {
        if (is_zero())
            throw std::domain_error("Laurent: reciprocal of zero");
        const int v = min_exp();
        const K lead = coeff(v);
        // f = lead z^v (1 + u), invert the unit part by geometric series.
        Laurent u;
        for (const auto& [n, c] : c_)
            if (n != v)
                u.acc(n - v, c / lead);
        Laurent inv_unit(K(1)), power(K(1));
        const int depth = max_order + v; // orders of u needed
        for (int k = 1; k <= depth; ++k) {
            power = (power * u).truncated(depth);
            if (power.is_zero())
                break;
            if (k % 2 == 0)
                inv_unit += power;
            else
                inv_unit -= power;
        }
        Laurent r;
        const K li = K(1) / lead;
        for (const auto& [n, c] : inv_unit.c_)
            r.acc(n - v, c * li);
        return r.truncated(max_order);
    }

    // Compositional inverse of a series with valuation exactly 1, to order.
    Laurent inverse_series(int max_order) const {
        if (min_exp() != 1)
            throw std::invalid_argument("Laurent: compositional inverse needs valuation 1");
        Laurent g = term(1, K(1) / coeff(1));
        for (int m = 2; m <= max_order; ++m) {
            // choose g_m so that f(g(z)) = z through order m
            Laurent fg = compose(*this, g, m);
            K err = fg.coeff(m);
            if (!err.is_zero())
                g.acc(m, -err / coeff(1));
        }
        return g;
    }

    Laurent derivative() const {
        Laurent r;
        for (const auto& [n, c] : c_)
            if (n != 0)
                r.c_.emplace(n - 1, c * K(n));
        return r;
    }

    std::string str(const std::string& var = "z") const {
        if (is_zero())
            return "0";
        std::string s;
        for (const auto& [n, c] : c_) {
            if (!s.empty())
                s += " + ";
            s += "(" + c.str() + ")";
            if (n != 0)
                s += "*" + var + "^" + std::to_string(n);
        }
        return s;
    }

  private:
    void acc(int n, K c) {
        if (c.is_zero())
            return;
        auto it = c_.find(n);
        if (it == c_.end()) {
            c_.emplace(n, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero())
                c_.erase(it);
        }
    }

    std::map<int, K> c_;
};

} // namespace voa
