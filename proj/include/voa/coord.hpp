#pragma once

#include <vector>

#include "laurent.hpp"
#include "module.hpp"

namespace voa {

// A local coordinate change rho with rho(0) = 0, rho'(0) != 0, stored through
// its exponential coordinates: rho(z) = leading * exp(sum_n c_n z^{n+1} d/dz) z.
// The pair (leading, c_1..c_order) determines rho through order z^{order+1}.
template <class K>
class CoordMap {
  public:
    CoordMap(K leading, std::vector<K> c) : leading_(std::move(leading)), c_(std::move(c)) {
        if (leading_.is_zero())
            throw std::invalid_argument("CoordMap: rho'(0) must be nonzero");
    }

    static CoordMap identity(int order) { return CoordMap(K(1), std::vector<K>(order, K(0))); }
    static CoordMap scaling(K a, int order) {
        return CoordMap(std::move(a), std::vector<K>(order, K(0)));
    }

    const K& leading() const { return leading_; }
    const std::vector<K>& coeffs() const { return c_; }
    int order() const { return static_cast<int>(c_.size()); }

    // Power series of rho through z^{max_order}.
    Laurent<K> expand(int max_order) const {
        Laurent<K> term = Laurent<K>::term(1, K(1));
        Laurent<K> sum = term;
        Rat fact(1);
        for (int k = 1; !term.is_zero() && k <= max_order; ++k) {
            term = derivation(term, max_order);
            fact = fact * Rat(k);
            sum += term.scaled(k_rat<K>(Rat(1) / fact));
        }
        return sum.scaled(leading_).truncated(max_order);
    }

    // Unique exponential coordinates reproducing a power series with
    // rho(0) = 0, rho'(0) != 0, matched through z^{order+1}.
    static CoordMap fit(const Laurent<K>& rho, int order) {
        if (!rho.is_zero() && rho.min_exp() < 1)
            throw std::invalid_argument("CoordMap::fit: series must vanish at 0");
        const K leading = rho.coeff(1);
        if (leading.is_zero())
            throw std::invalid_argument("CoordMap::fit: degenerate map, rho'(0) = 0");
        CoordMap r(leading, {});
        for (int m = 1; m <= order; ++m) {
            Laurent<K> cur = r.expand(m + 1);
            K delta = rho.coeff(m + 1) - cur.coeff(m + 1);
            r.c_.push_back(delta / leading);
        }
        return r;
    }

    // Composition rho1 . rho2 fitted to the shared order.
    static CoordMap compose(const CoordMap& r1, const CoordMap& r2, int order) {
        Laurent<K> s1 = r1.expand(order + 1);
        Laurent<K> s2 = r2.expand(order + 1);
        return fit(Laurent<K>::compose(s1, s2, order + 1), order);
    }

    CoordMap inverse(int order) const {
        return fit(expand(order + 1).inverse_series(order + 1), order);
    }

  private:
    Laurent<K> derivation(const Laurent<K>& f, int max_order) const {
        // sum_n c_n z^{n+1} f'(z), truncated
        Laurent<K> out;
        for (const auto& [j, a] : f.terms()) {
            if (j == 0)
                continue;
            for (size_t n = 1; n <= c_.size(); ++n) {
                if (c_[n - 1].is_zero())
                    continue;
                int e = j + static_cast<int>(n);
                if (e <= max_order)
                    out.add_term(e, a * K(j) * c_[n - 1]);
            }
        }
        return out;
    }

    K leading_;
    std::vector<K> c_;
};

namespace detail {
template <class K>
K int_pow(K base, int e) {
    if (e < 0)
        return K(1) / int_pow(base, -e);
    K r(1);
    while (e > 0) {
        if (e & 1)
            r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}
} // namespace detail

// base^{Ltilde_slot(0)} v: scales each slot-homogeneous component by
// base^{weight}. exponent_sign -1 gives base^{-Ltilde(0)}.
template <class K>
Vec<K> weight_scale(const Module<K>& mod, int slot, const K& base, const Vec<K>& v,
                    int exponent_sign = 1) {
    Vec<K> out;
    for (const auto& [i, c] : v)
        vec_add_term(out, i, c * detail::int_pow(base, exponent_sign * mod.weight(i, slot)));
    return out;
}

// The coordinate-change operator U_slot(rho) = rho'(0)^{Ltilde_slot(0)}
// exp(sum_n c_n L_slot(n)) acting on a truncated module vector. The modes
// L(n), n >= 1, lower weight, so the exponential is a finite sum on each
// vector. Requires rho to carry coefficients through the top weight of v.
template <class K>
Vec<K> apply_coord(const Module<K>& mod, int slot, const CoordMap<K>& rho, const Vec<K>& v) {
    int top = 0;
    for (const auto& [i, c] : v)
        top = std::max(top, mod.weight(i, slot));
    if (rho.order() < top)
        throw std::invalid_argument("apply_coord: map fitted to insufficient order");

    // X = sum_n c_n L_slot(n); exp(X) v = sum_k X^k v / k!
    auto X = [&](const Vec<K>& w) {
        Vec<K> out;
        for (int n = 1; n <= top; ++n) {
            if (rho.coeffs()[n - 1].is_zero())
                continue;
            vec_axpy(out, rho.coeffs()[n - 1], mod.virasoro(slot, n, w));
        }
        return out;
    };
    Vec<K> term = v, sum = v;
    Rat fact(1);
    for (int k = 1; !term.empty(); ++k) {
        term = X(term);
        fact = fact * Rat(k);
        if (!term.empty())
            vec_axpy(sum, k_rat<K>(Rat(1) / fact), term);
    }
    return weight_scale(mod, slot, rho.leading(), sum);
}

// e^{z L(1)} (-z^{-2})^{L(0)} v, the closed form of the coordinate inversion
// operator at the point z; the sign is resolved as (-1)^{L(0)} z^{-2 L(0)}
// (integral weights, no branch ambiguity).
template <class K>
Vec<K> coord_inversion_closed(const Module<K>& mod, int slot, const K& z, const Vec<K>& v) {
    Vec<K> scaled;
    for (const auto& [i, c] : v) {
        const int w = mod.weight(i, slot);
        K f = detail::int_pow(z, -2 * w);
        if (w % 2 != 0)
            f = -f;
        vec_add_term(scaled, i, c * f);
    }
    Vec<K> sum = scaled, term = scaled;
    Rat fact(1);
    for (int k = 1; !term.empty(); ++k) {
        term = mod.virasoro(slot, 1, term);
        term = vec_scaled(term, z);
        fact = fact * Rat(k);
        vec_axpy(sum, k_rat<K>(Rat(1) / fact), term);
    }
    return sum;
}

// The series of gamma_z(s) = 1/(z+s) - 1/z = sum_{k>=1} (-1)^k z^{-k-1} s^k
// for an invertible parameter z of the scalar field.
template <class K>
Laurent<K> inversion_chart_series(const K& z, int max_order) {
    Laurent<K> out;
    K zp = K(1) / (z * z);
    for (int k = 1; k <= max_order; ++k) {
        out.add_term(k, k % 2 == 0 ? zp : -zp);
        zp = zp / z;
    }
    return out;
}

} // namespace voa
