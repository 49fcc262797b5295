#pragma once

#include <map>

#include "laurent.hpp"
#include "poly.hpp"

namespace voa {

// Rational function of the global coordinate zeta on the sphere, with the
// finite poles kept factored: f = num(zeta) / prod_p (zeta - p)^{m_p}.
// Canonical form: num has no zero at any stored pole (multiplicities exact).
template <class K>
class RationalFn {
  public:
    RationalFn() = default;
    RationalFn(Poly<K> num, std::map<K, int> poles) : num_(std::move(num)), poles_(std::move(poles)) {
        normalize();
    }
    explicit RationalFn(Poly<K> num) : num_(std::move(num)) {}
    explicit RationalFn(K c) : num_(Poly<K>(std::move(c))) {}

    static RationalFn zero() { return RationalFn(); }

    const Poly<K>& num() const { return num_; }
    const std::map<K, int>& poles() const { return poles_; }
    bool is_zero() const { return num_.is_zero(); }

    int pole_order_at(const K& p) const {
        auto it = poles_.find(p);
        return it == poles_.end() ? 0 : it->second;
    }

    // degree as zeta -> infinity (pole order at infinity when positive)
    int degree_at_infinity() const {
        if (num_.is_zero())
            return std::numeric_limits<int>::min();
        int m = 0;
        for (const auto& [p, k] : poles_)
            m += k;
        return num_.degree() - m;
    }

    Poly<K> denominator() const {
        Poly<K> d(K(1));
        for (const auto& [p, k] : poles_)
            for (int i = 0; i < k; ++i)
                d *= Poly<K>(std::vector<K>{-p, K(1)});
        return d;
    }

    RationalFn operator-() const {
        RationalFn r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        std::map<K, int> poles;
        for (const auto& [p, k] : a.poles_)
            poles[p] = k;
        for (const auto& [p, k] : b.poles_) {
            auto it = poles.find(p);
            if (it == poles.end())
                poles[p] = k;
            else
                it->second = std::max(it->second, k);
        }
        auto lift = [&](const RationalFn& f) {
            Poly<K> n = f.num_;
            for (const auto& [p, k] : poles) {
                int extra = k - f.pole_order_at(p);
                for (int i = 0; i < extra; ++i)
                    n *= Poly<K>(std::vector<K>{-p, K(1)});
            }
            return n;
        };
        Poly<K> num = lift(a) + lift(b); // sequence before the map is moved out
        return RationalFn(std::move(num), std::move(poles));
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        std::map<K, int> poles = a.poles_;
        for (const auto& [p, k] : b.poles_)
            poles[p] += k;
        return RationalFn(a.num_ * b.num_, std::move(poles));
    }

    RationalFn scaled(const K& c) const {
        if (c.is_zero())
            return RationalFn();
        RationalFn r = *this;
        r.num_ = r.num_.scaled(c);
        return r;
    }

    friend bool operator==(const RationalFn& a, const RationalFn& b) {
        return (a - b).is_zero();
    }

    // value at a finite non-pole point
    K eval(const K& x) const {
        K d(1);
        for (const auto& [p, k] : poles_)
            for (int i = 0; i < k; ++i)
                d *= x - p;
        if (d.is_zero())
            throw std::domain_error("RationalFn: evaluation at a pole");
        return num_.eval(x) / d;
    }

    // Laurent expansion in z = zeta - p through z^{max_order}
    Laurent<K> expand_at(const K& p, int max_order) const {
        if (is_zero())
            return {};
        const int m = pole_order_at(p);
        const int need = max_order + m;
        if (need < 0)
            return {};
        // f = h(z) / z^m in z = zeta - p, with h regular at 0
        Poly<K> hn = num_.shifted(p);
        Poly<K> hd(K(1));
        for (const auto& [q, k] : poles_) {
            if (q == p)
                continue;
            Poly<K> factor(std::vector<K>{p - q, K(1)}); // (z + p - q)
            for (int i = 0; i < k; ++i)
                hd *= factor;
        }
        Laurent<K> series_n = poly_to_series(hn, need);
        Laurent<K> res = (series_n * poly_to_series(hd, need).reciprocal(need)).truncated(need);
        return res.shifted(-m).truncated(max_order);
    }

    // Laurent expansion at infinity in u = 1/zeta through u^{max_order}
    Laurent<K> expand_at_infinity(int max_order) const {
        if (is_zero())
            return {};
        // f(1/u) = u^{M - dn} rev(num)(u) / prod (1 - p u)^{m_p}
        const int dn = num_.degree();
        Poly<K> rev;
        for (int i = 0; i <= dn; ++i)
            rev.set_coeff(dn - i, num_.coeff(i));
        int M = 0;
        Poly<K> den(K(1));
        for (const auto& [p, k] : poles_) {
            M += k;
            for (int i = 0; i < k; ++i)
                den *= Poly<K>(std::vector<K>{K(1), -p});
        }
        const int shift = M - dn;
        const int need = max_order - shift;
        if (need < 0)
            return {};
        Laurent<K> series = (poly_to_series(rev, need) * poly_to_series(den, need).reciprocal(need))
                                .truncated(need);
        return series.shifted(shift);
    }

    K residue_at(const K& p) const { return expand_at(p, -1).coeff(-1); }

    // residue of f dzeta at infinity: -[u^1] f(1/u)
    K residue_at_infinity() const { return -expand_at_infinity(1).coeff(1); }

  private:
    static Laurent<K> poly_to_series(const Poly<K>& p, int max_order) {
        Laurent<K> s;
        for (int i = 0; i <= std::min(p.degree(), max_order); ++i)
            s.add_term(i, p.coeff(i));
        return s;
    }

    void normalize() {
        if (num_.is_zero()) {
            poles_.clear();
            return;
        }
        for (auto it = poles_.begin(); it != poles_.end();) {
            const K& p = it->first;
            int cancel = 0;
            Poly<K> n = num_;
            while (cancel < it->second && n.eval(p).is_zero()) {
                n = Poly<K>::divmod(n, Poly<K>(std::vector<K>{-p, K(1)})).first;
                ++cancel;
            }
            if (cancel > 0) {
                num_ = n;
                it->second -= cancel;
            }
            if (it->second == 0)
                it = poles_.erase(it);
            else
                ++it;
        }
    }

    Poly<K> num_;
    std::map<K, int> poles_;
};

} // namespace voa
