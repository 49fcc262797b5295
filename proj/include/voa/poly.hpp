#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace voa {

// Dense univariate polynomial over an exact field K. Trailing zeros are
// stripped, so degree() is exact; the zero polynomial has degree -1.
template <class K>
class Poly {
  public:
    Poly() = default;
    Poly(K c) { c_.push_back(std::move(c)); trim(); }
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly x() { return Poly(std::vector<K>{K(0), K(1)}); }
    static Poly monomial(int n, K c = K(1)) {
        std::vector<K> v(n + 1, K(0));
        v[n] = std::move(c);
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    const K& coeff(int n) const {
        static const K zero = K(0);
        if (n < 0 || n > degree())
            return zero;
        return c_[n];
    }
    void set_coeff(int n, K v) {
        if (n >= static_cast<int>(c_.size()))
            c_.resize(n + 1, K(0));
        c_[n] = std::move(v);
        trim();
    }

    const std::vector<K>& coeffs() const { return c_; }

    Poly operator-() const {
        Poly r = *this;
        for (auto& c : r.c_)
            c = -c;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i)
            r[i] += b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero())
            return Poly();
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const K& s) const {
        Poly r = *this;
        for (auto& c : r.c_)
            c = c * s;
        r.trim();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    K eval(const K& x) const {
        K r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + *it;
        return r;
    }

    // Quotient and remainder by a nonzero divisor.
    static std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
        if (b.is_zero())
            throw std::domain_error("Poly: division by zero");
        Poly q;
        const K lead_inv = K(1) / b.c_.back();
        while (!a.is_zero() && a.degree() >= b.degree()) {
            int d = a.degree() - b.degree();
            K f = a.c_.back() * lead_inv;
            q.set_coeff(d, f);
            for (int i = 0; i <= b.degree(); ++i)
                a.set_coeff(i + d, a.coeff(i + d) - f * b.coeff(i));
        }
        return {q, a};
    }

    static Poly gcd(Poly a, Poly b) {
        // keep the iterates monic so rational coefficients stay tame
        while (!b.is_zero()) {
            b = b.scaled(K(1) / b.c_.back());
            auto [q, r] = divmod(std::move(a), b);
            (void)q;
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.is_zero())
            a = a.scaled(K(1) / a.c_.back()); // monic
        return a;
    }

    Poly derivative() const {
        if (c_.size() <= 1)
            return Poly();
        std::vector<K> r(c_.size() - 1, K(0));
        for (size_t i = 1; i < c_.size(); ++i)
            r[i - 1] = c_[i] * K(static_cast<long>(i));
        return Poly(std::move(r));
    }

    // p(x + a)
    Poly shifted(const K& a) const {
        Poly r, pw(K(1));
        Poly base = Poly(std::vector<K>{a, K(1)});
        for (size_t i = 0; i < c_.size(); ++i) {
            r += pw.scaled(c_[i]);
            pw *= base;
        }
        return r;
    }

    // Order of vanishing at x = a (degree+1 if zero polynomial never returned;
    // caller must ensure nonzero).
    int valuation_at(const K& a) const {
        Poly p = *this;
        int v = 0;
        while (!p.is_zero() && p.eval(a).is_zero()) {
            p = divmod(p, Poly(std::vector<K>{-a, K(1)})).first;
            ++v;
        }
        return v;
    }

    std::string str(const std::string& var = "x") const;

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    std::vector<K> c_;
};

template <class K>
std::string Poly<K>::str(const std::string& var) const {
    if (is_zero())
        return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        if (coeff(i).is_zero())
            continue;
        if (!s.empty())
            s += " + ";
        s += "(" + coeff(i).str() + ")";
        if (i > 0)
            s += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
}

} // namespace voa
