#pragma once

#include <string>

#include "poly.hpp"

namespace voa {

// Field of rational functions in one formal parameter t over K. Canonical
// form: gcd(num, den) = 1 and den monic, so equality is structural. Used for
// the generic central charge and for carrying formal parameters exactly.
template <class K>
class RatFunc {
  public:
    RatFunc() : num_(), den_(K(1)) {}
    RatFunc(long n) : num_(K(n)), den_(K(1)) {}
    RatFunc(K c) : num_(std::move(c)), den_(K(1)) {}
    RatFunc(Poly<K> num, Poly<K> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero())
            throw std::domain_error("RatFunc: zero denominator");
        normalize();
    }

    static RatFunc t() { return RatFunc(Poly<K>::x(), Poly<K>(K(1))); }

    const Poly<K>& num() const { return num_; }
    const Poly<K>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.degree() == 0 && num_ == Poly<K>(K(1)); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    RatFunc operator-() const { return RatFunc(-num_, den_, no_normalize{}); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero())
            throw std::domain_error("RatFunc: division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    // Total order compatible with equality (for use as map keys).
    friend bool operator<(const RatFunc& a, const RatFunc& b) {
        auto cmp = [](const Poly<K>& p, const Poly<K>& q) {
            if (p.degree() != q.degree())
                return p.degree() < q.degree() ? -1 : 1;
            for (int i = p.degree(); i >= 0; --i) {
                if (p.coeff(i) != q.coeff(i))
                    return p.coeff(i) < q.coeff(i) ? -1 : 1;
            }
            return 0;
        };
        int c = cmp(a.num_, b.num_);
        if (c != 0)
            return c < 0;
        return cmp(a.den_, b.den_) < 0;
    }

    RatFunc inv() const {
        if (is_zero())
            throw std::domain_error("RatFunc: inverse of zero");
        return RatFunc(den_, num_);
    }

    // Substitute a value for the parameter. Throws if it hits a pole.
    K eval(const K& x) const {
        K d = den_.eval(x);
        if (d.is_zero())
            throw std::domain_error("RatFunc: evaluation at a pole");
        return num_.eval(x) / d;
    }

    std::string str() const {
        if (den_.degree() == 0 && den_.coeff(0).is_one())
            return num_.str("t");
        return "(" + num_.str("t") + ")/(" + den_.str("t") + ")";
    }

    double to_double() const; // defined only for K = Rat below

  private:
    struct no_normalize {};
    RatFunc(Poly<K> num, Poly<K> den, no_normalize) : num_(std::move(num)), den_(std::move(den)) {}

    void normalize() {
        if (num_.is_zero()) {
            den_ = Poly<K>(K(1));
            return;
        }
        if (num_.degree() > 0 && den_.degree() > 0) {
            Poly<K> g = Poly<K>::gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = Poly<K>::divmod(num_, g).first;
                den_ = Poly<K>::divmod(den_, g).first;
            }
        }
        K lead = den_.coeff(den_.degree());
        if (!lead.is_one()) {
            K li = K(1) / lead;
            num_ = num_.scaled(li);
            den_ = den_.scaled(li);
        }
    }

    Poly<K> num_, den_;
};

using QT = RatFunc<Rat>; // the field Q(t)

} // namespace voa
