#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace voa {

// Exact rational scalar. Thin value wrapper around GMP's mpq_class, kept in
// canonical form (reduced fraction, positive denominator) so that equality is
// plain representation comparison.
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0)
            throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts "p", "-p/q" and similar; rejects malformed input.
    static Rat parse(const std::string& s) {
        mpq_class q;
        if (s.empty() || q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero())
            throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

    Rat inv() const {
        if (is_zero())
            throw std::domain_error("Rat: inverse of zero");
        return Rat(mpq_class(1 / v_));
    }

    std::string str() const { return v_.get_str(); }
    double to_double() const { return v_.get_d(); }

    const mpq_class& raw() const { return v_; }

  private:
    mpq_class v_;
};

inline Rat binomial(long n, long k) {
    // Generalized binomial C(n, k) for integer n (possibly negative), k >= 0.
    if (k < 0)
        return Rat(0);
    mpz_class num(1);
    for (long i = 0; i < k; ++i)
        num *= mpz_class(n - i);
    mpz_class den(1);
    for (long i = 2; i <= k; ++i)
        den *= i;
    return Rat(mpq_class(num, den));
}

inline Rat factorial(long n) {
    mpz_class f(1);
    for (long i = 2; i <= n; ++i)
        f *= i;
    return Rat(mpq_class(f));
}

} // namespace voa
