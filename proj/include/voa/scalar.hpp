#pragma once

#include "ratfunc.hpp"
#include "rational.hpp"

namespace voa {

// Embedding of Q into the working scalar field.
template <class K>
struct ScalarOps;

template <>
struct ScalarOps<Rat> {
    static Rat from_rat(const Rat& r) { return r; }
    static double to_double(const Rat& r) { return r.to_double(); }
};

template <class K2>
struct ScalarOps<RatFunc<K2>> {
    static RatFunc<K2> from_rat(const Rat& r) {
        return RatFunc<K2>(ScalarOps<K2>::from_rat(r));
    }
    static double to_double(const RatFunc<K2>&) {
        throw std::domain_error("no numeric value for a non-constant rational function");
    }
};

template <class K>
K k_rat(const Rat& r) {
    return ScalarOps<K>::from_rat(r);
}

template <class K>
K k_frac(long num, long den) {
    return ScalarOps<K>::from_rat(Rat(num, den));
}

} // namespace voa
