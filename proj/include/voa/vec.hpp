#pragma once

#include <map>
#include <string>

#include "linalg.hpp"

namespace voa {

// A sparse coefficient vector over some graded basis: basis index -> scalar.
template <class K>
using Vec = std::map<int, K>;

template <class K>
bool vec_is_zero(const Vec<K>& v) { return v.empty(); }

template <class K>
void vec_add_term(Vec<K>& v, int i, const K& c) {
    if (c.is_zero())
        return;
    auto it = v.find(i);
    if (it == v.end()) {
        v.emplace(i, c);
    } else {
        it->second += c;
        if (it->second.is_zero())
            v.erase(it);
    }
}

// v += c * w
template <class K>
void vec_axpy(Vec<K>& v, const K& c, const Vec<K>& w) {
    if (c.is_zero())
        return;
    for (const auto& [i, a] : w)
        vec_add_term(v, i, c * a);
}

template <class K>
Vec<K> vec_scaled(const Vec<K>& v, const K& c) {
    Vec<K> r;
    if (c.is_zero())
        return r;
    for (const auto& [i, a] : v)
        r.emplace(i, c * a);
    return r;
}

template <class K>
Vec<K> vec_sub(Vec<K> a, const Vec<K>& b) {
    for (const auto& [i, c] : b)
        vec_add_term(a, i, -c);
    return a;
}

template <class K>
Vec<K> vec_add(Vec<K> a, const Vec<K>& b) {
    for (const auto& [i, c] : b)
        vec_add_term(a, i, c);
    return a;
}

template <class K>
K vec_dot(const Vec<K>& a, const Vec<K>& b) {
    K r(0);
    const Vec<K>& small = a.size() <= b.size() ? a : b;
    const Vec<K>& big = a.size() <= b.size() ? b : a;
    for (const auto& [i, c] : small) {
        auto it = big.find(i);
        if (it != big.end())
            r += c * it->second;
    }
    return r;
}

template <class K>
Vec<K> vec_unit(int i) {
    Vec<K> v;
    v.emplace(i, K(1));
    return v;
}

} // namespace voa
