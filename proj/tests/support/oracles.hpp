/*
   Copyright 2026 The twistctl Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Brute-force oracles. Nothing here calls into the code paths they check.

#ifndef TWIST_TESTS_SUPPORT_ORACLES_HPP
#define TWIST_TESTS_SUPPORT_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "twist/polynomial.hpp"

namespace twist::testing {

/// h(x) composed into f, reduced mod m, all in Q[x].
inline RationalPolynomial compose_mod(const RationalPolynomial& f, const RationalPolynomial& h,
                                      const RationalPolynomial& m) {
    RationalPolynomial acc;
    for (int i = f.degree(); i >= 0; --i) {
        acc = acc * h + RationalPolynomial::constant(f[static_cast<std::size_t>(i)]);
        acc = divmod(acc, m).second;
    }
    return acc;
}

/// Factor-degree multiset of a squarefree f (degree <= 4) mod p by trial roots and trial quadratics.
inline std::vector<std::pair<int, int>> naive_factor_degrees(std::vector<std::int64_t> f, std::int64_t p) {
    auto norm = [&](std::vector<std::int64_t> g) {
        for (auto& c : g) c = ((c % p) + p) % p;
        while (!g.empty() && g.back() == 0) g.pop_back();
        return g;
    };
    auto inv = [&](std::int64_t a) {
        std::int64_t r = 1, e = p - 2, b = a % p;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    // exact division by a monic divisor; returns quotient or empty if remainder nonzero
    auto divide = [&](std::vector<std::int64_t> a, const std::vector<std::int64_t>& b, bool& ok) {
        int da = static_cast<int>(a.size()) - 1, db = static_cast<int>(b.size()) - 1;
        std::vector<std::int64_t> q(static_cast<std::size_t>(std::max(da - db + 1, 0)), 0);
        for (int i = da; i >= db; --i) {
            std::int64_t c = a[static_cast<std::size_t>(i)] % p;
            q[static_cast<std::size_t>(i - db)] = c;
            for (int j = 0; j <= db; ++j)
                a[static_cast<std::size_t>(i - db + j)] =
                    ((a[static_cast<std::size_t>(i - db + j)] - c * b[static_cast<std::size_t>(j)]) % p + p) % p;
        }
        ok = std::all_of(a.begin(), a.end(), [](std::int64_t c) { return c == 0; });
        return q;
    };
    f = norm(f);
    std::int64_t lc = inv(f.back());
    for (auto& c : f) c = c * lc % p;
    std::map<int, int> counts;
    for (std::int64_t r = 0; r < p && f.size() > 1; ++r) {
        std::int64_t v = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) v = (v * r + *it) % p;
        if (v == 0) {
            bool ok;
            f = norm(divide(f, {(p - r) % p, 1}, ok));
            ++counts[1];
        }
    }
    for (std::int64_t b = 0; b < p && f.size() > 3; ++b)
        for (std::int64_t c = 0; c < p && f.size() > 3; ++c) {
            bool ok;
            auto q = divide(f, {c, b, 1}, ok);
            if (ok) {
                f = norm(q);
                ++counts[2];
            }
        }
    int rest = static_cast<int>(f.size()) - 1;
    if (rest == 2 && counts.count(2) == 0 && f.size() == 3) ++counts[2];
    else if (rest > 0) ++counts[rest];
    return {counts.begin(), counts.end()};
}

inline std::int64_t legendre(std::int64_t a, std::int64_t p) {
    a = ((a % p) + p) % p;
    if (a == 0) return 0;
    std::int64_t r = 1, e = (p - 1) / 2, b = a;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

}  // namespace twist::testing

#endif
