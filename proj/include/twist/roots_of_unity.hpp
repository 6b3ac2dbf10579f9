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

#ifndef TWIST_ROOTS_OF_UNITY_HPP
#define TWIST_ROOTS_OF_UNITY_HPP

#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <optional>
#include <vector>

#include "twist/number_field.hpp"

namespace twist {

/// The torsion subgroup of E^x: cyclic of the given order, generated by `generator`.
struct RootsOfUnity {
    FieldElement generator;
    int order = 2;
};

namespace detail {

inline int euler_phi(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

/// Arithmetic in Z / p^N for a prime p.
struct PadicRing {
    Integer M;

    Integer red(const Integer& x) const {
        Integer r = x % M;
        if (r < 0) r += M;
        return r;
    }
    Integer from(const Rational& q) const {
        Integer inv;
        Integer den = red(q.denominator());
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
        return red(q.numerator() * inv);
    }
    Integer inv(const Integer& x) const {
        Integer r;
        if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t()) == 0)
            throw Error(Errc::InvalidArgument, "non-unit in p-adic lift");
        return r;
    }
    Integer eval(const std::vector<Integer>& f, const Integer& x) const {
        Integer acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) acc = red(acc * x + *it);
        return acc;
    }
    /// Newton iteration to full precision from a simple root mod p.
    Integer lift(const std::vector<Integer>& f, Integer x, int steps) const {
        std::vector<Integer> df;
        for (std::size_t i = 1; i < f.size(); ++i) df.push_back(red(f[i] * static_cast<unsigned long>(i)));
        for (int s = 0; s < steps; ++s) x = red(x - eval(f, x) * inv(eval(df, x)));
        return x;
    }
};

/// Smallest-height r/s with r/s = a mod M, if one exists with |r|, s below sqrt(M/2).
inline std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& M) {
    Integer bound;
    Integer half = M / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    Integer r0 = M, r1 = a, t0 = 0, t1 = 1;
    while (r1 > bound) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1;
        Integer t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    if (gcd(r1, t1) != 1) return std::nullopt;
    return Rational(r1, t1);
}

/// Solves V c = z mod M for a matrix whose determinant is a unit.
inline std::vector<Integer> solve_mod(const PadicRing& R, std::vector<std::vector<Integer>> V, std::vector<Integer> z,
                                      const Integer& p) {
    const std::size_t n = z.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && V[piv][col] % p == 0) ++piv;
        if (piv == n) throw Error(Errc::InvalidArgument, "singular system in p-adic solve");
        std::swap(V[piv], V[col]);
        std::swap(z[piv], z[col]);
        Integer inv = R.inv(V[col][col]);
        for (std::size_t j = 0; j < n; ++j) V[col][j] = R.red(V[col][j] * inv);
        z[col] = R.red(z[col] * inv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || V[r][col] == 0) continue;
            Integer f = V[r][col];
            for (std::size_t j = 0; j < n; ++j) V[r][j] = R.red(V[r][j] - f * V[col][j]);
            z[r] = R.red(z[r] - f * z[col]);
        }
    }
    return z;
}

/// All homomorphisms G -> (Z/k)^x written as exponent tables a[i] with s_i(z) = z^a[i].
inline std::vector<std::vector<int>> exponent_characters(const NumberField& K, int k) {
    std::vector<int> units;
    for (int u = 1; u < k; ++u)
        if (std::gcd(u, k) == 1) units.push_back(u);
    std::vector<int> gens;
    {
        Subgroup span = K.trivial_group();
        for (int g = 0; g < K.degree(); ++g)
            if (!span.contains(g)) {
                gens.push_back(g);
                std::vector<int> cur = gens;
                span = K.generated(cur);
            }
    }
    std::vector<std::vector<int>> out;
    std::vector<std::size_t> choice(gens.size(), 0);
    while (true) {
        std::vector<int> a(static_cast<std::size_t>(K.degree()), 0);
        a[0] = 1 % k;
        bool ok = true;
        std::vector<int> frontier{0};
        while (!frontier.empty() && ok) {
            std::vector<int> next;
            for (int x : frontier)
                for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                    int y = K.compose(gens[gi], x);
                    int val = (units[choice[gi]] * a[static_cast<std::size_t>(x)]) % k;
                    if (a[static_cast<std::size_t>(y)] == 0) {
                        a[static_cast<std::size_t>(y)] = val;
                        next.push_back(y);
                    } else if (a[static_cast<std::size_t>(y)] != val) {
                        ok = false;
                    }
                }
            frontier = std::move(next);
        }
        if (ok) {
            for (int i = 0; i < K.degree() && ok; ++i)
                for (int j = 0; j < K.degree() && ok; ++j)
                    if (a[static_cast<std::size_t>(K.compose(i, j))] !=
                        (a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)]) % k)
                        ok = false;
        }
        if (ok) out.push_back(a);
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == units.size()) choice[pos++] = 0;
        if (pos == choice.size()) break;
    }
    return out;
}

inline bool has_exact_order(const NumberField& K, const FieldElement& z, int k) {
    if (K.pow(z, k) != K.one()) return false;
    for (int q = 2; q <= k; ++q)
        if (k % q == 0 && is_prime(static_cast<std::uint64_t>(q)) && K.pow(z, k / q) == K.one()) return false;
    return true;
}

/// A primitive k-th root of unity of K, found p-adically at a totally split prime and checked exactly.
inline std::optional<FieldElement> primitive_root_of_unity(const NumberField& K, int k) {
    if (k <= 2) return k == 1 ? K.one() : K.neg(K.one());
    if (K.degree() % euler_phi(k) != 0) return std::nullopt;
    const int d = K.degree();
    for (std::uint64_t p = static_cast<std::uint64_t>(k) + 1; p < 2000000; p += static_cast<std::uint64_t>(k)) {
        if (!is_prime(p) || K.is_ramified(p)) continue;
        auto pattern = ddf_mod_p(K.min_poly(), p);
        if (pattern.size() != 1 || pattern[0].first != 1) continue;
        modp::Zp F{p};
        modp::Poly f = modp::reduce(K.min_poly(), p);
        std::uint64_t r1 = 0;
        while (modp::eval(F, f, r1) != 0) ++r1;
        std::uint64_t zeta_p = 0;
        for (std::uint64_t x = 2; x < p; ++x) {
            std::uint64_t c = F.pow(x, (p - 1) / static_cast<std::uint64_t>(k));
            bool primitive = true;
            for (int q = 2; q <= k && primitive; ++q)
                if (k % q == 0 && is_prime(static_cast<std::uint64_t>(q)) && F.pow(c, static_cast<std::uint64_t>(k / q)) == 1)
                    primitive = false;
            if (primitive) {
                zeta_p = c;
                break;
            }
        }
        const Integer pz(static_cast<unsigned long>(p));
        auto characters = exponent_characters(K, k);
        for (int N = 8; N <= 512; N *= 2) {
            PadicRing R;
            mpz_pow_ui(R.M.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(N));
            int steps = 0;
            for (int s = 1; s < N; s *= 2) ++steps;
            steps += 1;
            std::vector<Integer> phi;
            for (const auto& c : K.min_poly().coefficients()) phi.push_back(R.from(c));
            Integer root1 = R.lift(phi, Integer(static_cast<unsigned long>(r1)), steps);
            std::vector<Integer> cyc(static_cast<std::size_t>(k + 1), 0);
            cyc[0] = R.red(Integer(-1));
            cyc[static_cast<std::size_t>(k)] = 1;
            Integer zeta = R.lift(cyc, Integer(static_cast<unsigned long>(zeta_p)), steps);
            std::vector<Integer> roots;
            for (int i = 0; i < d; ++i) {
                std::vector<Integer> h;
                for (const auto& c : K.aut_image(i).coords()) h.push_back(R.from(c));
                roots.push_back(R.eval(h, root1));
            }
            std::vector<std::vector<Integer>> V(static_cast<std::size_t>(d), std::vector<Integer>(static_cast<std::size_t>(d)));
            for (int i = 0; i < d; ++i) {
                Integer pw = 1;
                for (int j = 0; j < d; ++j) {
                    V[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pw;
                    pw = R.red(pw * roots[static_cast<std::size_t>(i)]);
                }
            }
            for (const auto& a : characters) {
                std::vector<Integer> z;
                for (int i = 0; i < d; ++i) {
                    Integer zi;
                    mpz_powm_ui(zi.get_mpz_t(), zeta.get_mpz_t(), static_cast<unsigned long>(a[static_cast<std::size_t>(i)]),
                                R.M.get_mpz_t());
                    z.push_back(zi);
                }
                auto c = solve_mod(R, V, z, pz);
                std::vector<Rational> coords;
                bool ok = true;
                for (auto& ci : c) {
                    auto q = rational_reconstruct(ci, R.M);
                    if (!q) {
                        ok = false;
                        break;
                    }
                    coords.push_back(*q);
                }
                if (!ok) continue;
                FieldElement cand(coords);
                if (has_exact_order(K, cand, k)) return cand;
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

namespace detail {

inline RootsOfUnity compute_roots_of_unity(const NumberField& K) {
    std::vector<int> candidates;
    const int d = K.degree();
    for (int k = 4; k <= 2 * d * d + 2; k += 2)
        if (d % detail::euler_phi(k) == 0) candidates.push_back(k);
    std::sort(candidates.rbegin(), candidates.rend());
    for (int k : candidates)
        if (auto z = detail::primitive_root_of_unity(K, k)) return RootsOfUnity{*z, k};
    return RootsOfUnity{K.neg(K.one()), 2};
}

}  // namespace detail

/// Generator and order of the roots of unity in K. Memoized per field description.
inline RootsOfUnity roots_of_unity(const NumberField& K) {
    static std::mutex mu;
    static std::map<std::string, RootsOfUnity> cache;
    std::string key = K.min_poly().str();
    for (const auto& img : K.aut_images()) key += "|" + img.str();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    RootsOfUnity r = detail::compute_roots_of_unity(K);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, r).first->second;
}

}  // namespace twist

#endif
