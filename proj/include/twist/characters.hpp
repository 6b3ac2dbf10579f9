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

#ifndef TWIST_CHARACTERS_HPP
#define TWIST_CHARACTERS_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "twist/number_field.hpp"
#include "twist/roots_of_unity.hpp"

namespace twist {

/// (Z/N)^x as a product of cyclic groups with a discrete-log table.
struct UnitGroup {
    long modulus = 1;
    std::vector<long> generators;  // residues in [1, N)
    std::vector<long> orders;
    std::vector<std::vector<int>> log;  // exponent vectors; meaningful only for units

    long phi() const {
        long r = 1;
        for (long o : orders) r *= o;
        return r;
    }
    bool is_unit(long a) const {
        return std::gcd(a, modulus) == 1;
    }
    const std::vector<int>& exponents(long a) const {
        static const std::vector<int> none;
        if (modulus == 1) return none;
        return log[static_cast<std::size_t>(((a % modulus) + modulus) % modulus)];
    }
};

namespace detail {

inline long mulmod_l(long a, long b, long m) { return static_cast<long>((static_cast<__int128>(a) * b) % m); }

inline long powmod_l(long a, long e, long m) {
    long r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_l(r, a, m);
        a = mulmod_l(a, a, m);
        e >>= 1;
    }
    return r;
}

inline long inverse_mod(long a, long m) {
    long g = m, x = 0, x1 = 1, b = ((a % m) + m) % m;
    while (b) {
        long q = g / b;
        std::tie(g, b) = std::make_pair(b, g - q * b);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return ((x % m) + m) % m;
}

inline std::vector<std::pair<long, int>> factor_small(long n) {
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.emplace_back(p, e);
        }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline long multiplicative_order_mod(long a, long m) {
    long k = 1, x = a % m;
    while (x != 1) {
        x = mulmod_l(x, a, m);
        ++k;
    }
    return k;
}

}  // namespace detail

/// Generators: smallest primitive root for odd prime powers, -1 mod 4, and -1, 5 for 2^e (e >= 3), lifted by CRT.
inline std::shared_ptr<const UnitGroup> unit_group(long N) {
    if (N < 1) throw Error(Errc::InvalidArgument, "modulus must be positive");
    auto G = std::make_shared<UnitGroup>();
    G->modulus = N;
    auto lift = [&](long g, long q) {
        long M = N / q;
        if (M == 1) return ((g % q) + q) % q;
        // x = g mod q, x = 1 mod M
        long x = detail::mulmod_l(detail::mulmod_l(((g % q) + q) % q, M, N), detail::inverse_mod(M, q), N);
        x = (x + detail::mulmod_l(q, detail::inverse_mod(q, M), N)) % N;
        return x;
    };
    for (auto [p, e] : detail::factor_small(N)) {
        long q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        if (p == 2) {
            if (e >= 2) {
                G->generators.push_back(lift(-1, q));
                G->orders.push_back(2);
            }
            if (e >= 3) {
                G->generators.push_back(lift(5, q));
                G->orders.push_back(q / 4);
            }
            continue;
        }
        long phi = q / p * (p - 1);
        long g = 2;
        while (std::gcd(g, p) != 1 || detail::multiplicative_order_mod(g, q) != phi) ++g;
        G->generators.push_back(lift(g, q));
        G->orders.push_back(phi);
    }
    if (N == 1) return G;
    G->log.assign(static_cast<std::size_t>(N), {});
    // enumerate all exponent vectors
    const std::size_t r = G->generators.size();
    std::vector<int> e(r, 0);
    while (true) {
        long a = 1 % N;
        for (std::size_t j = 0; j < r; ++j) a = detail::mulmod_l(a, detail::powmod_l(G->generators[j], e[j], N), N);
        G->log[static_cast<std::size_t>(a)] = e;
        std::size_t pos = 0;
        while (pos < r && ++e[pos] == G->orders[pos]) e[pos++] = 0;
        if (pos == r) break;
    }
    return G;
}

/// Finite-order character: Dirichlet (values on the generators of (Z/N)^x) or a per-place value table.
struct Character {
    enum class Kind { dirichlet, table };

    Kind kind = Kind::dirichlet;
    long modulus = 1;
    std::vector<FieldElement> generator_values;  // aligned with units->generators
    std::map<long, FieldElement> table;
    int order = 1;
    std::shared_ptr<const UnitGroup> units;

    bool is_dirichlet() const { return kind == Kind::dirichlet; }
};

namespace detail {

inline int element_order(const NumberField& K, const FieldElement& x, int bound) {
    auto o = K.multiplicative_order(x, bound);
    if (!o) throw Error(Errc::NotRootOfUnity, x.str() + " has no order <= " + std::to_string(bound));
    return *o;
}

inline int values_order(const NumberField& K, const std::vector<FieldElement>& vals, int bound) {
    int o = 1;
    for (const auto& v : vals) o = std::lcm(o, element_order(K, v, bound));
    return o;
}

}  // namespace detail

/// Largest order any character value may take; stored values are always checked against it.
inline constexpr int kMaxCharacterOrder = 1 << 12;

inline Character trivial_character(const NumberField& K) {
    (void)K;
    Character c;
    c.units = unit_group(1);
    return c;
}

inline Character dirichlet_character(const NumberField& K, long modulus, std::vector<FieldElement> generator_values) {
    Character c;
    c.modulus = modulus;
    c.units = unit_group(modulus);
    if (generator_values.size() != c.units->generators.size())
        throw Error(Errc::InvalidArgument, "modulus " + std::to_string(modulus) + " needs " +
                                               std::to_string(c.units->generators.size()) + " generator values");
    for (std::size_t j = 0; j < generator_values.size(); ++j) {
        K.check_element(generator_values[j]);
        if (K.pow(generator_values[j], c.units->orders[j]) != K.one())
            throw Error(Errc::NotRootOfUnity, "value on generator " + std::to_string(c.units->generators[j]) +
                                                  " is not killed by its order " + std::to_string(c.units->orders[j]));
    }
    c.order = detail::values_order(K, generator_values, kMaxCharacterOrder);
    c.generator_values = std::move(generator_values);
    return c;
}

inline Character table_character(const NumberField& K, std::map<long, FieldElement> values) {
    Character c;
    c.kind = Character::Kind::table;
    std::vector<FieldElement> all;
    for (auto& [v, x] : values) {
        K.check_element(x);
        all.push_back(x);
    }
    c.order = detail::values_order(K, all, kMaxCharacterOrder);
    c.table = std::move(values);
    return c;
}

namespace detail {

/// Kronecker symbol (d / n) for n > 0.
inline int kronecker(long d, long n) {
    int t = 1;
    while (n % 2 == 0) {
        n /= 2;
        long r = ((d % 8) + 8) % 8;
        if (r % 2 == 0) return 0;
        if (r == 3 || r == 5) t = -t;
    }
    long a = ((d % n) + n) % n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            if (n % 8 == 3 || n % 8 == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace detail

/// Quadratic character (d / .) of conductor |d| for a fundamental discriminant d.
inline Character kronecker_character(const NumberField& K, long d) {
    long N = d < 0 ? -d : d;
    auto G = unit_group(N);
    std::vector<FieldElement> vals;
    for (long g : G->generators) vals.push_back(K.from_rational(detail::kronecker(d, g)));
    return dirichlet_character(K, N, std::move(vals));
}

/// chi(v). Dirichlet: v must be coprime to the modulus. Table: v must be present.
inline FieldElement char_eval(const NumberField& K, const Character& chi, long v) {
    if (chi.kind == Character::Kind::table) {
        auto it = chi.table.find(v);
        if (it == chi.table.end()) throw Error(Errc::MissingValue, "no value at place " + std::to_string(v));
        return it->second;
    }
    if (std::gcd(v, chi.modulus) != 1)
        throw Error(Errc::NotCoprime, std::to_string(v) + " is not coprime to " + std::to_string(chi.modulus));
    FieldElement r = K.one();
    const auto& e = chi.units->exponents(v);
    for (std::size_t j = 0; j < e.size(); ++j)
        if (e[j]) r = K.mul(r, K.pow(chi.generator_values[j], e[j]));
    return r;
}

/// ^s chi: apply the automorphism to every value.
inline Character char_transform(const NumberField& K, int aut_index, const Character& chi) {
    Character out = chi;
    for (auto& x : out.generator_values) x = K.apply(aut_index, x);
    for (auto& [v, x] : out.table) x = K.apply(aut_index, x);
    return out;
}

inline Character char_inverse(const NumberField& K, const Character& chi) {
    Character out = chi;
    for (auto& x : out.generator_values) x = K.inv(x);
    for (auto& [v, x] : out.table) x = K.inv(x);
    return out;
}

/// Pointwise product. Dirichlet x Dirichlet lives mod lcm; a table absorbs a Dirichlet factor on its places.
inline Character char_mul(const NumberField& K, const Character& a, const Character& b) {
    if (a.is_dirichlet() && b.is_dirichlet()) {
        long N = std::lcm(a.modulus, b.modulus);
        auto G = unit_group(N);
        std::vector<FieldElement> vals;
        for (long g : G->generators) vals.push_back(K.mul(char_eval(K, a, g), char_eval(K, b, g)));
        return dirichlet_character(K, N, std::move(vals));
    }
    const Character& t = a.is_dirichlet() ? b : a;
    const Character& o = a.is_dirichlet() ? a : b;
    std::map<long, FieldElement> vals;
    if (!o.is_dirichlet() && o.table.size() != t.table.size())
        throw Error(Errc::IncompatibleSupports, "value tables on different place sets");
    for (const auto& [v, x] : t.table) {
        FieldElement y;
        try {
            y = char_eval(K, o, v);
        } catch (const Error& e) {
            throw Error(Errc::IncompatibleSupports, std::string("at place ") + std::to_string(v) + ": " + e.what());
        }
        vals.emplace(v, K.mul(x, y));
    }
    return table_character(K, std::move(vals));
}

inline bool is_trivial(const NumberField& K, const Character& chi) {
    for (const auto& x : chi.generator_values)
        if (x != K.one()) return false;
    for (const auto& [v, x] : chi.table)
        if (x != K.one()) return false;
    return true;
}

/// Smallest M | N through which a Dirichlet character factors.
inline long conductor(const NumberField& K, const Character& chi) {
    if (!chi.is_dirichlet()) throw Error(Errc::InvalidArgument, "conductor of a value-table character");
    const long N = chi.modulus;
    for (long M = 1; M <= N; ++M) {
        if (N % M != 0) continue;
        bool ok = true;
        for (long a = 1 % M; a < N && ok; a += M) {
            if (a == 0 || std::gcd(a, N) != 1) continue;
            if (char_eval(K, chi, a) != K.one()) ok = false;
        }
        if (ok) return M;
    }
    return N;
}

/// The primitive character inducing chi.
inline Character primitive(const NumberField& K, const Character& chi) {
    long M = conductor(K, chi);
    if (M == chi.modulus) return chi;
    auto G = unit_group(M);
    std::vector<FieldElement> vals;
    for (long g : G->generators) {
        long a = g;
        while (std::gcd(a, chi.modulus) != 1) a += M;
        vals.push_back(char_eval(K, chi, a));
    }
    return dirichlet_character(K, M, std::move(vals));
}

/// Equality on every listed place where both sides are defined.
inline bool same_values(const NumberField& K, const Character& a, const Character& b, const std::vector<long>& places) {
    for (long v : places) {
        bool da = a.is_dirichlet() ? std::gcd(v, a.modulus) == 1 : a.table.count(v) > 0;
        bool db = b.is_dirichlet() ? std::gcd(v, b.modulus) == 1 : b.table.count(v) > 0;
        if (da && db && char_eval(K, a, v) != char_eval(K, b, v)) return false;
    }
    return true;
}

/// Identical as functions on (Z/lcm)^x, for two Dirichlet characters.
inline bool same_dirichlet(const NumberField& K, const Character& a, const Character& b) {
    Character pa = primitive(K, a), pb = primitive(K, b);
    return pa.modulus == pb.modulus && pa.generator_values == pb.generator_values;
}

/// Dirichlet character of smallest modulus <= N_max matching every supplied value, if any.
inline std::optional<Character> char_fit(const NumberField& K, const std::map<long, FieldElement>& values, long N_max,
                                         int order_bound) {
    for (const auto& [p, x] : values) {
        K.check_element(x);
        if (!K.multiplicative_order(x, order_bound))
            throw Error(Errc::NotRootOfUnity, "value at " + std::to_string(p) + " has no order <= " + std::to_string(order_bound));
    }
    const RootsOfUnity mu = roots_of_unity(K);
    const int w = mu.order;
    std::vector<FieldElement> zeta_pow{K.one()};
    for (int k = 1; k < w; ++k) zeta_pow.push_back(K.mul(zeta_pow.back(), mu.generator));
    auto dlog = [&](const FieldElement& x) {
        for (int k = 0; k < w; ++k)
            if (zeta_pow[static_cast<std::size_t>(k)] == x) return k;
        throw Error(Errc::NotRootOfUnity, x.str() + " is not in the roots of unity of the field");
    };
    std::vector<std::pair<long, int>> data;
    for (const auto& [p, x] : values) data.emplace_back(p, dlog(x));

    for (long N = 1; N <= N_max; ++N) {
        bool coprime = std::all_of(data.begin(), data.end(), [&](const auto& d) { return std::gcd(d.first, N) == 1; });
        if (!coprime) continue;
        auto G = unit_group(N);
        // residues must carry a single value
        std::map<long, int> by_residue;
        bool consistent = true;
        for (auto [p, t] : data) {
            auto [it, fresh] = by_residue.emplace(((p % N) + N) % N, t);
            if (!fresh && it->second != t) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        const std::size_t r = G->generators.size();
        // generator j takes zeta^(k_j * step_j), step_j = w / gcd(w, o_j)
        std::vector<int> steps, counts;
        for (long o : G->orders) {
            int g = std::gcd(w, static_cast<int>(o));
            steps.push_back(w / g);
            counts.push_back(g);
        }
        std::vector<int> k(r, 0);
        std::vector<std::vector<int>> fits;
        while (true) {
            bool ok = true;
            for (const auto& [res, t] : by_residue) {
                const auto& e = G->exponents(res);
                long s = 0;
                for (std::size_t j = 0; j < r; ++j) s += static_cast<long>(e[j]) * k[j] * steps[j];
                if (s % w != t) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                int ord = 1;
                for (std::size_t j = 0; j < r; ++j) {
                    int ex = (k[j] * steps[j]) % w;
                    ord = std::lcm(ord, w / std::gcd(w, ex));
                }
                if (ord <= order_bound) fits.push_back(k);
            }
            std::size_t pos = 0;
            while (pos < r && ++k[pos] == counts[pos]) k[pos++] = 0;
            if (pos == r) break;
        }
        if (fits.empty()) continue;
        if (fits.size() > 1)
            throw Error(Errc::Ambiguous, std::to_string(fits.size()) + " characters mod " + std::to_string(N) +
                                             " fit the data; supply more places");
        std::vector<FieldElement> vals;
        for (std::size_t j = 0; j < r; ++j)
            vals.push_back(zeta_pow[static_cast<std::size_t>((fits[0][j] * steps[j]) % w)]);
        return dirichlet_character(K, N, std::move(vals));
    }
    return std::nullopt;
}

}  // namespace twist

#endif
