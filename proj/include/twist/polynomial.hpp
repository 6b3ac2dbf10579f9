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

#ifndef TWIST_POLYNOMIAL_HPP
#define TWIST_POLYNOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "twist/error.hpp"
#include "twist/rational.hpp"

namespace twist {

/// Polynomial over Q, coefficients ascending, never a trailing zero.
class RationalPolynomial {
   public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    RationalPolynomial(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static RationalPolynomial constant(const Rational& r) { return RationalPolynomial(std::vector<Rational>{r}); }
    static RationalPolynomial x() { return RationalPolynomial({0, 1}); }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coefficients() const { return c_; }
    Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(); }
    const Rational& leading() const { return c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    RationalPolynomial monic() const {
        if (is_zero()) return *this;
        RationalPolynomial r = *this;
        Rational lc = leading();
        for (auto& v : r.c_) v /= lc;
        return r;
    }

    Rational operator()(const Rational& x) const {
        Rational acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    RationalPolynomial derivative() const {
        std::vector<Rational> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
        return RationalPolynomial(std::move(d));
    }

    RationalPolynomial& operator+=(const RationalPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    RationalPolynomial& operator-=(const RationalPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
    friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
    friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return RationalPolynomial(std::move(r));
    }
    friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division; divisor must be nonzero.
    friend std::pair<RationalPolynomial, RationalPolynomial> divmod(const RationalPolynomial& a,
                                                                    const RationalPolynomial& b) {
        if (b.is_zero()) throw Error(Errc::InvalidArgument, "polynomial division by zero");
        std::vector<Rational> rem = a.c_;
        int db = b.degree();
        if (a.degree() < db) return {RationalPolynomial(), a};
        std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - db + 1));
        for (int i = a.degree(); i >= db; --i) {
            Rational f = rem[static_cast<std::size_t>(i)] / b.leading();
            quo[static_cast<std::size_t>(i - db)] = f;
            if (f.is_zero()) continue;
            for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
        }
        return {RationalPolynomial(std::move(quo)), RationalPolynomial(std::move(rem))};
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const Rational& c = c_[static_cast<std::size_t>(i)];
            if (c.is_zero()) continue;
            bool neg = c.sign() < 0;
            Rational mag = neg ? -c : c;
            if (out.empty()) out += neg ? "-" : "";
            else out += neg ? " - " : " + ";
            bool unit = mag.is_one();
            if (!unit || i == 0) out += mag.str();
            if (i > 0) {
                if (!unit) out += "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Arithmetic in F_p and F_p[x] on machine words.
namespace modp {

using Poly = std::vector<std::uint64_t>;

struct Zp {
    std::uint64_t p;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1 % p;
        a %= p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const {
        if (a % p == 0) throw Error(Errc::InvalidArgument, "inverse of zero mod " + std::to_string(p));
        return pow(a, p - 2);
    }
};

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly sub(const Zp& F, Poly a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    trim(a);
    return a;
}

inline Poly mul(const Zp& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

inline std::pair<Poly, Poly> divmod(const Zp& F, Poly a, const Poly& b) {
    if (b.empty()) throw Error(Errc::InvalidArgument, "division by zero polynomial mod p");
    trim(a);
    int db = degree(b);
    if (degree(a) < db) return {Poly{}, a};
    Poly q(static_cast<std::size_t>(degree(a) - db + 1), 0);
    std::uint64_t inv_lc = F.inv(b.back());
    for (int i = degree(a); i >= db; --i) {
        std::uint64_t f = F.mul(a[static_cast<std::size_t>(i)], inv_lc);
        q[static_cast<std::size_t>(i - db)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) {
            auto k = static_cast<std::size_t>(i - db + j);
            a[k] = F.sub(a[k], F.mul(f, b[static_cast<std::size_t>(j)]));
        }
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline Poly rem(const Zp& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

inline Poly make_monic(const Zp& F, Poly f) {
    trim(f);
    if (f.empty()) return f;
    std::uint64_t inv = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, inv);
    return f;
}

inline Poly gcd(const Zp& F, Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(F, std::move(a));
}

inline Poly mulmod(const Zp& F, const Poly& a, const Poly& b, const Poly& m) { return rem(F, mul(F, a, b), m); }

/// base^e mod m.
inline Poly powmod(const Zp& F, Poly base, std::uint64_t e, const Poly& m) {
    Poly r{1 % F.p};
    trim(r);
    base = rem(F, base, m);
    while (e) {
        if (e & 1) r = mulmod(F, r, base, m);
        base = mulmod(F, base, base, m);
        e >>= 1;
    }
    return rem(F, r, m);
}

inline Poly derivative(const Zp& F, const Poly& f) {
    Poly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(F.mul(f[i], i % F.p));
    trim(d);
    return d;
}

inline std::uint64_t eval(const Zp& F, const Poly& f, std::uint64_t x) {
    std::uint64_t acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = F.add(F.mul(acc, x), *it);
    return acc;
}

/// Coefficient-wise reduction; BadReduction when a denominator is divisible by p.
inline Poly reduce(const RationalPolynomial& f, std::uint64_t p) {
    Poly r;
    for (const auto& c : f.coefficients()) r.push_back(c.mod(p));
    trim(r);
    return r;
}

/// Distinct-degree factorization of a monic squarefree f; returns (degree, count) ascending.
inline std::vector<std::pair<int, int>> distinct_degree(const Zp& F, Poly f) {
    std::vector<std::pair<int, int>> out;
    const Poly x{0, 1 % F.p};
    Poly h = x;
    for (int i = 1; 2 * i <= degree(f); ++i) {
        h = powmod(F, h, F.p, f);
        Poly g = gcd(F, f, sub(F, h, x));
        if (degree(g) > 0) {
            out.emplace_back(i, degree(g) / i);
            f = divmod(F, f, g).first;
            h = rem(F, h, f);
        }
    }
    if (degree(f) > 0) out.emplace_back(degree(f), 1);
    return out;
}

}  // namespace modp

/// Degrees of the irreducible factors of poly mod p, as (degree, count) pairs ascending by degree.
inline std::vector<std::pair<int, int>> ddf_mod_p(const RationalPolynomial& poly, std::uint64_t p) {
    if (p < 2) throw Error(Errc::InvalidArgument, "modulus must be prime");
    modp::Zp F{p};
    modp::Poly f = modp::reduce(poly, p);
    if (modp::degree(f) != poly.degree())
        throw Error(Errc::BadReduction, "leading coefficient vanishes mod " + std::to_string(p));
    if (f.size() <= 1) return {};
    f = modp::make_monic(F, f);
    if (modp::degree(modp::gcd(F, f, modp::derivative(F, f))) > 0)
        throw Error(Errc::NotSeparableModP, poly.str() + " mod " + std::to_string(p));
    return modp::distinct_degree(F, f);
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> ps;
    if (bound < 2) return ps;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        ps.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return ps;
}

}  // namespace twist

#endif
