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

// Table-driven GF(p^k). Elements are integers 0..p^k-1 read as base-p digit
// vectors in the power basis of a fixed modulus: the smallest monic
// irreducible polynomial of degree k, so equal (p, k) always give equal tables.

#ifndef TWIST_GALOIS_FIELD_HPP
#define TWIST_GALOIS_FIELD_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "twist/error.hpp"
#include "twist/polynomial.hpp"

namespace twist {

class GaloisField {
   public:
    using Elem = std::uint32_t;
    static constexpr std::uint32_t kMaxSize = 1024;

    static std::shared_ptr<const GaloisField> make(std::uint32_t p, int k) {
        if (!is_prime(p)) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
        if (k < 1) throw Error(Errc::InvalidArgument, "extension degree must be positive");
        std::uint64_t size = 1;
        for (int i = 0; i < k; ++i) {
            size *= p;
            if (size > kMaxSize)
                throw Error(Errc::BudgetExceeded, "GF(" + std::to_string(p) + "^" + std::to_string(k) + ") exceeds table limit " +
                                                      std::to_string(kMaxSize));
        }
        return std::shared_ptr<const GaloisField>(new GaloisField(p, k, static_cast<std::uint32_t>(size)));
    }

    std::uint32_t characteristic() const { return p_; }
    int degree() const { return k_; }
    std::uint32_t size() const { return size_; }
    /// Modulus coefficients ascending, monic.
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const { return add_[a * size_ + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const { return mul_[a * size_ + b]; }
    Elem inv(Elem a) const {
        if (a == 0) throw Error(Errc::NotInvertible, "zero has no inverse");
        return inv_[a];
    }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    /// x -> x^p
    Elem frobenius(Elem a) const { return frob_[a]; }
    /// x -> x^(p^e)
    Elem frobenius(Elem a, int e) const {
        e %= k_;
        for (int i = 0; i < e; ++i) a = frob_[a];
        return a;
    }
    Elem from_int(long v) const {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += p_;
        return static_cast<Elem>(r);
    }
    bool valid(Elem a) const { return a < size_; }

    std::string modulus_str() const {
        RationalPolynomial f([&] {
            std::vector<Rational> c;
            for (auto x : modulus_) c.emplace_back(static_cast<long>(x));
            return c;
        }());
        return f.str();
    }

   private:
    GaloisField(std::uint32_t p, int k, std::uint32_t size) : p_(p), k_(k), size_(size) {
        modp::Zp F{p};
        // smallest encoding c_0 + c_1 p + ... among monic irreducibles of degree k
        for (std::uint64_t code = 0;; ++code) {
            modp::Poly f(static_cast<std::size_t>(k) + 1);
            std::uint64_t c = code;
            for (int i = 0; i < k; ++i) {
                f[static_cast<std::size_t>(i)] = c % p;
                c /= p;
            }
            f[static_cast<std::size_t>(k)] = 1;
            if (is_irreducible(F, f)) {
                modulus_ = f;
                break;
            }
        }
        const std::size_t n = size_;
        add_.resize(n * n);
        mul_.resize(n * n);
        neg_.resize(n);
        inv_.resize(n, 0);
        frob_.resize(n);
        std::vector<modp::Poly> polys(n);
        for (std::uint32_t a = 0; a < size_; ++a) polys[a] = to_poly(a);
        for (std::uint32_t a = 0; a < size_; ++a) {
            for (std::uint32_t b = 0; b < size_; ++b) {
                std::vector<std::uint64_t> s(static_cast<std::size_t>(k_));
                for (int i = 0; i < k_; ++i) s[static_cast<std::size_t>(i)] = (digit(a, i) + digit(b, i)) % p_;
                add_[a * n + b] = from_digits(s);
                mul_[a * n + b] = from_poly(modp::rem(F, modp::mul(F, polys[a], polys[b]), modulus_));
            }
            std::vector<std::uint64_t> s(static_cast<std::size_t>(k_));
            for (int i = 0; i < k_; ++i) s[static_cast<std::size_t>(i)] = (p_ - digit(a, i)) % p_;
            neg_[a] = from_digits(s);
        }
        for (std::uint32_t a = 1; a < size_; ++a)
            for (std::uint32_t b = 1; b < size_; ++b)
                if (mul_[a * n + b] == 1) {
                    inv_[a] = b;
                    break;
                }
        for (std::uint32_t a = 0; a < size_; ++a) {
            Elem r = 1;
            for (std::uint32_t i = 0; i < p_; ++i) r = mul_[r * n + a];
            frob_[a] = r;
        }
    }

    static bool is_irreducible(const modp::Zp& F, const modp::Poly& f) {
        if (modp::degree(f) == 1) return true;
        auto g = modp::gcd(F, f, modp::derivative(F, f));
        if (modp::degree(g) != 0) return false;
        auto dd = modp::distinct_degree(F, f);
        return dd.size() == 1 && dd[0].first == modp::degree(f) && dd[0].second == 1;
    }

    std::uint64_t digit(std::uint32_t a, int i) const {
        for (int j = 0; j < i; ++j) a /= p_;
        return a % p_;
    }
    Elem from_digits(const std::vector<std::uint64_t>& d) const {
        std::uint64_t r = 0;
        for (int i = k_ - 1; i >= 0; --i) r = r * p_ + d[static_cast<std::size_t>(i)];
        return static_cast<Elem>(r);
    }
    modp::Poly to_poly(std::uint32_t a) const {
        modp::Poly f(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) f[static_cast<std::size_t>(i)] = digit(a, i);
        modp::trim(f);
        return f;
    }
    Elem from_poly(const modp::Poly& f) const {
        std::vector<std::uint64_t> d(static_cast<std::size_t>(k_), 0);
        for (std::size_t i = 0; i < f.size(); ++i) d[i] = f[i];
        return from_digits(d);
    }

    std::uint32_t p_;
    int k_;
    std::uint32_t size_;
    std::vector<std::uint64_t> modulus_;
    std::vector<Elem> add_, mul_, neg_, inv_, frob_;
};

}  // namespace twist

#endif
