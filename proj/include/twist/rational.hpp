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

#ifndef TWIST_RATIONAL_HPP
#define TWIST_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "twist/error.hpp"

namespace twist {

using Integer = mpz_class;

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
   public:
    Rational() = default;
    Rational(long v) : q_(v) {}
    Rational(int v) : q_(static_cast<long>(v)) {}
    Rational(const Integer& n) : q_(n) {}
    Rational(const Integer& num, const Integer& den) {
        if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parses "n" or "n/d" (d nonzero; sign may sit on either part).
    static Rational parse(std::string_view text) {
        std::string s(text);
        auto slash = s.find('/');
        auto as_int = [&](const std::string& part) {
            Integer z;
            if (part.empty() || z.set_str(part, 10) != 0)
                throw Error(Errc::SchemaError, "malformed rational '" + s + "'");
            return z;
        };
        if (slash == std::string::npos) return Rational(as_int(s));
        Integer den = as_int(s.substr(slash + 1));
        if (den == 0) throw Error(Errc::SchemaError, "zero denominator in '" + s + "'");
        return Rational(as_int(s.substr(0, slash)), den);
    }

    /// "n" for integers, "n/d" otherwise. parse(str()) == *this.
    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    Integer numerator() const { return q_.get_num(); }
    Integer denominator() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error(Errc::InvalidArgument, "division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    /// Residue mod p; BadReduction when p divides the denominator.
    std::uint64_t mod(std::uint64_t p) const {
        Integer pz(static_cast<unsigned long>(p));
        Integer den = q_.get_den() % pz;
        if (den == 0) throw Error(Errc::BadReduction, "denominator of " + str() + " divisible by " + std::to_string(p));
        Integer inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
        Integer num = q_.get_num() % pz;
        if (num < 0) num += pz;
        Integer r = (num * inv) % pz;
        return r.get_ui();
    }

   private:
    mpq_class q_;
};

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

}  // namespace twist

#endif
