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

#ifndef TWIST_NUMBER_FIELD_HPP
#define TWIST_NUMBER_FIELD_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twist/error.hpp"
#include "twist/polynomial.hpp"
#include "twist/rational.hpp"

namespace twist {

/// Element of a number field in the power basis 1, a, ..., a^(d-1) of its generator.
class FieldElement {
   public:
    FieldElement() = default;
    explicit FieldElement(std::vector<Rational> coords) : c_(std::move(coords)) {}

    const std::vector<Rational>& coords() const { return c_; }
    std::size_t size() const { return c_.size(); }
    const Rational& operator[](std::size_t i) const { return c_[i]; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r.is_zero(); });
    }
    /// True when the element lies in Q.
    bool is_rational() const {
        return std::all_of(c_.begin() + (c_.empty() ? 0 : 1), c_.end(), [](const Rational& r) { return r.is_zero(); });
    }
    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + c_[i].str();
        return s + "]";
    }

   private:
    std::vector<Rational> c_;
};

/// Set of automorphism indices closed under composition; always contains 0.
struct Subgroup {
    std::vector<int> members;  // sorted

    bool contains(int i) const { return std::binary_search(members.begin(), members.end(), i); }
    std::size_t size() const { return members.size(); }
    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members == b.members; }
    friend bool operator!=(const Subgroup& a, const Subgroup& b) { return !(a == b); }
    bool is_subset_of(const Subgroup& o) const {
        return std::includes(o.members.begin(), o.members.end(), members.begin(), members.end());
    }
};

struct SubfieldDescriptor {
    Subgroup subgroup;
    FieldElement primitive_element;
    RationalPolynomial min_poly;
    int degree = 0;
};

namespace detail {

inline std::vector<std::pair<Integer, unsigned>> trial_factor(Integer n, const Integer& limit) {
    std::vector<std::pair<Integer, unsigned>> out;
    if (n < 0) n = -n;
    for (Integer p = 2; p * p <= n; ++p) {
        if (p > limit) return {};
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) {
        if (n > limit * limit) return {};
        out.emplace_back(n, 1);
    }
    return out;
}

inline std::vector<Integer> divisors(const Integer& n, const Integer& limit) {
    auto fac = trial_factor(n, limit);
    if (fac.empty() && abs(n) > 1) return {};
    std::vector<Integer> ds{1};
    for (auto& [p, e] : fac) {
        std::size_t cur = ds.size();
        Integer pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < cur; ++i) ds.push_back(ds[i] * pk);
        }
    }
    return ds;
}

/// All subset sums of the factor degrees in a mod-p factorization pattern.
inline std::set<int> subset_sums(const std::vector<std::pair<int, int>>& pattern) {
    std::set<int> sums{0};
    for (auto [deg, count] : pattern)
        for (int c = 0; c < count; ++c) {
            std::set<int> next = sums;
            for (int s : sums) next.insert(s + deg);
            sums = std::move(next);
        }
    return sums;
}

}  // namespace detail

/// Result of the irreducibility test run by NumberField::make.
enum class Irreducibility { proven, assumed };

/// Galois number field Q(a) = Q[x]/(min_poly) with all automorphisms given by the images of a.
class NumberField {
   public:
    /// Validates irreducibility, that every image is a root of min_poly, and closure.
    static NumberField make(RationalPolynomial min_poly, std::vector<FieldElement> aut_images) {
        if (min_poly.degree() < 1 || !min_poly.is_monic())
            throw Error(Errc::InvalidArgument, "minimal polynomial must be monic of positive degree");
        NumberField K;
        K.phi_ = std::move(min_poly);
        K.d_ = K.phi_.degree();
        if (static_cast<int>(aut_images.size()) != K.d_)
            throw Error(Errc::NotAnAutomorphism, "expected " + std::to_string(K.d_) + " automorphism images, got " +
                                                     std::to_string(aut_images.size()));
        for (const auto& img : aut_images)
            if (static_cast<int>(img.size()) != K.d_)
                throw Error(Errc::CoefficientDimensionMismatch, "automorphism image " + img.str() + " has wrong length");
        K.build_reduction();
        K.irreducibility_ = check_irreducible(K.phi_);
        K.images_ = std::move(aut_images);
        if (K.images_[0] != K.gen())
            throw Error(Errc::NotAnAutomorphism, "index 0 must be the identity (image " + K.images_[0].str() + ")");
        for (int i = 0; i < K.d_; ++i) {
            if (!K.eval_min_poly(K.images_[static_cast<std::size_t>(i)]).is_zero())
                throw Error(Errc::NotAnAutomorphism, "image " + std::to_string(i) + " is not a root of the minimal polynomial");
            for (int j = 0; j < i; ++j)
                if (K.images_[static_cast<std::size_t>(i)] == K.images_[static_cast<std::size_t>(j)])
                    throw Error(Errc::NotAnAutomorphism, "images " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
        }
        K.table_.assign(static_cast<std::size_t>(K.d_ * K.d_), -1);
        for (int i = 0; i < K.d_; ++i)
            for (int j = 0; j < K.d_; ++j) {
                FieldElement c = K.apply(i, K.images_[static_cast<std::size_t>(j)]);
                auto it = std::find(K.images_.begin(), K.images_.end(), c);
                if (it == K.images_.end())
                    throw Error(Errc::NotClosed, "composition of " + std::to_string(i) + " and " + std::to_string(j) +
                                                     " is not among the given automorphisms");
                K.table_[static_cast<std::size_t>(i * K.d_ + j)] = static_cast<int>(it - K.images_.begin());
            }
        K.inverse_.assign(static_cast<std::size_t>(K.d_), -1);
        for (int i = 0; i < K.d_; ++i)
            for (int j = 0; j < K.d_; ++j)
                if (K.compose(i, j) == 0) K.inverse_[static_cast<std::size_t>(i)] = j;
        return K;
    }

    /// The rational field, degree 1.
    static NumberField rationals() { return make(RationalPolynomial({-1, 1}), {FieldElement({Rational(1)})}); }

    int degree() const { return d_; }
    const RationalPolynomial& min_poly() const { return phi_; }
    const std::vector<FieldElement>& aut_images() const { return images_; }
    const FieldElement& aut_image(int i) const { return images_.at(static_cast<std::size_t>(i)); }
    Irreducibility irreducibility() const { return irreducibility_; }

    /// Index of s_i o s_j (s_j applied first).
    int compose(int i, int j) const {
        check_index(i);
        check_index(j);
        return table_[static_cast<std::size_t>(i * d_ + j)];
    }
    int inverse(int i) const {
        check_index(i);
        return inverse_[static_cast<std::size_t>(i)];
    }
    int order(int i) const {
        int k = 1;
        for (int c = i; c != 0; c = compose(i, c)) ++k;
        return k;
    }
    bool is_abelian() const {
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                if (compose(i, j) != compose(j, i)) return false;
        return true;
    }
    void check_index(int i) const {
        if (i < 0 || i >= d_) throw Error(Errc::IndexOutOfRange, "automorphism index " + std::to_string(i));
    }

    FieldElement zero() const { return FieldElement(std::vector<Rational>(static_cast<std::size_t>(d_))); }
    FieldElement one() const { return from_rational(Rational(1)); }
    FieldElement from_rational(const Rational& r) const {
        std::vector<Rational> c(static_cast<std::size_t>(d_));
        c[0] = r;
        return FieldElement(std::move(c));
    }
    /// The generator a.
    FieldElement gen() const {
        if (d_ == 1) return FieldElement({-phi_[0]});
        std::vector<Rational> c(static_cast<std::size_t>(d_));
        c[1] = Rational(1);
        return FieldElement(std::move(c));
    }
    /// a^k reduced to the power basis.
    FieldElement gen_power(int k) const {
        FieldElement r = one();
        FieldElement g = gen();
        for (int i = 0; i < k; ++i) r = mul(r, g);
        return r;
    }
    FieldElement from_polynomial(const RationalPolynomial& p) const {
        FieldElement acc = zero();
        FieldElement g = gen();
        for (int i = p.degree(); i >= 0; --i) acc = add(mul(acc, g), from_rational(p[static_cast<std::size_t>(i)]));
        return acc;
    }
    RationalPolynomial to_polynomial(const FieldElement& x) const { return RationalPolynomial(x.coords()); }

    void check_element(const FieldElement& x) const {
        if (static_cast<int>(x.size()) != d_)
            throw Error(Errc::CoefficientDimensionMismatch,
                        "element " + x.str() + " does not have " + std::to_string(d_) + " coordinates");
    }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        std::vector<Rational> c(static_cast<std::size_t>(d_));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
        return FieldElement(std::move(c));
    }
    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        std::vector<Rational> c(static_cast<std::size_t>(d_));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
        return FieldElement(std::move(c));
    }
    FieldElement neg(const FieldElement& a) const {
        std::vector<Rational> c(static_cast<std::size_t>(d_));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a[i];
        return FieldElement(std::move(c));
    }
    FieldElement scale(const FieldElement& a, const Rational& r) const {
        std::vector<Rational> c(static_cast<std::size_t>(d_));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * r;
        return FieldElement(std::move(c));
    }
    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        const auto d = static_cast<std::size_t>(d_);
        std::vector<Rational> prod(2 * d - 1);
        for (std::size_t i = 0; i < d; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < d; ++j)
                if (!b[j].is_zero()) prod[i + j] += a[i] * b[j];
        }
        std::vector<Rational> c(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(d));
        for (std::size_t k = d; k < prod.size(); ++k) {
            if (prod[k].is_zero()) continue;
            const auto& red = reduction_[k - d];
            for (std::size_t i = 0; i < d; ++i) c[i] += prod[k] * red[i];
        }
        return FieldElement(std::move(c));
    }
    FieldElement inv(const FieldElement& a) const {
        if (a.is_zero()) throw Error(Errc::InvalidArgument, "inverse of zero in number field");
        // Extended Euclid on (phi, a): s*a + t*phi = g with g a nonzero constant.
        RationalPolynomial r0 = phi_, r1 = to_polynomial(a);
        RationalPolynomial s0, s1 = RationalPolynomial::constant(Rational(1));
        while (r1.degree() > 0) {
            auto [q, r] = divmod(r0, r1);
            RationalPolynomial s = s0 - q * s1;
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        if (r1.is_zero()) throw Error(Errc::NotIrreducible, "element is a zero divisor; minimal polynomial is reducible");
        FieldElement s = from_polynomial(s1);
        return scale(s, Rational(1) / r1[0]);
    }
    FieldElement div(const FieldElement& a, const FieldElement& b) const { return mul(a, inv(b)); }
    FieldElement pow(FieldElement base, long long e) const {
        if (e < 0) {
            base = inv(base);
            e = -e;
        }
        FieldElement r = one();
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    bool equal(const FieldElement& a, const FieldElement& b) const { return a == b; }
    bool is_zero(const FieldElement& a) const { return a.is_zero(); }

    /// s_i(x) = sum x_k s_i(a)^k.
    FieldElement apply(int i, const FieldElement& x) const {
        check_index(i);
        if (i == 0) return x;
        const FieldElement& img = images_[static_cast<std::size_t>(i)];
        FieldElement acc = zero();
        for (int k = d_ - 1; k >= 0; --k) acc = add(mul(acc, img), from_rational(x[static_cast<std::size_t>(k)]));
        return acc;
    }

    /// Smallest k in [1, bound] with x^k = 1.
    std::optional<int> multiplicative_order(const FieldElement& x, int bound) const {
        FieldElement p = x;
        for (int k = 1; k <= bound; ++k) {
            if (p == one()) return k;
            p = mul(p, x);
        }
        return std::nullopt;
    }

    Subgroup full_group() const {
        Subgroup s;
        for (int i = 0; i < d_; ++i) s.members.push_back(i);
        return s;
    }
    Subgroup trivial_group() const { return Subgroup{{0}}; }

    /// Validates a member list as a subgroup (identity present, closed).
    Subgroup subgroup(std::vector<int> members) const {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (int m : members) check_index(m);
        Subgroup s{std::move(members)};
        if (!s.contains(0)) throw Error(Errc::NotClosed, "subgroup must contain the identity");
        for (int a : s.members)
            for (int b : s.members)
                if (!s.contains(compose(a, b))) throw Error(Errc::NotClosed, "subgroup not closed under composition");
        return s;
    }
    /// Subgroup generated by the given automorphisms.
    Subgroup generated(const std::vector<int>& gens) const {
        std::set<int> s{0};
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(s.begin(), s.end());
            for (int a : cur)
                for (int g : gens)
                    if (s.insert(compose(g, a)).second) grew = true;
        }
        return Subgroup{std::vector<int>(s.begin(), s.end())};
    }

    /// evaluates min_poly at x inside the field
    FieldElement eval_min_poly(const FieldElement& x) const {
        FieldElement acc = zero();
        for (int i = phi_.degree(); i >= 0; --i) acc = add(mul(acc, x), from_rational(phi_[static_cast<std::size_t>(i)]));
        return acc;
    }

    /// True when p divides a denominator of min_poly or min_poly is not squarefree mod p.
    bool is_ramified(std::uint64_t p) const {
        modp::Zp F{p};
        modp::Poly f;
        try {
            f = modp::reduce(phi_, p);
            for (const auto& img : images_) (void)modp::reduce(to_polynomial(img), p);
        } catch (const Error&) {
            return true;
        }
        if (d_ == 1) return false;
        return modp::degree(modp::gcd(F, f, modp::derivative(F, f))) > 0;
    }

   private:
    NumberField() = default;

    void build_reduction() {
        // a^(d+k) for k = 0..d-2 in the power basis.
        const auto d = static_cast<std::size_t>(d_);
        reduction_.clear();
        std::vector<Rational> cur(d);
        for (std::size_t i = 0; i < d; ++i) cur[i] = -phi_[i];
        for (std::size_t k = 0; k + 1 < d; ++k) {
            reduction_.push_back(cur);
            std::vector<Rational> next(d);
            for (std::size_t i = 0; i + 1 < d; ++i) next[i + 1] = cur[i];
            Rational top = cur[d - 1];
            for (std::size_t i = 0; i < d; ++i) next[i] -= top * phi_[i];
            cur = std::move(next);
        }
        if (d == 1) reduction_.clear();
    }

    static Irreducibility check_irreducible(const RationalPolynomial& phi) {
        const int d = phi.degree();
        if (d == 1) return Irreducibility::proven;
        // Integral monic model: D^d * phi(x / D).
        Integer D = 1;
        for (const auto& c : phi.coefficients()) D = lcm(D, c.denominator());
        std::vector<Integer> f(static_cast<std::size_t>(d + 1));
        {
            Integer pw = 1;
            for (int i = d; i >= 0; --i) {
                Rational v = phi[static_cast<std::size_t>(i)] * Rational(pw);
                f[static_cast<std::size_t>(i)] = v.numerator();
                pw *= D;
            }
        }
        RationalPolynomial g;
        {
            std::vector<Rational> gc;
            for (auto& v : f) gc.emplace_back(v);
            g = RationalPolynomial(std::move(gc));
        }
        if (f[0] == 0) throw Error(Errc::NotIrreducible, phi.str() + " has the root 0");

        std::set<int> possible;
        for (int k = 1; k < d; ++k) possible.insert(k);
        int tested = 0;
        for (std::uint64_t p : primes_up_to(400)) {
            if (possible.empty() || tested >= 40) break;
            std::vector<std::pair<int, int>> pattern;
            try {
                pattern = ddf_mod_p(g, p);
            } catch (const Error&) {
                continue;
            }
            ++tested;
            auto sums = detail::subset_sums(pattern);
            for (auto it = possible.begin(); it != possible.end();) it = sums.count(*it) ? std::next(it) : possible.erase(it);
        }
        if (possible.empty()) return Irreducibility::proven;

        const Integer limit = 1000000;
        auto ds = detail::divisors(f[0], limit);
        if (ds.empty()) return Irreducibility::assumed;
        if (possible.count(1)) {
            for (const auto& r : ds)
                for (int s : {1, -1})
                    if (g(Rational(Integer(r * s))).is_zero())
                        throw Error(Errc::NotIrreducible, phi.str() + " has a rational root");
            possible.erase(1);
            possible.erase(d - 1);
        }
        if (possible.count(2)) {
            Integer bound = 0;
            for (auto& v : f) bound = std::max(bound, Integer(abs(v)));
            bound += 1;
            if (bound * 2 * static_cast<long>(ds.size()) > limit * 10) return Irreducibility::assumed;
            for (const auto& c0 : ds)
                for (int s : {1, -1}) {
                    Integer c = c0 * s;
                    for (Integer b = -2 * bound; b <= 2 * bound; ++b) {
                        RationalPolynomial q(std::vector<Rational>{Rational(c), Rational(b), Rational(1)});
                        if (divmod(g, q).second.is_zero())
                            throw Error(Errc::NotIrreducible, phi.str() + " has a quadratic factor");
                    }
                }
            possible.erase(2);
            possible.erase(d - 2);
        }
        return possible.empty() ? Irreducibility::proven : Irreducibility::assumed;
    }

    RationalPolynomial phi_;
    int d_ = 0;
    std::vector<FieldElement> images_;
    std::vector<int> table_;
    std::vector<int> inverse_;
    std::vector<std::vector<Rational>> reduction_;
    Irreducibility irreducibility_ = Irreducibility::proven;
};

inline NumberField field_make(RationalPolynomial min_poly, std::vector<FieldElement> aut_images) {
    return NumberField::make(std::move(min_poly), std::move(aut_images));
}

inline FieldElement apply_aut(const NumberField& K, int i, const FieldElement& x) { return K.apply(i, x); }

/// { s : s(x) = x for all x in elems }.
inline Subgroup stabilizer(const NumberField& K, std::span<const FieldElement> elems) {
    Subgroup s;
    for (int i = 0; i < K.degree(); ++i) {
        bool fixes = std::all_of(elems.begin(), elems.end(), [&](const FieldElement& x) { return K.apply(i, x) == x; });
        if (fixes) s.members.push_back(i);
    }
    return s;
}

/// One representative (smallest index) per left coset gS.
inline std::vector<int> left_coset_representatives(const NumberField& K, const Subgroup& S) {
    std::vector<bool> seen(static_cast<std::size_t>(K.degree()), false);
    std::vector<int> reps;
    for (int g = 0; g < K.degree(); ++g) {
        if (seen[static_cast<std::size_t>(g)]) continue;
        reps.push_back(g);
        for (int s : S.members) seen[static_cast<std::size_t>(K.compose(g, s))] = true;
    }
    return reps;
}

namespace detail {

/// Replaces b by (D/k) b so that its minimal polynomial becomes integral with no removable k-th power factors.
inline std::pair<FieldElement, RationalPolynomial> normalize_scaling(const NumberField& K, const FieldElement& b,
                                                                     const RationalPolynomial& mp) {
    const int e = mp.degree();
    const Integer limit = 1000000;
    Integer D = 1;
    for (int i = 0; i < e; ++i) {
        const Rational& c = mp[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        auto fac = trial_factor(c.denominator(), limit);
        if (fac.empty() && c.denominator() > 1) return {b, mp};
        for (auto& [p, v] : fac) {
            unsigned need = (v + static_cast<unsigned>(e - i) - 1) / static_cast<unsigned>(e - i);
            Integer pk;
            mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), need);
            if (D % pk != 0) D = lcm(D, pk);
        }
    }
    auto scaled = [&](const Rational& t) {
        std::vector<Rational> c(static_cast<std::size_t>(e + 1));
        Rational pw(1);
        for (int i = e; i >= 0; --i) {
            c[static_cast<std::size_t>(i)] = mp[static_cast<std::size_t>(i)] * pw;
            pw *= t;
        }
        return RationalPolynomial(std::move(c));
    };
    RationalPolynomial integral = scaled(Rational(D));
    Integer k = 1;
    const Rational& c0 = integral[0];
    if (!c0.is_zero()) {
        auto fac = trial_factor(c0.numerator(), limit);
        for (auto& [p, v0] : fac) {
            unsigned best = v0 / static_cast<unsigned>(e);
            for (int i = 1; i < e && best > 0; ++i) {
                Integer ci = integral[static_cast<std::size_t>(i)].numerator();
                if (ci == 0) continue;
                unsigned v = 0;
                while (ci % p == 0) {
                    ci /= p;
                    ++v;
                }
                best = std::min(best, v / static_cast<unsigned>(e - i));
            }
            Integer pk;
            mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), best);
            k *= pk;
        }
    }
    Rational t = Rational(D) / Rational(k);
    return {K.scale(b, t), scaled(t)};
}

}  // namespace detail

/// Minimal polynomial of an element of the fixed field of S, as the product over coset representatives.
inline RationalPolynomial orbit_polynomial(const NumberField& K, const Subgroup& S, const FieldElement& b) {
    // Polynomial with coefficients in K, ascending.
    std::vector<FieldElement> poly{K.one()};
    for (int g : left_coset_representatives(K, S)) {
        FieldElement root = K.apply(g, b);
        std::vector<FieldElement> next(poly.size() + 1, K.zero());
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = K.add(next[i + 1], poly[i]);
            next[i] = K.sub(next[i], K.mul(poly[i], root));
        }
        poly = std::move(next);
    }
    std::vector<Rational> c;
    for (const auto& x : poly) {
        if (!x.is_rational()) throw Error(Errc::InvalidArgument, "orbit polynomial has irrational coefficients");
        c.push_back(x[0]);
    }
    return RationalPolynomial(std::move(c));
}

/// Fixed field E^S with a primitive element whose stabilizer is exactly S.
inline SubfieldDescriptor fixed_field(const NumberField& K, const Subgroup& S_in) {
    Subgroup S = K.subgroup(S_in.members);
    SubfieldDescriptor out;
    out.subgroup = S;
    out.degree = K.degree() / static_cast<int>(S.size());
    if (out.degree == 1) {
        out.primitive_element = K.one();
        out.min_poly = RationalPolynomial({-1, 1});
        return out;
    }
    auto orbit_sum = [&](const FieldElement& c) {
        FieldElement acc = K.zero();
        for (int s : S.members) acc = K.add(acc, K.apply(s, c));
        return acc;
    };
    auto accept = [&](const FieldElement& c) -> bool {
        FieldElement b = orbit_sum(c);
        std::vector<FieldElement> one_elem{b};
        if (stabilizer(K, one_elem) != S) return false;
        RationalPolynomial mp = orbit_polynomial(K, S, b);
        auto [nb, nmp] = detail::normalize_scaling(K, b, mp);
        out.primitive_element = nb;
        out.min_poly = nmp;
        return true;
    };
    const FieldElement a = K.gen();
    const FieldElement a2 = K.gen_power(2);
    // c_k = a + k a^2, k = 0, 1, 2, ...
    for (long k = 0; k <= 4L * K.degree() * K.degree(); ++k)
        if (accept(K.add(a, K.scale(a2, Rational(k))))) return out;
    // Fallback: small integer combinations of a, a^2, ..., a^(d-1) by increasing height.
    const int d = K.degree();
    for (long h = 1;; ++h) {
        std::vector<long> w(static_cast<std::size_t>(d - 1), -h);
        while (true) {
            FieldElement c = K.zero();
            for (int j = 1; j < d; ++j) c = K.add(c, K.scale(K.gen_power(j), Rational(w[static_cast<std::size_t>(j - 1)])));
            if (!c.is_zero() && accept(c)) return out;
            std::size_t pos = 0;
            while (pos < w.size() && w[pos] == h) w[pos++] = -h;
            if (pos == w.size()) break;
            ++w[pos];
        }
    }
}

struct Frobenius {
    int index = 0;
    bool ambiguous = false;  // non-abelian group: a conjugacy-class representative
};

/// Automorphism s with s(a) = a^p modulo a prime above p.
inline Frobenius frobenius_at(const NumberField& K, std::uint64_t p) {
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
    if (K.is_ramified(p)) throw Error(Errc::Ramified, "p = " + std::to_string(p) + " divides the discriminant");
    if (K.degree() == 1) return {};
    modp::Zp F{p};
    modp::Poly f = modp::make_monic(F, modp::reduce(K.min_poly(), p));
    modp::Poly xp = modp::powmod(F, modp::Poly{0, 1}, p, f);
    std::vector<int> hits;
    for (int i = 0; i < K.degree(); ++i) {
        modp::Poly img = modp::reduce(K.to_polynomial(K.aut_image(i)), p);
        modp::Poly g = modp::gcd(F, f, modp::sub(F, img, xp));
        if (modp::degree(g) > 0) hits.push_back(i);
    }
    if (hits.empty()) throw Error(Errc::Ramified, "no Frobenius found at p = " + std::to_string(p));
    return Frobenius{hits.front(), hits.size() > 1};
}

struct Place {
    int representative = 0;  // smallest g with the place given by the coset Sg
    int residue_degree = 0;
    std::vector<int> cosets;  // representatives of the right cosets Sg in this orbit
};

/// Places of E^S above p: orbits of the right cosets S\G under right multiplication by Frobenius.
inline std::vector<Place> place_decomposition_with(const NumberField& K, const Subgroup& S, int frob) {
    const int d = K.degree();
    std::vector<int> coset_of(static_cast<std::size_t>(d), -1);
    std::vector<int> reps;
    for (int g = 0; g < d; ++g) {
        if (coset_of[static_cast<std::size_t>(g)] >= 0) continue;
        int id = static_cast<int>(reps.size());
        reps.push_back(g);
        for (int s : S.members) coset_of[static_cast<std::size_t>(K.compose(s, g))] = id;
    }
    std::vector<bool> done(reps.size(), false);
    std::vector<Place> places;
    for (std::size_t c = 0; c < reps.size(); ++c) {
        if (done[c]) continue;
        Place pl;
        pl.representative = reps[c];
        int cur = static_cast<int>(c);
        while (!done[static_cast<std::size_t>(cur)]) {
            done[static_cast<std::size_t>(cur)] = true;
            pl.cosets.push_back(reps[static_cast<std::size_t>(cur)]);
            cur = coset_of[static_cast<std::size_t>(K.compose(reps[static_cast<std::size_t>(cur)], frob))];
        }
        pl.residue_degree = static_cast<int>(pl.cosets.size());
        std::sort(pl.cosets.begin(), pl.cosets.end());
        places.push_back(std::move(pl));
    }
    return places;
}

inline std::vector<Place> place_decomposition(const NumberField& K, const Subgroup& S, std::uint64_t p) {
    return place_decomposition_with(K, K.subgroup(S.members), frobenius_at(K, p).index);
}

}  // namespace twist

#endif
