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

#include <gtest/gtest.h>

#include "support/fields.hpp"
#include "support/oracles.hpp"
#include "twist/characters.hpp"

using namespace twist;
using namespace twist::testing;

namespace {

std::vector<long> primes_to(long b) {
    std::vector<long> out;
    for (auto p : primes_up_to(static_cast<std::uint64_t>(b))) out.push_back(static_cast<long>(p));
    return out;
}

/// All Dirichlet characters mod N with values in the roots of unity of K.
std::vector<Character> all_characters(const NumberField& K, long N) {
    auto mu = roots_of_unity(K);
    auto G = unit_group(N);
    std::vector<Character> out;
    std::vector<int> k(G->generators.size(), 0);
    while (true) {
        std::vector<FieldElement> vals;
        bool ok = true;
        for (std::size_t j = 0; j < k.size(); ++j) {
            auto v = K.pow(mu.generator, k[j]);
            if (K.pow(v, G->orders[j]) != K.one()) ok = false;
            vals.push_back(v);
        }
        if (ok) out.push_back(dirichlet_character(K, N, vals));
        std::size_t pos = 0;
        while (pos < k.size() && ++k[pos] == mu.order) k[pos++] = 0;
        if (pos == k.size()) break;
    }
    return out;
}

}  // namespace

TEST(UnitGroups, StructureAndLogs) {
    for (long N = 1; N <= 200; ++N) {
        auto G = unit_group(N);
        long phi = 0;
        for (long a = 1; a <= N; ++a)
            if (std::gcd(a, N) == 1) ++phi;
        EXPECT_EQ(G->phi(), phi) << N;
        for (long a = 1; a < N; ++a) {
            if (std::gcd(a, N) != 1) continue;
            long r = 1 % N;
            const auto& e = G->exponents(a);
            for (std::size_t j = 0; j < e.size(); ++j)
                for (int t = 0; t < e[j]; ++t) r = r * G->generators[j] % N;
            EXPECT_EQ(r, a % N);
        }
    }
    EXPECT_EQ(unit_group(4)->generators, (std::vector<long>{3}));
    EXPECT_EQ(unit_group(16)->generators, (std::vector<long>{15, 5}));
}

TEST(CharEval, Examples) {
    auto K = NumberField::rationals();
    auto triv = trivial_character(K);
    for (long v : {2L, 3L, 97L}) EXPECT_EQ(char_eval(K, triv, v), K.one());
    auto chi4 = kronecker_character(K, -4);
    EXPECT_EQ(chi4.modulus, 4);
    EXPECT_EQ(chi4.order, 2);
    EXPECT_EQ(char_eval(K, chi4, 7), K.from_rational(-1));
    EXPECT_EQ(char_eval(K, chi4, 13), K.one());
    try {
        char_eval(K, chi4, 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotCoprime);
    }
    auto tab = table_character(K, {{3, K.one()}});
    try {
        char_eval(K, tab, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingValue);
    }
}

TEST(CharEval, KroneckerMatchesEulerCriterion) {
    auto K = NumberField::rationals();
    for (long d : {-4L, -3L, 5L, 8L, -8L, 12L, -7L, 13L}) {
        auto chi = kronecker_character(K, d);
        for (long p : primes_to(300)) {
            if (p == 2 || d % p == 0) continue;
            EXPECT_EQ(char_eval(K, chi, p), K.from_rational(legendre(d, p))) << d << " " << p;
        }
    }
}

TEST(CharTransform, Examples) {
    auto K = gaussian();
    auto chi4 = kronecker_character(K, -4);
    auto t = char_transform(K, 1, chi4);
    EXPECT_TRUE(same_dirichlet(K, t, chi4));
    EXPECT_TRUE(is_trivial(K, char_transform(K, 1, trivial_character(K))));
    // order-4 character mod 5 sending 2 to i
    auto chi = dirichlet_character(K, 5, {fe({0, 1})});
    EXPECT_EQ(chi.order, 4);
    auto conj = char_transform(K, 1, chi);
    EXPECT_TRUE(same_dirichlet(K, conj, char_inverse(K, chi)));
    EXPECT_FALSE(same_dirichlet(K, conj, chi));
    EXPECT_EQ(conj.order, 4);
}

TEST(CharTransform, FollowsCompositionTable) {
    auto K = cyclotomic5();
    for (const auto& chi : all_characters(K, 11))
        for (int g = 0; g < 4; ++g)
            for (int h = 0; h < 4; ++h) {
                auto lhs = char_transform(K, g, char_transform(K, h, chi));
                auto rhs = char_transform(K, K.compose(g, h), chi);
                EXPECT_EQ(lhs.generator_values, rhs.generator_values);
            }
}

TEST(CharMul, Examples) {
    auto K = NumberField::rationals();
    auto chi4 = kronecker_character(K, -4), chi3 = kronecker_character(K, -3);
    auto triv = trivial_character(K);
    EXPECT_TRUE(same_dirichlet(K, char_mul(K, chi4, triv), chi4));
    EXPECT_TRUE(is_trivial(K, char_mul(K, chi4, chi4)));
    auto chi12 = char_mul(K, chi4, chi3);
    EXPECT_EQ(chi12.modulus, 12);
    EXPECT_EQ(conductor(K, chi12), 12);
    for (long p : primes_to(50)) {
        if (p <= 3) continue;
        EXPECT_EQ(char_eval(K, chi12, p), K.from_rational(legendre(-1, p) * legendre(-3, p)));
    }
    auto t1 = table_character(K, {{5, K.one()}, {7, K.from_rational(-1)}});
    auto t2 = table_character(K, {{5, K.one()}});
    try {
        char_mul(K, t1, t2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::IncompatibleSupports);
    }
    auto mixed = char_mul(K, t1, chi4);
    EXPECT_EQ(char_eval(K, mixed, 7), K.one());
}

TEST(CharMul, AssociativeCommutativeWithIdentity) {
    auto K = gaussian();
    std::vector<Character> chars = all_characters(K, 5);
    for (auto& c : all_characters(K, 8)) chars.push_back(c);
    chars.push_back(kronecker_character(K, -3));
    auto places = primes_to(200);
    auto triv = trivial_character(K);
    for (const auto& a : chars) {
        EXPECT_TRUE(same_values(K, char_mul(K, a, triv), a, places));
        for (const auto& b : chars) {
            EXPECT_TRUE(same_dirichlet(K, char_mul(K, a, b), char_mul(K, b, a)));
            for (const auto& c : {chars[1], chars.back()})
                EXPECT_TRUE(same_dirichlet(K, char_mul(K, char_mul(K, a, b), c), char_mul(K, a, char_mul(K, b, c))));
        }
    }
}

TEST(Characters, StoredValuesHaveStatedOrder) {
    for (const auto& K : {gaussian(), eisenstein(), cyclotomic5()})
        for (long N : {5L, 7L, 8L, 13L})
            for (const auto& chi : all_characters(K, N)) {
                for (const auto& v : chi.generator_values) EXPECT_EQ(K.pow(v, chi.order), K.one());
                bool exact = false;
                for (const auto& v : chi.generator_values)
                    if (K.multiplicative_order(v, chi.order) == chi.order) exact = true;
                EXPECT_TRUE(exact || chi.order == 1);
            }
    try {
        dirichlet_character(gaussian(), 4, {fe({0, 1})});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotRootOfUnity);
    }
}

TEST(CharFit, QuadraticMod4) {
    auto K = NumberField::rationals();
    std::map<long, FieldElement> vals;
    for (long p : primes_to(50))
        if (p > 2) vals[p] = K.from_rational((p % 4 == 1) ? 1 : -1);
    auto fit = char_fit(K, vals, 100, 2);
    ASSERT_TRUE(fit);
    EXPECT_EQ(fit->modulus, 4);
    EXPECT_TRUE(same_dirichlet(K, *fit, kronecker_character(K, -4)));
}

TEST(CharFit, AllOnesIsTrivial) {
    auto K = gaussian();
    std::map<long, FieldElement> vals;
    for (long p : primes_to(60)) vals[p] = K.one();
    auto fit = char_fit(K, vals, 64, 4);
    ASSERT_TRUE(fit);
    EXPECT_EQ(fit->modulus, 1);
    EXPECT_EQ(conductor(K, *fit), 1);
}

TEST(CharFit, SparseTable) {
    // (-2/p) fits these four values mod 8; below 8 nothing does
    auto K = NumberField::rationals();
    std::map<long, FieldElement> vals{{3, K.one()}, {7, K.from_rational(-1)}, {11, K.one()}, {19, K.one()}};
    for (auto [p, v] : vals) EXPECT_EQ(v, K.from_rational(legendre(-2, p)));
    EXPECT_FALSE(char_fit(K, vals, 7, 2));
    auto fit = char_fit(K, vals, 8, 2);
    ASSERT_TRUE(fit);
    EXPECT_EQ(fit->modulus, 8);
    EXPECT_TRUE(same_dirichlet(K, *fit, kronecker_character(K, -8)));
}

TEST(CharFit, RejectsNonRootsAndFlagsAmbiguity) {
    auto K = gaussian();
    try {
        char_fit(K, {{3, K.from_rational(2)}}, 10, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotRootOfUnity);
    }
    try {
        char_fit(K, {{3, fe({0, 1})}}, 10, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotRootOfUnity);
    }
    // 421 = 1 mod 420, so moduli up to 7 fail; mod 8 it leaves the value on -1 free
    try {
        char_fit(K, {{421, K.from_rational(-1)}}, 10, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Ambiguous);
    }
}

TEST(CharFit, RoundTripRecoversEveryCharacter) {
    auto places = primes_to(200);
    for (const auto& K : {gaussian(), eisenstein()}) {
        auto mu = roots_of_unity(K);
        for (long N = 1; N <= 30; ++N)
            for (const auto& chi : all_characters(K, N)) {
                std::map<long, FieldElement> vals;
                for (long p : places)
                    if (std::gcd(p, N) == 1) vals[p] = char_eval(K, chi, p);
                auto fit = char_fit(K, vals, 30, mu.order);
                ASSERT_TRUE(fit) << N;
                EXPECT_TRUE(same_values(K, *fit, chi, places));
                EXPECT_EQ(fit->modulus, conductor(K, chi));
            }
    }
}
