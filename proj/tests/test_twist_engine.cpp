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

#include "support/planted.hpp"
#include "twist/twist_engine.hpp"

using namespace twist;
using namespace twist::testing;

namespace {

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

std::vector<int> auts(const std::vector<ExtraTwist>& ts) {
    std::vector<int> out;
    for (const auto& t : ts) out.push_back(t.aut_index);
    return out;
}

/// Direct re-check of the defining relation at every place <= B.
bool relation_holds(const EigenSystem& s, const ExtraTwist& t, long B) {
    const NumberField& K = s.field;
    for (long v : places_up_to(s, B)) {
        const auto& d = s.coeffs.at(v);
        const FieldElement& b = d.b ? *d.b : d.a;
        FieldElement chi = char_eval(K, t.character, v);
        if (t.kind == TwistKind::inner) {
            if (K.apply(t.aut_index, d.a) != K.mul(chi, d.a)) return false;
            if (s.n == 3 && K.apply(t.aut_index, b) != K.mul(K.inv(chi), b)) return false;
        } else {
            if (K.apply(t.aut_index, d.a) != K.mul(chi, b)) return false;
            if (K.apply(t.aut_index, b) != K.mul(K.inv(chi), d.a)) return false;
        }
    }
    return true;
}

}  // namespace

TEST(FindInner, IdentityAlwaysPresent) {
    for (const auto& f : all_fixtures(3)) {
        auto in = find_inner(f.system);
        ASSERT_FALSE(in.empty()) << f.name;
        EXPECT_EQ(in[0].aut_index, 0);
        EXPECT_TRUE(is_trivial(f.system.field, in[0].character));
        EXPECT_EQ(in[0].verified_bound, 200);
    }
}

TEST(VanTop, DetectionAssemblyFields) {
    auto f = vantop_fixture();
    const auto& K = f.system.field;
    auto in = find_inner(f.system);
    auto out = find_outer(f.system);
    EXPECT_EQ(auts(in), std::vector<int>{0});
    ASSERT_EQ(auts(out), std::vector<int>{1});
    EXPECT_TRUE(is_trivial(K, out[0].character));
    auto G = assemble_group(in, out, K);
    EXPECT_EQ(G.full_subgroup.size(), 2u);
    EXPECT_EQ(G.inner_subgroup.size(), 1u);
    auto ff = fixed_fields(G, K);
    EXPECT_EQ(ff.F.degree, 1);
    EXPECT_EQ(ff.F.min_poly, RationalPolynomial({-1, 1}));
    EXPECT_EQ(ff.F_inn.degree, 2);
    auto lc = lemma_cent_check(f.system, G, 200);
    EXPECT_TRUE(lc.inner_equal);
    EXPECT_TRUE(lc.full_equal);
    EXPECT_TRUE(lc.dual_matches);
    EXPECT_FALSE(lc.insufficient_bound);
    auto v = general_type_verdict(f.system);
    EXPECT_EQ(v.verdict, Verdict::general_type);
}

TEST(FindOuter, GenericDataHasNone) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto f = trivial_fixture(seed);
        EXPECT_TRUE(find_outer(f.system).empty());
        auto G = assemble_group(find_inner(f.system), {}, f.system.field);
        auto lc = lemma_cent_check(f.system, G, 200);
        EXPECT_EQ(lc.stab_a.size(), 1u);
        EXPECT_EQ(lc.stab_a_plus_b.size(), 1u);
        EXPECT_TRUE(lc.inner_equal && lc.full_equal);
    }
}

TEST(FindOuter, DisabledForN2) { EXPECT_TRUE(find_outer(inner_quadratic_fixture().system).empty()); }

TEST(FindOuter, SelfDualWitness) {
    auto f = trivial_fixture(4);
    for (auto& [v, d] : f.system.coeffs) d.b = d.a;
    auto out = find_outer(f.system);
    ASSERT_FALSE(out.empty());
    EXPECT_EQ(out[0].aut_index, 0);
    EXPECT_TRUE(is_trivial(f.system.field, out[0].character));
    auto v = general_type_verdict(f.system);
    EXPECT_EQ(v.verdict, Verdict::essentially_self_dual);
    ASSERT_TRUE(v.self_dual.has_value());
    EXPECT_TRUE(is_trivial(f.system.field, *v.self_dual));
}

TEST(PlantedInner, QuadraticFieldRecovered) {
    auto f = inner_quadratic_fixture();
    const auto& K = f.system.field;
    auto in = find_inner(f.system);
    ASSERT_EQ(auts(in), (std::vector<int>{0, kConjI}));
    EXPECT_TRUE(same_dirichlet(K, in[1].character, kronecker_character(K, -4)));
    EXPECT_EQ(conductor(K, in[1].character), 4);
    auto G = assemble_group(in, {}, K);
    auto ff = fixed_fields(G, K);
    EXPECT_EQ(ff.F.min_poly, RationalPolynomial({-2, 0, 1}));
    EXPECT_EQ(ff.F_inn.min_poly, ff.F.min_poly);
}

TEST(PlantedInner, CubicCharacterOverEisenstein) {
    auto f = cubic_inner_fixture();
    auto in = find_inner(f.system);
    ASSERT_EQ(auts(in), (std::vector<int>{0, 1}));
    EXPECT_EQ(in[1].character.order, 3);
    EXPECT_EQ(conductor(f.system.field, in[1].character), 7);
    EXPECT_TRUE(find_outer(f.system).empty());
}

TEST(Assemble, TwoOutersComposeToInner) {
    auto f = inner_outer_fixture();
    const auto& K = f.system.field;
    auto in = find_inner(f.system);
    auto out = find_outer(f.system);
    EXPECT_EQ(auts(in), (std::vector<int>{0, kConjI}));
    EXPECT_EQ(auts(out), (std::vector<int>{kNegSqrt2, kNegBoth}));
    auto G = assemble_group(in, out, K);
    auto c = compose_twists(K, *G.find(kNegSqrt2), *G.find(kNegBoth));
    EXPECT_EQ(c.kind, TwistKind::inner);
    EXPECT_EQ(c.aut_index, kConjI);
    // dropping the inner twist leaves the outer pair unclosed
    std::vector<ExtraTwist> only_id{in[0]};
    EXPECT_EQ(code_of([&] { assemble_group(only_id, out, K); }), Errc::NotClosed);
}

TEST(Assemble, TrivialAndErrors) {
    auto f = trivial_fixture();
    const auto& K = f.system.field;
    auto in = find_inner(f.system);
    auto G = assemble_group(in, {}, K);
    EXPECT_EQ(G.full_subgroup.size(), 1u);
    auto ff = fixed_fields(G, K);
    EXPECT_EQ(ff.F.degree, 2);
    EXPECT_EQ(ff.F_inn.degree, 2);
    auto dup = in;
    dup.push_back(in[0]);
    EXPECT_EQ(code_of([&] { assemble_group(dup, {}, K); }), Errc::DuplicateAutomorphism);
    ExtraTwist outer_id = in[0];
    outer_id.kind = TwistKind::outer;
    EXPECT_EQ(code_of([&] { assemble_group(in, {outer_id}, K); }), Errc::DuplicateAutomorphism);
    EXPECT_EQ(code_of([&] { assemble_group({}, {}, K); }), Errc::NotClosed);
    // a second automorphism with a character that fails closure (chi o chi must be trivial on conj^2 = id)
    auto Kb = biquadratic();
    auto fq = inner_quadratic_fixture();
    auto inq = find_inner(fq.system);
    inq[1].character = dirichlet_character(Kb, 5, {Kb.from_rational(-1)});
    inq[1].character = char_mul(Kb, inq[1].character, kronecker_character(Kb, -4));
    EXPECT_NO_THROW(assemble_group(inq, {}, Kb));  // quadratic characters square to 1: still closed
}

TEST(TwistGroupAlgebra, AxiomsOnEveryFixture) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (const auto& f : all_fixtures(seed)) {
            const auto& K = f.system.field;
            auto a = analyze_twists(f.system);
            const auto& G = a.group;
            auto places = places_up_to(f.system, 200);
            const std::size_t idx = G.full_subgroup.size() / G.inner_subgroup.size();
            EXPECT_TRUE(idx == 1 || idx == 2) << f.name;
            for (const auto& x : G.twists) {
                EXPECT_TRUE(relation_holds(f.system, x, 200)) << f.name << " " << x.aut_index;
                auto xi = compose_twists(K, x, inverse_twist(K, x));
                EXPECT_EQ(xi.aut_index, 0);
                EXPECT_EQ(xi.kind, TwistKind::inner);
                EXPECT_TRUE(is_trivial(K, primitive(K, xi.character)) || !xi.character.is_dirichlet()) << f.name;
                for (const auto& y : G.twists) {
                    auto z = compose_twists(K, x, y);
                    const ExtraTwist* hit = G.find(z.aut_index);
                    ASSERT_NE(hit, nullptr);
                    EXPECT_EQ(z.kind, (x.kind == y.kind) ? TwistKind::inner : TwistKind::outer);
                    EXPECT_EQ(hit->kind, z.kind);
                    EXPECT_TRUE(same_character(K, hit->character, z.character, places)) << f.name;
                }
            }
        }
    }
}

TEST(LemmaCent, PlantedFixtures) {
    for (const auto& f : all_fixtures(5)) {
        auto a = analyze_twists(f.system);
        EXPECT_TRUE(a.lemma_cent.inner_equal) << f.name;
        EXPECT_TRUE(a.lemma_cent.full_equal) << f.name;
        EXPECT_TRUE(a.lemma_cent.inclusion_holds) << f.name;
        EXPECT_TRUE(a.lemma_cent.dual_matches) << f.name;
    }
}

TEST(LemmaCent, RationalDataWithMissingTwistIsFlagged) {
    auto f = trivial_fixture(6);
    const auto& K = f.system.field;
    for (auto& [v, d] : f.system.coeffs) {
        d.a = K.from_rational(d.a.coords()[0]);
        d.b = K.from_rational(d.b->coords()[1]);
    }
    auto G = assemble_group({find_inner(f.system)[0]}, {}, K);
    auto lc = lemma_cent_check(f.system, G, 200);
    EXPECT_TRUE(lc.inclusion_holds);
    EXPECT_FALSE(lc.inner_equal);
    EXPECT_TRUE(lc.insufficient_bound);
    // detection itself sees conjugation as an inner twist
    EXPECT_EQ(auts(find_inner(f.system)), (std::vector<int>{0, 1}));
}

TEST(Verdict, SelfTwistFromZeroPattern) {
    SyntheticSpec spec;
    spec.n = 2;
    spec.field = q_sqrt5();
    spec.seed = 9;
    spec.support = [](long p) { return p % 4 == 1; };
    auto s = planted_system(spec);
    auto v = general_type_verdict(s);
    EXPECT_EQ(v.verdict, Verdict::self_twist);
    ASSERT_TRUE(v.self_twist.has_value());
    EXPECT_EQ(v.self_twist->modulus, 4);
    EXPECT_FALSE(v.self_duality_checked);
    auto in = find_inner(s);
    EXPECT_FALSE(in[0].undetermined_places.empty());
}

TEST(Detection, InsufficientData) {
    auto f = vantop_fixture();
    DetectionOptions o;
    o.bound = 20;
    EXPECT_EQ(code_of([&] { find_inner(f.system, o); }), Errc::InsufficientData);
    o.min_determined = 3;
    EXPECT_NO_THROW(find_inner(f.system, o));
    auto raw = denormalize(f.system, 3);
    EXPECT_EQ(code_of([&] { find_outer(raw); }), Errc::NotNormalized);
}

TEST(Detection, MonotoneInBound) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        for (const auto& f : all_fixtures(seed)) {
            DetectionOptions lo, hi;
            lo.bound = 100;
            hi.bound = 200;
            auto a_lo = auts(find_inner(f.system, lo)), a_hi = auts(find_inner(f.system, hi));
            EXPECT_TRUE(std::includes(a_lo.begin(), a_lo.end(), a_hi.begin(), a_hi.end())) << f.name;
            auto o_lo = auts(find_outer(f.system, lo)), o_hi = auts(find_outer(f.system, hi));
            EXPECT_TRUE(std::includes(o_lo.begin(), o_lo.end(), o_hi.begin(), o_hi.end())) << f.name;
        }
    }
}

TEST(Detection, ConstructThenDetect) {
    for (std::uint64_t seed = 100; seed < 106; ++seed) {
        for (const auto& f : all_fixtures(seed)) {
            auto a = analyze_twists(f.system);
            std::string why;
            EXPECT_TRUE(matches_planted(a.group, f, &why)) << f.name << " seed " << seed << ": " << why;
            EXPECT_EQ(a.fields.F.degree, f.field_degree_F) << f.name;
        }
    }
}

TEST(Detection, Options) {
    auto f = vantop_fixture();
    DetectionOptions o;
    EXPECT_EQ(effective_n_max(f.system, o), 32);
    EXPECT_EQ(effective_order_bound(f.system, o), 3);
    auto q = inner_quadratic_fixture();
    EXPECT_EQ(effective_order_bound(q.system, o), 2);
    o.n_max = 50;
    EXPECT_EQ(effective_n_max(f.system, o), 50);
}
