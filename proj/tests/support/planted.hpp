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

// Planted-twist fixtures shared by the unit tests and the acceptance binary.

#ifndef TWIST_TESTS_SUPPORT_PLANTED_HPP
#define TWIST_TESTS_SUPPORT_PLANTED_HPP

#include <string>

#include "support/fields.hpp"
#include "twist/synthetic.hpp"

namespace twist::testing {

struct Fixture {
    std::string name;
    EigenSystem system;
    std::vector<PlantedTwist> planted;  // identity included
    int field_degree_F = 0;             // [F:Q] expected
};

inline Fixture make_fixture(std::string name, int n, NumberField K, std::vector<PlantedTwist> group, std::uint64_t seed,
                            int deg_F, std::set<long> bad = {2}) {
    SyntheticSpec spec;
    spec.n = n;
    spec.field = K;
    spec.seed = seed;
    spec.bad_places = std::move(bad);
    if (std::none_of(group.begin(), group.end(), [](const PlantedTwist& t) { return t.aut_index == 0; }))
        group.insert(group.begin(), PlantedTwist{TwistKind::inner, 0, trivial_character(K)});
    spec.group = group;
    return Fixture{std::move(name), planted_system(spec), std::move(group), deg_F};
}

/// Q(i), n = 3, one outer twist (conj, 1).
inline Fixture vantop_fixture(std::uint64_t seed = 1) {
    auto K = gaussian();
    return make_fixture("vantop", 3, K, {{TwistKind::outer, 1, trivial_character(K)}}, seed, 1);
}

/// Q(i), n = 3, nothing planted.
inline Fixture trivial_fixture(std::uint64_t seed = 1) { return make_fixture("trivial", 3, gaussian(), {}, seed, 2); }

/// Q(sqrt5), n = 2, nothing planted: F = Q(sqrt5).
inline Fixture sqrt5_fixture(std::uint64_t seed = 1) { return make_fixture("sqrt5", 2, q_sqrt5(), {}, seed, 2); }

/// Q(sqrt2, i), n = 2, inner (i -> -i, chi_-4): F = F_inn = Q(sqrt2).
inline Fixture inner_quadratic_fixture(std::uint64_t seed = 1) {
    auto K = biquadratic();
    return make_fixture("inner-quadratic", 2, K, {{TwistKind::inner, kConjI, kronecker_character(K, -4)}}, seed, 2);
}

/// Q(sqrt2, i), n = 2, all three nontrivial automorphisms inner with chi_-4, chi_8, chi_-8: F = Q.
inline Fixture klein_inner_fixture(std::uint64_t seed = 1) {
    auto K = biquadratic();
    return make_fixture("klein-inner", 2, K,
                        {{TwistKind::inner, kConjI, kronecker_character(K, -4)},
                         {TwistKind::inner, kNegSqrt2, kronecker_character(K, 8)},
                         {TwistKind::inner, kNegBoth, kronecker_character(K, -8)}},
                        seed, 1);
}

/// Q(sqrt2, i), n = 3, inner i -> -i and two outer twists, all characters trivial: F_inn = Q(sqrt2), F = Q.
inline Fixture inner_outer_fixture(std::uint64_t seed = 1) {
    auto K = biquadratic();
    auto one = trivial_character(K);
    return make_fixture("inner-outer", 3, K,
                        {{TwistKind::inner, kConjI, one}, {TwistKind::outer, kNegSqrt2, one}, {TwistKind::outer, kNegBoth, one}},
                        seed, 1);
}

/// Q(zeta3), n = 3, inner conjugation with the cubic character mod 7 sending 3 to zeta3.
inline Fixture cubic_inner_fixture(std::uint64_t seed = 1) {
    auto K = eisenstein();
    auto chi = dirichlet_character(K, 7, {fe({0, 1})});
    return make_fixture("cubic-inner", 3, K, {{TwistKind::inner, 1, chi}}, seed, 1, {7});
}

inline std::vector<Fixture> all_fixtures(std::uint64_t seed = 1) {
    return {trivial_fixture(seed),        sqrt5_fixture(seed),       vantop_fixture(seed),     inner_quadratic_fixture(seed),
            cubic_inner_fixture(seed),    klein_inner_fixture(seed), inner_outer_fixture(seed)};
}

/// Detected group equals the planted one: same automorphisms, kinds and characters.
inline bool matches_planted(const TwistGroup& G, const Fixture& f, std::string* why = nullptr) {
    const NumberField& K = f.system.field;
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (G.twists.size() != f.planted.size())
        return fail("detected " + std::to_string(G.twists.size()) + " twists, planted " + std::to_string(f.planted.size()));
    for (const auto& p : f.planted) {
        const ExtraTwist* t = G.find(p.aut_index);
        if (!t) return fail("missing automorphism " + std::to_string(p.aut_index));
        if (t->kind != p.kind) return fail("wrong kind at " + std::to_string(p.aut_index));
        if (!same_character(K, t->character, p.character, places_up_to(f.system, 200)))
            return fail("wrong character at " + std::to_string(p.aut_index));
    }
    return true;
}

}  // namespace twist::testing

#endif
