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

// Seeded synthetic systems with a planted twist group.
//
// A random base pair (s, t) is averaged over the planted group acting by
//   inner (s, chi):  (x, y) -> (chi^-1 s(x), chi s(y))
//   outer (t, eta):  (x, y) -> (eta t(y), eta^-1 t(x))
// which makes every planted relation hold exactly at every place.

#ifndef TWIST_SYNTHETIC_HPP
#define TWIST_SYNTHETIC_HPP

#include <functional>
#include <random>

#include "twist/twist_engine.hpp"

namespace twist {

struct PlantedTwist {
    TwistKind kind = TwistKind::inner;
    int aut_index = 0;
    Character character;
};

struct SyntheticSpec {
    int n = 3;
    NumberField field = NumberField::rationals();
    std::vector<PlantedTwist> group;  // identity may be omitted
    long bound = 200;
    std::set<long> bad_places{2};
    std::uint64_t seed = 1;
    int coeff_range = 6;
    std::function<bool(long)> support;  // places outside the support get zero coefficients
};

namespace detail {

inline FieldElement random_element(const NumberField& K, std::mt19937_64& rng, int range) {
    std::uniform_int_distribution<int> dist(-range, range);
    std::vector<Rational> c;
    for (int i = 0; i < K.degree(); ++i) c.emplace_back(dist(rng));
    return FieldElement(std::move(c));
}

}  // namespace detail

/// Normalized (n = 3) or raw weight-2 style (n = 2, m = 1) system satisfying the planted relations.
inline EigenSystem planted_system(const SyntheticSpec& spec) {
    const NumberField& K = spec.field;
    std::vector<PlantedTwist> group = spec.group;
    if (std::none_of(group.begin(), group.end(), [](const PlantedTwist& t) { return t.aut_index == 0; }))
        group.insert(group.begin(), PlantedTwist{TwistKind::inner, 0, trivial_character(K)});
    EigenSystem s;
    s.n = spec.n;
    s.field = K;
    s.bad_places = spec.bad_places;
    if (s.n == 3) s.central.normalized = true;
    else s.central.m = 1;
    std::mt19937_64 rng(spec.seed);
    for (long p : primes_up_to(spec.bound)) {
        if (s.bad_places.count(p)) continue;
        FieldElement x = detail::random_element(K, rng, spec.coeff_range);
        FieldElement y = (s.n == 3) ? detail::random_element(K, rng, spec.coeff_range) : x;
        PlaceData d;
        d.norm = p;
        d.a = K.zero();
        FieldElement b = K.zero();
        if (!spec.support || spec.support(p)) {
            for (const auto& g : group) {
                FieldElement chi = char_eval(K, g.character, p);
                FieldElement ci = K.inv(chi);
                if (g.kind == TwistKind::inner) {
                    d.a = K.add(d.a, K.mul(ci, K.apply(g.aut_index, x)));
                    b = K.add(b, K.mul(chi, K.apply(g.aut_index, y)));
                } else {
                    d.a = K.add(d.a, K.mul(chi, K.apply(g.aut_index, y)));
                    b = K.add(b, K.mul(ci, K.apply(g.aut_index, x)));
                }
            }
        }
        if (s.n == 3) d.b = b;
        s.coeffs.emplace(p, std::move(d));
    }
    return s;
}

/// Raw data with central character |.|^m: a scaled by N^(m/n), b by N^(2m/n). Inverse of normalize.
inline EigenSystem denormalize(const EigenSystem& s, int m) {
    if (!s.normalized()) throw Error(Errc::InvalidArgument, "denormalize expects a normalized system");
    if (m % s.n != 0) throw Error(Errc::NotDivisible, std::to_string(s.n) + " does not divide m = " + std::to_string(m));
    EigenSystem out = s;
    out.central = CentralCharacter{false, m, std::nullopt};
    for (auto& [v, d] : out.coeffs) {
        FieldElement c = s.field.pow(s.field.from_rational(Rational(Integer(d.norm))), m / s.n);
        d.a = s.field.mul(d.a, c);
        if (d.b) d.b = s.field.mul(*d.b, s.field.mul(c, c));
    }
    return out;
}

}  // namespace twist

#endif
