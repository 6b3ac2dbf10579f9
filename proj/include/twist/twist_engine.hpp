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

// Extra-twist detection from coefficient data, group assembly, fixed fields
// and the consistency checks that tie Gamma to the fields generated by a_v.

#ifndef TWIST_TWIST_ENGINE_HPP
#define TWIST_TWIST_ENGINE_HPP

#include <future>
#include <optional>
#include <string>
#include <vector>

#include "twist/characters.hpp"
#include "twist/eigensystem.hpp"

namespace twist {

enum class TwistKind { inner, outer };

inline const char* kind_name(TwistKind k) { return k == TwistKind::inner ? "inner" : "outer"; }

struct ExtraTwist {
    TwistKind kind = TwistKind::inner;
    int aut_index = 0;
    Character character;
    long verified_bound = 0;
    std::vector<long> undetermined_places;
};

struct DetectionOptions {
    long bound = 200;        // B: places of norm <= B are used
    long n_max = 0;          // 0: 16 * product of bad-place norms
    int min_determined = 10;
    int order_bound = 0;     // 0: derived from the system
    int default_order_bound = 24;
};

struct TwistGroup {
    std::vector<ExtraTwist> twists;  // sorted by aut_index, identity first
    Subgroup inner_subgroup;
    Subgroup full_subgroup;
    long bound = 0;

    const ExtraTwist* find(int aut_index) const {
        for (const auto& t : twists)
            if (t.aut_index == aut_index) return &t;
        return nullptr;
    }
    bool has_outer() const { return inner_subgroup.size() != full_subgroup.size(); }
};

/// Conductor search limit: the configured value or 16 times the product of bad norms.
inline long effective_n_max(const EigenSystem& s, const DetectionOptions& o) {
    if (o.n_max > 0) return o.n_max;
    long N = 16;
    for (long v : s.bad_places) N *= v;
    return N;
}

/// n for normalized systems; n * ord(omega) for raw ones (omega trivial counts as supplied).
inline int effective_order_bound(const EigenSystem& s, const DetectionOptions& o) {
    if (o.order_bound > 0) return o.order_bound;
    if (s.normalized()) return s.n;
    if (s.n == 2) return s.n * s.omega_order();
    return o.default_order_bound;
}

/// Places used for detection: norm <= B, ascending.
inline std::vector<long> places_up_to(const EigenSystem& s, long B) {
    std::vector<long> out;
    for (const auto& [v, d] : s.coeffs)
        if (d.norm <= B) out.push_back(v);
    return out;
}

namespace detail {

inline const FieldElement& b_of(const EigenSystem& s, const PlaceData& d) { return (s.n == 3 && d.b) ? *d.b : d.a; }

inline void require_detectable(const EigenSystem& s) {
    if (s.n == 3 && !s.normalized()) throw Error(Errc::NotNormalized, "n = 3 detection needs a normalized system");
}

inline std::size_t determined_count(const EigenSystem& s, const std::vector<long>& places) {
    std::size_t c = 0;
    for (long v : places) {
        const auto& d = s.coeffs.at(v);
        if (!d.a.is_zero() || !b_of(s, d).is_zero()) ++c;
    }
    return c;
}

inline void require_data(const EigenSystem& s, const std::vector<long>& places, const DetectionOptions& o) {
    auto c = determined_count(s, places);
    if (c < static_cast<std::size_t>(o.min_determined))
        throw Error(Errc::InsufficientData, std::to_string(c) + " determined places below the bound, at least " +
                                                std::to_string(o.min_determined) + " required");
}

/// Ratios chi(v) forced by the relation of the given kind under automorphism s, or nullopt when the relation fails.
inline std::optional<std::map<long, FieldElement>> forced_values(const EigenSystem& s, int aut, TwistKind kind,
                                                                std::vector<long> places, std::vector<long>& undetermined) {
    const NumberField& K = s.field;
    std::map<long, FieldElement> vals;
    undetermined.clear();
    for (long v : places) {
        const PlaceData& d = s.coeffs.at(v);
        const FieldElement& a = d.a;
        const FieldElement& b = b_of(s, d);
        FieldElement sa = K.apply(aut, a), sb = K.apply(aut, b);
        std::optional<FieldElement> chi;
        if (kind == TwistKind::inner) {
            // s(a) = chi a, s(b) = chi^-1 b
            if (s.n == 2) {
                if (a.is_zero()) {
                    undetermined.push_back(v);
                    continue;
                }
                chi = K.div(sa, a);
            } else {
                if (a.is_zero() && b.is_zero()) {
                    undetermined.push_back(v);
                    continue;
                }
                if (!a.is_zero()) chi = K.div(sa, a);
                if (!b.is_zero()) {
                    if (sb.is_zero()) return std::nullopt;
                    FieldElement c2 = K.div(b, sb);
                    if (chi && *chi != c2) return std::nullopt;
                    chi = c2;
                }
                if (a.is_zero() != sa.is_zero() || b.is_zero() != sb.is_zero()) return std::nullopt;
            }
        } else {
            // s(a) = eta b, s(b) = eta^-1 a
            if (a.is_zero() && b.is_zero()) {
                undetermined.push_back(v);
                continue;
            }
            if (b.is_zero() != sa.is_zero() || a.is_zero() != sb.is_zero()) return std::nullopt;
            if (!b.is_zero()) chi = K.div(sa, b);
            if (!sb.is_zero()) {
                FieldElement c2 = K.div(a, sb);
                if (chi && *chi != c2) return std::nullopt;
                chi = c2;
            }
        }
        vals.emplace(v, *chi);
    }
    return vals;
}

/// Fits a character to forced values; nullopt when no admissible character exists.
inline std::optional<Character> fit_forced(const EigenSystem& s, const std::map<long, FieldElement>& vals,
                                           const DetectionOptions& o) {
    const NumberField& K = s.field;
    const int bound = effective_order_bound(s, o);
    for (const auto& [v, x] : vals)
        if (!K.multiplicative_order(x, bound)) return std::nullopt;
    std::optional<Character> chi;
    if (s.over_q()) {
        chi = char_fit(K, vals, effective_n_max(s, o), bound);
    } else {
        chi = table_character(K, vals);
    }
    // determinant one forces chi^n = 1
    if (chi && s.normalized()) {
        for (const auto& [v, x] : vals)
            if (K.pow(x, s.n) != K.one()) return std::nullopt;
    }
    return chi;
}

inline std::vector<ExtraTwist> detect(const EigenSystem& s, const DetectionOptions& o, TwistKind kind) {
    require_detectable(s);
    const auto places = places_up_to(s, o.bound);
    require_data(s, places, o);
    const int d = s.field.degree();
    std::vector<std::future<std::optional<ExtraTwist>>> jobs;
    for (int aut = 0; aut < d; ++aut)
        jobs.push_back(std::async(std::launch::async, [&, aut]() -> std::optional<ExtraTwist> {
            ExtraTwist t;
            t.kind = kind;
            t.aut_index = aut;
            t.verified_bound = o.bound;
            auto vals = forced_values(s, aut, kind, places, t.undetermined_places);
            if (!vals) return std::nullopt;
            if (kind == TwistKind::inner && aut == 0) {
                t.character = trivial_character(s.field);
                return t;
            }
            auto chi = fit_forced(s, *vals, o);
            if (!chi) return std::nullopt;
            t.character = *chi;
            return t;
        }));
    std::vector<ExtraTwist> out;
    for (auto& j : jobs)
        if (auto t = j.get()) out.push_back(std::move(*t));
    return out;
}

}  // namespace detail

/// Inner twists (s, chi): s(a_v) = chi(v) a_v and, for n = 3, s(b_v) = chi(v)^-1 b_v at every place of norm <= B.
inline std::vector<ExtraTwist> find_inner(const EigenSystem& s, const DetectionOptions& o = {}) {
    return detail::detect(s, o, TwistKind::inner);
}

/// Outer twists (t, eta): t(a_v) = eta(v) b_v and t(b_v) = eta(v)^-1 a_v. Disabled for n = 2.
inline std::vector<ExtraTwist> find_outer(const EigenSystem& s, const DetectionOptions& o = {}) {
    if (s.n == 2) return {};
    return detail::detect(s, o, TwistKind::outer);
}

inline bool same_character(const NumberField& K, const Character& a, const Character& b, const std::vector<long>& places) {
    if (a.is_dirichlet() && b.is_dirichlet()) return same_dirichlet(K, a, b);
    return same_values(K, a, b, places);
}

/// (s, chi_s, e_s) o (t, chi_t, e_t) = (st, chi_s^((-1)^e_t) * ^s chi_t, e_s + e_t).
inline ExtraTwist compose_twists(const NumberField& K, const ExtraTwist& x, const ExtraTwist& y) {
    ExtraTwist r;
    r.aut_index = K.compose(x.aut_index, y.aut_index);
    r.kind = (x.kind == y.kind) ? TwistKind::inner : TwistKind::outer;
    Character left = (y.kind == TwistKind::outer) ? char_inverse(K, x.character) : x.character;
    r.character = char_mul(K, left, char_transform(K, x.aut_index, y.character));
    r.verified_bound = std::min(x.verified_bound, y.verified_bound);
    return r;
}

/// Inverse (s^-1, ^(s^-1) chi^(-/+1)) so that compose(x, inverse(x)) is the identity twist.
inline ExtraTwist inverse_twist(const NumberField& K, const ExtraTwist& x) {
    ExtraTwist r;
    r.kind = x.kind;
    r.aut_index = K.inverse(x.aut_index);
    Character c = char_transform(K, r.aut_index, x.character);
    r.character = (x.kind == TwistKind::inner) ? char_inverse(K, c) : c;
    r.verified_bound = x.verified_bound;
    return r;
}

/// Builds Gamma from detected twists and checks closure, kind parity and uniqueness per automorphism.
inline TwistGroup assemble_group(const std::vector<ExtraTwist>& inners, const std::vector<ExtraTwist>& outers,
                                 const NumberField& K, const std::vector<long>& check_places = {}) {
    TwistGroup G;
    std::vector<ExtraTwist> all;
    for (const auto& t : inners) all.push_back(t);
    for (const auto& t : outers) all.push_back(t);
    std::sort(all.begin(), all.end(), [](const ExtraTwist& a, const ExtraTwist& b) { return a.aut_index < b.aut_index; });
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].aut_index == all[i - 1].aut_index)
            throw Error(Errc::DuplicateAutomorphism, "automorphism " + std::to_string(all[i].aut_index) +
                                                         " carries two twists (" + kind_name(all[i - 1].kind) + ", " +
                                                         kind_name(all[i].kind) + ")");
    if (all.empty() || all[0].aut_index != 0 || all[0].kind != TwistKind::inner || !is_trivial(K, all[0].character))
        throw Error(Errc::NotClosed, "identity twist with trivial character is missing");
    G.twists = all;
    G.bound = all[0].verified_bound;
    for (const auto& t : all) G.bound = std::min(G.bound, t.verified_bound);
    auto lookup = [&](int a) -> const ExtraTwist* {
        for (const auto& t : all)
            if (t.aut_index == a) return &t;
        return nullptr;
    };
    for (const auto& x : all)
        for (const auto& y : all) {
            ExtraTwist z = compose_twists(K, x, y);
            const ExtraTwist* hit = lookup(z.aut_index);
            const std::string pair = "(" + std::to_string(x.aut_index) + ", " + std::to_string(y.aut_index) + ")";
            if (!hit) throw Error(Errc::NotClosed, "composition " + pair + " gives automorphism " +
                                                       std::to_string(z.aut_index) + " with no detected twist");
            if (hit->kind != z.kind)
                throw Error(Errc::NotClosed, "composition " + pair + " should be " + kind_name(z.kind) + " but automorphism " +
                                                 std::to_string(z.aut_index) + " was detected as " + kind_name(hit->kind));
            if (!same_character(K, hit->character, z.character, check_places))
                throw Error(Errc::DuplicateAutomorphism, "composition " + pair + " forces a second character on automorphism " +
                                                             std::to_string(z.aut_index));
        }
    std::vector<int> inner, full;
    for (const auto& t : all) {
        full.push_back(t.aut_index);
        if (t.kind == TwistKind::inner) inner.push_back(t.aut_index);
    }
    G.full_subgroup = K.subgroup(full);
    G.inner_subgroup = K.subgroup(inner);
    std::size_t idx = G.full_subgroup.size() / G.inner_subgroup.size();
    if (idx != 1 && idx != 2) throw Error(Errc::NotClosed, "inner subgroup has index " + std::to_string(idx));
    return G;
}

struct FixedFields {
    SubfieldDescriptor F;
    SubfieldDescriptor F_inn;
};

inline FixedFields fixed_fields(const TwistGroup& G, const NumberField& K) {
    return {fixed_field(K, G.full_subgroup), fixed_field(K, G.inner_subgroup)};
}

struct LemmaCentReport {
    long bound = 0;
    std::vector<long> kernel_places;  // places in the common kernel of all twist characters
    Subgroup stab_a;
    Subgroup stab_a_plus_b;
    Subgroup dual_set;  // {g : g(a_v) = b_v on kernel places}, expected Gamma \ Gamma^inn
    bool inner_equal = false;
    bool full_equal = false;
    bool inclusion_holds = false;
    bool dual_matches = false;
    bool insufficient_bound = false;  // strict inclusion: more data or a missed twist
};

/// Compares Gamma^inn and Gamma with the stabilizers of {a_v} and {a_v + b_v} over kernel places.
inline LemmaCentReport lemma_cent_check(const EigenSystem& s, const TwistGroup& G, long B) {
    const NumberField& K = s.field;
    LemmaCentReport r;
    r.bound = B;
    std::vector<FieldElement> as, abs;
    for (long v : places_up_to(s, B)) {
        bool in_kernel = true;
        for (const auto& t : G.twists) {
            if (!t.character.is_dirichlet() && !t.character.table.count(v)) continue;
            if (t.character.is_dirichlet() && std::gcd(v, t.character.modulus) != 1) {
                in_kernel = false;
                break;
            }
            if (char_eval(K, t.character, v) != K.one()) {
                in_kernel = false;
                break;
            }
        }
        if (!in_kernel) continue;
        r.kernel_places.push_back(v);
        const auto& d = s.coeffs.at(v);
        as.push_back(d.a);
        abs.push_back(K.add(d.a, detail::b_of(s, d)));
    }
    r.stab_a = stabilizer(K, as);
    r.stab_a_plus_b = stabilizer(K, abs);
    r.inner_equal = r.stab_a == G.inner_subgroup;
    r.full_equal = r.stab_a_plus_b == G.full_subgroup;
    r.inclusion_holds = G.inner_subgroup.is_subset_of(r.stab_a) && G.full_subgroup.is_subset_of(r.stab_a_plus_b);
    r.insufficient_bound = r.inclusion_holds && !(r.inner_equal && r.full_equal);
    // dual identity: g(a_v) = b_v exactly for the outer twists
    for (int g = 0; g < K.degree(); ++g) {
        bool all = true;
        for (long v : r.kernel_places) {
            const auto& d = s.coeffs.at(v);
            if (K.apply(g, d.a) != detail::b_of(s, d)) {
                all = false;
                break;
            }
        }
        if (all && s.n == 3) r.dual_set.members.push_back(g);
    }
    std::vector<int> outer;
    for (int g : G.full_subgroup.members)
        if (!G.inner_subgroup.contains(g)) outer.push_back(g);
    r.dual_matches = (s.n == 2) || r.dual_set.members == outer;
    return r;
}

enum class Verdict { general_type, self_twist, essentially_self_dual };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::general_type: return "general-type";
        case Verdict::self_twist: return "self-twist";
        case Verdict::essentially_self_dual: return "essentially-self-dual";
    }
    return "?";
}

struct GeneralTypeResult {
    Verdict verdict = Verdict::general_type;
    std::optional<Character> self_twist;        // nontrivial chi with pi = pi (x) chi on the data
    std::optional<Character> self_dual;         // eta with pi = pi^dual (x) eta on the data
    bool self_duality_checked = true;           // false for n = 2
    long bound = 0;
};

namespace detail {

/// Smallest-modulus nontrivial Dirichlet character equal to 1 on determined places and not 1 on some undetermined one.
inline std::optional<Character> find_self_twist(const EigenSystem& s, const std::vector<long>& places,
                                                const DetectionOptions& o) {
    const NumberField& K = s.field;
    std::vector<long> det, undet;
    for (long v : places) {
        const auto& d = s.coeffs.at(v);
        (d.a.is_zero() && b_of(s, d).is_zero() ? undet : det).push_back(v);
    }
    if (undet.empty() || !s.over_q()) return std::nullopt;
    const int bound = effective_order_bound(s, o);
    const RootsOfUnity mu = roots_of_unity(K);
    const int w = mu.order;
    const long n_max = effective_n_max(s, o);
    for (long N = 2; N <= n_max; ++N) {
        if (std::any_of(places.begin(), places.end(), [&](long v) { return std::gcd(v, N) != 1; })) continue;
        auto G = unit_group(N);
        const std::size_t r = G->generators.size();
        std::vector<int> steps, counts;
        for (long ord : G->orders) {
            int g = std::gcd(w, static_cast<int>(ord));
            steps.push_back(w / g);
            counts.push_back(g);
        }
        std::vector<int> k(r, 0);
        auto exponent_at = [&](long v) {
            const auto& e = G->exponents(v);
            long t = 0;
            for (std::size_t j = 0; j < r; ++j) t += static_cast<long>(e[j]) * k[j] * steps[j];
            return t % w;
        };
        while (true) {
            bool ok = std::all_of(det.begin(), det.end(), [&](long v) { return exponent_at(v) == 0; });
            bool moves = ok && std::any_of(undet.begin(), undet.end(), [&](long v) { return exponent_at(v) != 0; });
            int ord = 1;
            for (std::size_t j = 0; j < r; ++j) ord = std::lcm(ord, w / std::gcd(w, (k[j] * steps[j]) % w));
            if (moves && ord <= bound && (!s.normalized() || s.n % ord == 0)) {
                std::vector<FieldElement> vals;
                for (std::size_t j = 0; j < r; ++j) vals.push_back(K.pow(mu.generator, (k[j] * steps[j]) % w));
                return dirichlet_character(K, N, std::move(vals));
            }
            std::size_t pos = 0;
            while (pos < r && ++k[pos] == counts[pos]) k[pos++] = 0;
            if (pos == r) break;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Self-twist if some nontrivial chi has (id, chi) as inner twist; essentially self-dual if (id, eta) is an outer twist.
inline GeneralTypeResult general_type_verdict(const EigenSystem& s, const DetectionOptions& o = {}) {
    detail::require_detectable(s);
    const auto places = places_up_to(s, o.bound);
    detail::require_data(s, places, o);
    GeneralTypeResult r;
    r.bound = o.bound;
    r.self_twist = detail::find_self_twist(s, places, o);
    if (s.n == 3) {
        std::vector<long> undet;
        if (auto vals = detail::forced_values(s, 0, TwistKind::outer, places, undet)) r.self_dual = detail::fit_forced(s, *vals, o);
    } else {
        r.self_duality_checked = false;
    }
    if (r.self_twist) r.verdict = Verdict::self_twist;
    else if (r.self_dual) r.verdict = Verdict::essentially_self_dual;
    return r;
}

/// Detection, assembly and fixed fields in one call.
struct TwistAnalysis {
    TwistGroup group;
    FixedFields fields;
    LemmaCentReport lemma_cent;
};

inline TwistAnalysis analyze_twists(const EigenSystem& s, const DetectionOptions& o = {}) {
    TwistAnalysis a;
    auto inners = find_inner(s, o);
    auto outers = find_outer(s, o);
    a.group = assemble_group(inners, outers, s.field, places_up_to(s, o.bound));
    a.fields = fixed_fields(a.group, s.field);
    a.lemma_cent = lemma_cent_check(s, a.group, o.bound);
    return a;
}

}  // namespace twist

#endif
