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

// Per-prime inner/outer classification of the twisted form and the image report.

#ifndef TWIST_IMAGE_HPP
#define TWIST_IMAGE_HPP

#include <future>
#include <string>
#include <vector>

#include "twist/io.hpp"
#include "twist/twist_engine.hpp"

namespace twist {

enum class FormKind { inner_split, outer_unitary };

inline const char* form_name(FormKind k) { return k == FormKind::inner_split ? "inner-split" : "outer-unitary"; }

struct PlaceVerdict {
    int place = 0;            // double-coset representative
    int residue_degree = 0;   // of the place of F
    int places_in_F_inn = 1;  // places of F_inn above it (2 = split)
    FormKind form = FormKind::inner_split;
    std::string group_label;
    std::string image_type;
    bool split_caveat = false;  // inner form certified only as split over E_p
};

inline std::string group_label(FormKind k, int n) {
    const std::string N = std::to_string(n);
    return k == FormKind::inner_split ? "SL_" + N + " (split)" : "SU_" + N + " over quadratic extension";
}

inline std::string image_type(FormKind k, int n) {
    const std::string N = std::to_string(n);
    return k == FormKind::inner_split ? "GL_" + N + "-type" : "SU_" + N + ".G_m-type";
}

namespace detail {

/// All group elements of a place (union of its right cosets S c).
inline std::vector<int> place_elements(const NumberField& K, const Subgroup& S, const Place& w) {
    std::vector<int> out;
    for (int c : w.cosets)
        for (int s : S.members) out.push_back(K.compose(s, c));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Places w of F above p with the form of H at w: inner-split when Gamma = Gamma^inn or w splits in F_inn.
inline std::vector<PlaceVerdict> classify_place(const NumberField& K, const TwistGroup& G, int n, std::uint64_t p) {
    const Frobenius fr = frobenius_at(K, p);
    const auto places_F = place_decomposition_with(K, G.full_subgroup, fr.index);
    const auto places_inn = place_decomposition_with(K, G.inner_subgroup, fr.index);
    std::vector<PlaceVerdict> out;
    for (const auto& w : places_F) {
        PlaceVerdict v;
        v.place = w.representative;
        v.residue_degree = w.residue_degree;
        auto elems = detail::place_elements(K, G.full_subgroup, w);
        int count = 0;
        for (const auto& u : places_inn)
            if (std::binary_search(elems.begin(), elems.end(), u.representative)) ++count;
        v.places_in_F_inn = count;
        v.form = (!G.has_outer() || count == 2) ? FormKind::inner_split : FormKind::outer_unitary;
        v.group_label = group_label(v.form, n);
        v.image_type = image_type(v.form, n);
        v.split_caveat = v.form == FormKind::inner_split;
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const PlaceVerdict& a, const PlaceVerdict& b) { return a.place < b.place; });
    return out;
}

struct PrimeVerdict {
    std::uint64_t p = 0;
    int frobenius = 0;
    bool frobenius_ambiguous = false;
    std::vector<PlaceVerdict> places;
};

struct Exclusion {
    std::uint64_t p = 0;
    std::string reason;
};

struct ImageReport {
    GeneralTypeResult verdict;
    std::size_t gamma_order = 1;
    std::size_t gamma_inn_order = 1;
    FixedFields fields;
    int n = 2;
    std::vector<PrimeVerdict> primes;
    std::vector<Exclusion> excluded;
    int predicted_dimension = 0;
    int mt_upper_bound_dimension = 0;
    long bound = 0;
};

/// [F:Q](n^2 - 1) + 1
inline int predicted_dimension(int degree_F, int n) { return degree_F * (n * n - 1) + 1; }

/// Good unramified primes in the list get verdicts; bad places and ramified primes are listed as exclusions.
inline ImageReport image_report(const EigenSystem& s, const TwistGroup& G, const std::vector<std::uint64_t>& primes,
                                const DetectionOptions& o = {}) {
    ImageReport r;
    r.n = s.n;
    r.bound = o.bound;
    r.verdict = general_type_verdict(s, o);
    r.gamma_order = G.full_subgroup.size();
    r.gamma_inn_order = G.inner_subgroup.size();
    r.fields = fixed_fields(G, s.field);
    r.predicted_dimension = predicted_dimension(r.fields.F.degree, s.n);
    r.mt_upper_bound_dimension = r.predicted_dimension;
    std::vector<std::uint64_t> ps = primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<std::uint64_t> good;
    for (auto p : ps) {
        if (!is_prime(p)) r.excluded.push_back({p, "not prime"});
        else if (s.bad_places.count(static_cast<long>(p))) r.excluded.push_back({p, "bad place"});
        else if (s.field.is_ramified(p)) r.excluded.push_back({p, "ramified in E"});
        else good.push_back(p);
    }
    std::vector<std::future<PrimeVerdict>> jobs;
    for (auto p : good)
        jobs.push_back(std::async(std::launch::async, [&, p] {
            PrimeVerdict v;
            v.p = p;
            auto fr = frobenius_at(s.field, p);
            v.frobenius = fr.index;
            v.frobenius_ambiguous = fr.ambiguous;
            v.places = classify_place(s.field, G, s.n, p);
            return v;
        }));
    for (auto& j : jobs) r.primes.push_back(j.get());
    return r;
}

// ---------------------------------------------------------------- JSON

namespace io {

inline Json to_json(const ExtraTwist& t) {
    Json j;
    j["kind"] = kind_name(t.kind);
    j["aut_index"] = t.aut_index;
    j["character"] = to_json(t.character);
    j["verified_bound"] = t.verified_bound;
    j["undetermined_places"] = t.undetermined_places;
    return j;
}

inline Json to_json(const LemmaCentReport& r) {
    Json j;
    j["bound"] = r.bound;
    j["kernel_places"] = r.kernel_places.size();
    j["stabilizer_a"] = to_json(r.stab_a);
    j["stabilizer_a_plus_b"] = to_json(r.stab_a_plus_b);
    j["dual_set"] = to_json(r.dual_set);
    j["inner_equal"] = r.inner_equal;
    j["full_equal"] = r.full_equal;
    j["inclusion_holds"] = r.inclusion_holds;
    j["dual_matches"] = r.dual_matches;
    j["insufficient_bound"] = r.insufficient_bound;
    return j;
}

inline Json to_json(const TwistAnalysis& a) {
    Json j;
    Json ts = Json::array();
    for (const auto& t : a.group.twists) ts.push_back(to_json(t));
    j["twists"] = ts;
    j["gamma"] = to_json(a.group.full_subgroup);
    j["gamma_inn"] = to_json(a.group.inner_subgroup);
    j["F"] = to_json(a.fields.F);
    j["F_inn"] = to_json(a.fields.F_inn);
    j["lemma_cent"] = to_json(a.lemma_cent);
    return j;
}

inline Json to_json(const GeneralTypeResult& v) {
    Json j;
    j["verdict"] = verdict_name(v.verdict);
    j["self_twist"] = v.self_twist ? to_json(*v.self_twist) : Json(nullptr);
    j["self_dual"] = v.self_dual ? to_json(*v.self_dual) : Json(nullptr);
    j["self_duality_checked"] = v.self_duality_checked;
    j["bound"] = v.bound;
    return j;
}

inline Json to_json(const PlaceVerdict& v) {
    Json j;
    j["place"] = v.place;
    j["residue_degree"] = v.residue_degree;
    j["places_in_F_inn"] = v.places_in_F_inn;
    j["form"] = form_name(v.form);
    j["group_label"] = v.group_label;
    j["image_type"] = v.image_type;
    j["split_caveat"] = v.split_caveat;
    return j;
}

inline Json to_json(const ImageReport& r) {
    Json j;
    j["n"] = r.n;
    j["bound"] = r.bound;
    j["general_type"] = to_json(r.verdict);
    j["gamma_order"] = r.gamma_order;
    j["gamma_inn_order"] = r.gamma_inn_order;
    j["F"] = to_json(r.fields.F);
    j["F_inn"] = to_json(r.fields.F_inn);
    Json ps = Json::array();
    for (const auto& p : r.primes) {
        Json e;
        e["p"] = p.p;
        e["frobenius"] = p.frobenius;
        e["frobenius_ambiguous"] = p.frobenius_ambiguous;
        Json pl = Json::array();
        for (const auto& v : p.places) pl.push_back(to_json(v));
        e["places"] = pl;
        ps.push_back(e);
    }
    j["primes"] = ps;
    Json ex = Json::array();
    for (const auto& e : r.excluded) ex.push_back(Json{{"p", e.p}, {"reason", e.reason}});
    j["excluded"] = ex;
    j["predicted_dimension"] = r.predicted_dimension;
    j["mt_upper_bound_dimension"] = r.mt_upper_bound_dimension;
    return j;
}

}  // namespace io
}  // namespace twist

#endif
