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

#ifndef TWIST_EIGENSYSTEM_HPP
#define TWIST_EIGENSYSTEM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twist/characters.hpp"
#include "twist/io.hpp"
#include "twist/number_field.hpp"

namespace twist {

/// Coefficients at one place: f_v(X) = X^n - a X^(n-1) + ... ; b is the X coefficient for n = 3.
struct PlaceData {
    long norm = 0;
    FieldElement a;
    std::optional<FieldElement> b;

    friend bool operator==(const PlaceData& x, const PlaceData& y) {
        return x.norm == y.norm && x.a == y.a && x.b == y.b;
    }
};

/// |.|^m omega, or the normalized flag.
struct CentralCharacter {
    bool normalized = false;
    int m = 0;
    std::optional<Character> omega;  // empty means trivial
};

struct EigenSystem {
    int n = 2;
    NumberField field = NumberField::rationals();
    std::string base_field = "Q";
    CentralCharacter central;
    std::set<long> bad_places;
    std::map<long, PlaceData> coeffs;
    std::map<long, FieldElement> scalings;  // optional c_v with c_v^n = determinant at v

    bool normalized() const { return central.normalized; }
    bool over_q() const { return base_field == "Q"; }
    /// Order of omega, 1 when trivial or normalized.
    int omega_order() const { return central.omega ? central.omega->order : 1; }
};

namespace detail {

inline bool is_prime_power(long q, bool prime_only) {
    if (q < 2) return false;
    long p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) p = q;
    if (prime_only) return p == q;
    while (q % p == 0) q /= p;
    return q == 1;
}

inline void validate_place(const EigenSystem& s, long v, const PlaceData& d) {
    if (s.bad_places.count(v)) throw Error(Errc::DuplicatePlace, "place " + std::to_string(v) + " is listed as bad");
    if (!is_prime_power(d.norm, s.over_q()))
        throw Error(Errc::SchemaError, "norm " + std::to_string(d.norm) + " at place " + std::to_string(v) +
                                           (s.over_q() ? " is not prime" : " is not a prime power"));
    if (s.over_q() && d.norm != v)
        throw Error(Errc::SchemaError, "over Q the place label must equal its norm (" + std::to_string(v) + ")");
    s.field.check_element(d.a);
    if ((s.n == 3) != d.b.has_value())
        throw Error(Errc::SchemaError, "b must be present exactly when n = 3 (place " + std::to_string(v) + ")");
    if (d.b) s.field.check_element(*d.b);
}

/// Adds one place; an exact repeat is a compatibility spot-check, a conflicting repeat is an error.
inline void add_place(EigenSystem& s, long v, PlaceData d) {
    validate_place(s, v, d);
    auto [it, fresh] = s.coeffs.emplace(v, d);
    if (!fresh && !(it->second == d))
        throw Error(Errc::DuplicatePlace, "conflicting data supplied twice for place " + std::to_string(v));
}

}  // namespace detail

/// Parses and validates a system document.
inline EigenSystem load_system(const Json& doc) {
    try {
        EigenSystem s;
        const Json& nj = io::member(doc, "n");
        if (!nj.is_number_integer() || (nj.get<int>() != 2 && nj.get<int>() != 3)) io::schema("n must be 2 or 3");
        s.n = nj.get<int>();
        if (doc.contains("base_field")) s.base_field = doc["base_field"].get<std::string>();
        s.field = io::field_from(io::member(doc, "field"));
        const Json& cc = io::member(doc, "central_character");
        if (cc.contains("normalized") && cc["normalized"].get<bool>()) {
            s.central.normalized = true;
        } else {
            const Json& mj = io::member(cc, "m");
            if (!mj.is_number_integer()) io::schema("central_character.m must be an integer");
            s.central.m = mj.get<int>();
            if (cc.contains("omega")) {
                auto w = io::character_from(cc["omega"], s.field);
                if (!is_trivial(s.field, w)) s.central.omega = std::move(w);
            }
        }
        if (doc.contains("bad_places")) {
            for (const auto& b : doc["bad_places"]) {
                if (!b.is_number_integer() || b.get<long>() <= 0) io::schema("bad_places must hold positive integers");
                s.bad_places.insert(b.get<long>());
            }
        }
        const Json& co = io::member(doc, "coefficients");
        if (!co.is_object()) io::schema("coefficients must be an object");
        for (auto it = co.begin(); it != co.end(); ++it) {
            long v = io::place_from(it.key());
            PlaceData d;
            const Json& e = it.value();
            const Json& nm = io::member(e, "norm");
            if (!nm.is_number_integer()) io::schema("norm must be an integer");
            d.norm = nm.get<long>();
            d.a = FieldElement(io::rationals_from(io::member(e, "a")));
            if (e.contains("b")) d.b = FieldElement(io::rationals_from(e["b"]));
            if (s.coeffs.count(v)) throw Error(Errc::DuplicatePlace, "place " + std::to_string(v) + " appears twice");
            detail::add_place(s, v, std::move(d));
        }
        if (doc.contains("scalings")) {
            for (auto it = doc["scalings"].begin(); it != doc["scalings"].end(); ++it)
                s.scalings.emplace(io::place_from(it.key()), io::element_from(it.value(), s.field));
        }
        return s;
    } catch (const Json::exception& e) {
        throw Error(Errc::SchemaError, e.what());
    }
}

/// Canonical document: fixed key order, places ascending. load_system(serialize(s)) reproduces s.
inline Json serialize(const EigenSystem& s) {
    Json j;
    j["n"] = s.n;
    j["base_field"] = s.base_field;
    j["field"] = io::to_json(s.field);
    Json cc;
    if (s.central.normalized) {
        cc["normalized"] = true;
    } else {
        cc["m"] = s.central.m;
        cc["omega"] = s.central.omega ? io::to_json(*s.central.omega) : Json("trivial");
    }
    j["central_character"] = cc;
    j["bad_places"] = Json(std::vector<long>(s.bad_places.begin(), s.bad_places.end()));
    Json co = Json::object();
    for (const auto& [v, d] : s.coeffs) {
        Json e;
        e["norm"] = d.norm;
        e["a"] = io::to_json(d.a);
        if (d.b) e["b"] = io::to_json(*d.b);
        co[std::to_string(v)] = e;
    }
    j["coefficients"] = co;
    if (!s.scalings.empty()) {
        Json sc = Json::object();
        for (const auto& [v, c] : s.scalings) sc[std::to_string(v)] = io::to_json(c);
        j["scalings"] = sc;
    }
    return j;
}

/// Adds CSV rows "place,norm,a_0..a_{d-1}[,b_0..b_{d-1}]" to a system; a header row is skipped.
inline void load_coefficients_csv(EigenSystem& s, const std::string& text) {
    const std::size_t d = static_cast<std::size_t>(s.field.degree());
    const std::size_t want = 2 + d * (s.n == 3 ? 2 : 1);
    std::istringstream in(text);
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            auto b = cell.find_first_not_of(" \t\""), e = cell.find_last_not_of(" \t\"");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (row == 1 && !cells.empty() && cells[0] == "place") continue;
        if (cells.size() != want)
            throw Error(Errc::CoefficientDimensionMismatch, "CSV row " + std::to_string(row) + " has " +
                                                                std::to_string(cells.size()) + " cells, expected " +
                                                                std::to_string(want));
        PlaceData pd;
        long v = io::place_from(cells[0]);
        pd.norm = io::place_from(cells[1]);
        std::vector<Rational> a, b;
        for (std::size_t i = 0; i < d; ++i) a.push_back(Rational::parse(cells[2 + i]));
        pd.a = FieldElement(a);
        if (s.n == 3) {
            for (std::size_t i = 0; i < d; ++i) b.push_back(Rational::parse(cells[2 + d + i]));
            pd.b = FieldElement(b);
        }
        detail::add_place(s, v, std::move(pd));
    }
}

/// Determinant coefficient at v: omega(v) * norm^m.
inline FieldElement determinant_at(const EigenSystem& s, long v) {
    const PlaceData& d = s.coeffs.at(v);
    FieldElement det = s.field.from_rational(Rational(Integer(d.norm)));
    det = s.field.pow(det, s.central.m);
    if (s.central.omega) det = s.field.mul(det, char_eval(s.field, *s.central.omega, v));
    return det;
}

/// Rescales roots so the characteristic polynomial has constant term (-1)^n.
inline EigenSystem normalize(const EigenSystem& s) {
    if (s.normalized()) return s;
    const NumberField& K = s.field;
    const bool need_scalings = (s.central.m % s.n != 0) || s.central.omega.has_value();
    if (need_scalings) {
        for (const auto& [v, d] : s.coeffs)
            if (!s.scalings.count(v)) {
                if (s.central.m % s.n != 0)
                    throw Error(Errc::NotDivisible, std::to_string(s.n) + " does not divide m = " + std::to_string(s.central.m) +
                                                        " and no scaling is given at " + std::to_string(v));
                throw Error(Errc::NontrivialNebentypus, "omega is nontrivial and no scaling is given at " + std::to_string(v));
            }
    }
    EigenSystem out = s;
    out.central = CentralCharacter{true, 0, std::nullopt};
    out.scalings.clear();
    for (auto& [v, d] : out.coeffs) {
        FieldElement c;
        auto it = s.scalings.find(v);
        if (it != s.scalings.end()) {
            c = it->second;
            if (K.pow(c, s.n) != determinant_at(s, v))
                throw Error(Errc::InvalidArgument, "scaling at " + std::to_string(v) + " does not have c^n = determinant");
        } else {
            Integer q = d.norm;
            Integer qk;
            mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(s.central.m / s.n));
            c = K.from_rational(Rational(qk));
        }
        FieldElement ci = K.inv(c);
        d.a = K.mul(d.a, ci);
        if (d.b) d.b = K.mul(*d.b, K.mul(ci, ci));
    }
    return out;
}

/// Coefficients of the normalized characteristic polynomial at v, ascending: [(-1)^n, ..., -a, 1].
inline std::vector<FieldElement> char_poly(const EigenSystem& s, long v) {
    const NumberField& K = s.field;
    const PlaceData& d = s.coeffs.at(v);
    if (!s.normalized()) {
        FieldElement det = determinant_at(s, v);
        if (s.n == 2) return {det, K.neg(d.a), K.one()};
        return {K.neg(det), *d.b, K.neg(d.a), K.one()};
    }
    if (s.n == 2) return {K.one(), K.neg(d.a), K.one()};
    return {K.from_rational(-1), *d.b, K.neg(d.a), K.one()};
}

/// The dual system: a and b swapped at every place (n = 3); n = 2 is returned as is.
inline EigenSystem dualize(const EigenSystem& s) {
    if (!s.normalized()) throw Error(Errc::NotNormalized, "dualize needs a normalized system");
    EigenSystem out = s;
    if (s.n == 3)
        for (auto& [v, d] : out.coeffs) std::swap(d.a, *d.b);
    return out;
}

/// Coefficient-wise Galois conjugate ^s.
inline EigenSystem conjugate_system(const EigenSystem& s, int aut_index) {
    EigenSystem out = s;
    for (auto& [v, d] : out.coeffs) {
        d.a = s.field.apply(aut_index, d.a);
        if (d.b) d.b = s.field.apply(aut_index, *d.b);
    }
    return out;
}

}  // namespace twist

#endif
