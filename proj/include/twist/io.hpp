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

// JSON encodings shared by every module. Rationals travel as "num/den" strings.

#ifndef TWIST_IO_HPP
#define TWIST_IO_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twist/characters.hpp"
#include "twist/number_field.hpp"

namespace twist {

using Json = nlohmann::ordered_json;

namespace io {

[[noreturn]] inline void schema(const std::string& what) { throw Error(Errc::SchemaError, what); }

inline const Json& member(const Json& j, const char* key) {
    if (!j.is_object()) schema(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) schema(std::string("missing key '") + key + "'");
    return *it;
}

inline Rational rational_from(const Json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(j.dump()));
    schema("rational must be a \"num/den\" string, got " + j.dump());
}

inline Json to_json(const Rational& r) { return r.str(); }

inline std::vector<Rational> rationals_from(const Json& j) {
    if (!j.is_array()) schema("expected an array of rationals, got " + j.dump());
    std::vector<Rational> out;
    for (const auto& x : j) out.push_back(rational_from(x));
    return out;
}

inline Json to_json(const FieldElement& x) {
    Json a = Json::array();
    for (const auto& c : x.coords()) a.push_back(c.str());
    return a;
}

/// Coordinates; a vector wrapped in one extra list is accepted too.
inline FieldElement element_from(const Json& j, const NumberField& K) {
    const Json* v = &j;
    if (j.is_array() && j.size() == 1 && j[0].is_array()) v = &j[0];
    FieldElement x(rationals_from(*v));
    K.check_element(x);
    return x;
}

inline Json to_json(const RationalPolynomial& f) {
    Json a = Json::array();
    for (const auto& c : f.coefficients()) a.push_back(c.str());
    return a;
}

inline Json to_json(const NumberField& K) {
    Json j;
    j["min_poly"] = to_json(K.min_poly());
    Json imgs = Json::array();
    for (const auto& img : K.aut_images()) imgs.push_back(to_json(img));
    j["aut_images"] = imgs;
    return j;
}

inline NumberField field_from(const Json& j) {
    auto phi = RationalPolynomial(rationals_from(member(j, "min_poly")));
    const Json& imgs = member(j, "aut_images");
    if (!imgs.is_array()) schema("aut_images must be an array");
    std::vector<FieldElement> images;
    for (const auto& img : imgs) {
        FieldElement x(rationals_from(img));
        if (static_cast<int>(x.size()) != phi.degree())
            throw Error(Errc::CoefficientDimensionMismatch, "automorphism image " + x.str() + " has wrong length");
        images.push_back(std::move(x));
    }
    return NumberField::make(std::move(phi), std::move(images));
}

inline Json to_json(const Subgroup& S) { return S.members; }

inline Json to_json(const SubfieldDescriptor& D) {
    Json j;
    j["degree"] = D.degree;
    j["subgroup"] = to_json(D.subgroup);
    j["primitive_element"] = to_json(D.primitive_element);
    j["min_poly"] = to_json(D.min_poly);
    j["min_poly_text"] = D.min_poly.str();
    return j;
}

inline Json to_json(const Character& c) {
    Json j;
    if (c.is_dirichlet()) {
        j["kind"] = "dirichlet";
        j["modulus"] = c.modulus;
        Json v = Json::object();
        for (std::size_t i = 0; i < c.generator_values.size(); ++i)
            v[std::to_string(c.units->generators[i])] = to_json(c.generator_values[i]);
        j["values_on_generators"] = v;
    } else {
        j["kind"] = "table";
        Json v = Json::object();
        for (const auto& [p, x] : c.table) v[std::to_string(p)] = to_json(x);
        j["values"] = v;
    }
    j["order"] = c.order;
    return j;
}

inline long place_from(const std::string& key) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(key, &used);
    } catch (const std::exception&) {
        schema("place label '" + key + "' is not an integer");
    }
    if (used != key.size() || v <= 0) schema("place label '" + key + "' is not a positive integer");
    return v;
}

inline Character character_from(const Json& j, const NumberField& K) {
    if (j.is_string() && j.get<std::string>() == "trivial") return trivial_character(K);
    const std::string kind = member(j, "kind").get<std::string>();
    if (kind == "dirichlet") {
        const Json& mj = member(j, "modulus");
        if (!mj.is_number_integer() || mj.get<long>() < 1) schema("modulus must be a positive integer");
        const long N = mj.get<long>();
        auto G = unit_group(N);
        const Json& vals = member(j, "values_on_generators");
        if (!vals.is_object()) schema("values_on_generators must be an object");
        std::vector<FieldElement> gv;
        for (long g : G->generators) {
            auto it = vals.find(std::to_string(g));
            if (it == vals.end()) schema("no value for generator " + std::to_string(g) + " mod " + std::to_string(N));
            gv.push_back(element_from(*it, K));
        }
        if (vals.size() != gv.size()) schema("values_on_generators has keys that are not generators mod " + std::to_string(N));
        return dirichlet_character(K, N, std::move(gv));
    }
    if (kind == "table") {
        const Json& vals = member(j, "values");
        if (!vals.is_object()) schema("values must be an object");
        std::map<long, FieldElement> t;
        for (auto it = vals.begin(); it != vals.end(); ++it) t.emplace(place_from(it.key()), element_from(it.value(), K));
        return table_character(K, std::move(t));
    }
    schema("unknown character kind '" + kind + "'");
}

/// Strict parse: repeated keys are rejected (DuplicatePlace inside "coefficients").
inline Json parse_text(const std::string& text, const std::string& origin) {
    struct Frame {
        std::string parent;
        std::set<std::string> keys;
    };
    std::vector<Frame> stack;
    std::string last_key;
    auto cb = [&](int, Json::parse_event_t ev, Json& parsed) {
        switch (ev) {
            case Json::parse_event_t::object_start: stack.push_back({last_key, {}}); break;
            case Json::parse_event_t::object_end: stack.pop_back(); break;
            case Json::parse_event_t::key: {
                last_key = parsed.get<std::string>();
                if (!stack.back().keys.insert(last_key).second) {
                    if (stack.back().parent == "coefficients")
                        throw Error(Errc::DuplicatePlace, origin + ": place " + last_key + " appears twice");
                    schema(origin + ": duplicate key '" + last_key + "'");
                }
                break;
            }
            default: break;
        }
        return true;
    };
    try {
        return Json::parse(text, cb);
    } catch (const Json::parse_error& e) {
        schema(origin + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json read_json(const std::string& path) { return parse_text(read_file(path), path); }

}  // namespace io
}  // namespace twist

#endif
