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

// LMFDB client for classical newforms: fetch, disk cache, conversion to an
// n = 2 EigenSystem and a cross-check of detected inner twists.
//
// Two endpoints are read per label:
//   /api/mf_newforms/?label=L&_format=json   level, weight, nebentypus, inner_twists
//   /api/mf_hecke_nf/?label=L&_format=json   field_poly, ap (one vector per prime), an
// The cache stores each raw body at <dir>/v1/<endpoint>/<label>.json next to a
// <label>.meta.json sidecar.

#ifndef TWIST_LMFDB_HPP
#define TWIST_LMFDB_HPP

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "twist/eigensystem.hpp"
#include "twist/io.hpp"
#include "twist/twist_engine.hpp"

namespace twist::lmfdb {

inline constexpr int kCacheVersion = 1;
inline constexpr const char* kNewformEndpoint = "mf_newforms";
inline constexpr const char* kHeckeEndpoint = "mf_hecke_nf";

/// level.weight.char_orbit.hecke_orbit, e.g. 11.2.a.a
inline bool valid_label(const std::string& label) {
    static const std::regex re(R"(^[1-9][0-9]*\.[1-9][0-9]*\.[a-z]+\.[a-z]+$)");
    return std::regex_match(label, re);
}

/// Orbit index (1-based) to letters: 1 -> a, 26 -> z, 27 -> ba.
inline std::string orbit_letters(long index) {
    if (index < 1) throw Error(Errc::InvalidArgument, "orbit index must be positive");
    long k = index - 1;
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + k % 26));
        k /= 26;
    } while (k > 0);
    return s;
}

struct RecordedTwist {
    std::string character_label;  // modulus.orbit, e.g. 3.b
    long modulus = 1;
    long orbit_index = 1;
    int parity = 1;
    int order = 1;
    long discriminant = 0;  // quadratic characters only
    int multiplicity = 1;
    bool proved = false;

    bool trivial() const { return modulus == 1; }
};

struct NewformRecord {
    std::string label;
    long level = 0;
    int weight = 0;
    std::string char_orbit_label = "a";
    long char_conductor = 1;
    int char_order = 1;
    std::optional<int> char_parity;
    RationalPolynomial hecke_field_poly;
    std::map<long, std::vector<Rational>> an_exact;  // n -> coordinates in the power basis of hecke_field_poly
    std::vector<RecordedTwist> recorded_inner_twists;
    bool is_cm = false;

    int degree() const { return hecke_field_poly.degree(); }
    std::string nebentypus_label() const { return std::to_string(level) + "." + char_orbit_label; }
};

namespace detail {

[[noreturn]] inline void drift(const std::string& what) { throw Error(Errc::SchemaDrift, what); }

inline const Json& field_of(const Json& row, const char* key) {
    if (!row.is_object() || !row.contains(key)) drift(std::string("missing field '") + key + "'");
    return row[key];
}

inline long int_of(const Json& row, const char* key) {
    const Json& v = field_of(row, key);
    if (!v.is_number_integer()) drift(std::string("field '") + key + "' is not an integer");
    return v.get<long>();
}

inline std::vector<Rational> rationals_of(const Json& v, const char* what) {
    if (!v.is_array()) drift(std::string(what) + " is not an array");
    std::vector<Rational> out;
    for (const auto& x : v) {
        if (x.is_number_integer()) out.emplace_back(Rational(x.get<long>()));
        else if (x.is_string()) {
            try {
                out.push_back(Rational::parse(x.get<std::string>()));
            } catch (const Error&) {
                drift(std::string(what) + " holds a malformed rational");
            }
        }
        else drift(std::string(what) + " holds a non-integer entry");
    }
    return out;
}

/// The single row of an API response {"data": [row]}.
inline const Json& only_row(const Json& body, const std::string& label) {
    if (!body.is_object() || !body.contains("data") || !body["data"].is_array()) drift("response has no data array");
    const Json& d = body["data"];
    if (d.empty()) throw Error(Errc::NotFound, "no newform with label " + label);
    if (d.size() != 1) drift("expected one row for " + label + ", got " + std::to_string(d.size()));
    return d[0];
}

/// Converts Hecke-ring coordinates to the power basis: beta_i = (sum_j num[i][j] x^j) / den[i].
inline std::vector<Rational> to_power_basis(const std::vector<Rational>& c, const std::vector<std::vector<Rational>>& num,
                                            const std::vector<Rational>& den) {
    std::vector<Rational> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) out[j] += c[i] * num[i][j] / den[i];
    return out;
}

/// inner_twists entries are 7-tuples [proved, multiplicity, modulus, orbit, parity, order, discriminant].
inline RecordedTwist parse_twist(const Json& t) {
    if (!t.is_array() || t.size() < 6) drift("inner_twists entry is not a tuple of length >= 6");
    for (const auto& x : t)
        if (!x.is_number_integer()) drift("inner_twists entry holds a non-integer");
    RecordedTwist r;
    r.proved = t[0].get<int>() == 1;
    r.multiplicity = t[1].get<int>();
    r.modulus = t[2].get<long>();
    r.orbit_index = t[3].get<long>();
    r.parity = t[4].get<int>();
    r.order = t[5].get<int>();
    if (t.size() > 6) r.discriminant = t[6].get<long>();
    if (r.modulus < 1 || r.order < 1 || r.multiplicity < 1) drift("inner_twists entry out of range");
    r.character_label = std::to_string(r.modulus) + "." + orbit_letters(r.orbit_index);
    return r;
}

}  // namespace detail

/// Builds a record from the two response bodies; any unexpected shape is SchemaDrift.
inline NewformRecord parse_record(const std::string& label, const Json& newform_body, const Json& hecke_body) {
    using namespace detail;
    try {
        const Json& nf = only_row(newform_body, label);
        const Json& hk = only_row(hecke_body, label);
        NewformRecord r;
        r.label = field_of(nf, "label").get<std::string>();
        if (r.label != label) drift("response is for " + r.label + ", asked for " + label);
        r.level = int_of(nf, "level");
        r.weight = static_cast<int>(int_of(nf, "weight"));
        r.char_orbit_label = field_of(nf, "char_orbit_label").get<std::string>();
        r.char_conductor = int_of(nf, "char_conductor");
        r.char_order = static_cast<int>(int_of(nf, "char_order"));
        if (nf.contains("char_parity") && nf["char_parity"].is_number_integer()) r.char_parity = nf["char_parity"].get<int>();
        if (nf.contains("is_cm") && nf["is_cm"].is_boolean()) r.is_cm = nf["is_cm"].get<bool>();
        const std::string expect = std::to_string(r.level) + "." + std::to_string(r.weight) + "." + r.char_orbit_label + ".";
        if (label.rfind(expect, 0) != 0) drift("label " + label + " disagrees with level/weight/character fields");

        const Json& it = field_of(nf, "inner_twists");
        if (!it.is_array()) drift("inner_twists is not an array");
        for (const auto& t : it) r.recorded_inner_twists.push_back(parse_twist(t));

        r.hecke_field_poly = RationalPolynomial(rationals_of(field_of(hk, "field_poly"), "field_poly"));
        const int deg = r.hecke_field_poly.degree();
        if (deg < 1) drift("field_poly has degree < 1");
        if (nf.contains("field_poly") &&
            !(RationalPolynomial(rationals_of(nf["field_poly"], "field_poly")) == r.hecke_field_poly))
            drift("field_poly differs between endpoints");
        if (hk.contains("hecke_ring_cyclotomic_generator") && hk["hecke_ring_cyclotomic_generator"].is_number_integer() &&
            hk["hecke_ring_cyclotomic_generator"].get<long>() > 0)
            drift("sparse cyclotomic coefficient encoding is not supported");

        bool power_basis = true;
        if (hk.contains("hecke_ring_power_basis") && hk["hecke_ring_power_basis"].is_boolean())
            power_basis = hk["hecke_ring_power_basis"].get<bool>();
        std::vector<std::vector<Rational>> num;
        std::vector<Rational> den;
        if (!power_basis) {
            const Json& nj = field_of(hk, "hecke_ring_numerators");
            den = rationals_of(field_of(hk, "hecke_ring_denominators"), "hecke_ring_denominators");
            if (!nj.is_array() || nj.size() != static_cast<std::size_t>(deg) || den.size() != nj.size())
                drift("hecke ring basis has the wrong size");
            for (const auto& row : nj) {
                num.push_back(rationals_of(row, "hecke_ring_numerators"));
                num.back().resize(static_cast<std::size_t>(deg));
            }
        }
        auto vec = [&](const Json& v, const char* what) {
            auto c = rationals_of(v, what);
            if (c.size() != static_cast<std::size_t>(deg))
                drift(std::string(what) + " vector of length " + std::to_string(c.size()) + " for a degree " +
                      std::to_string(deg) + " field");
            return power_basis ? c : to_power_basis(c, num, den);
        };

        const Json& ap = field_of(hk, "ap");
        if (!ap.is_array()) drift("ap is not an array");
        const auto ps = primes_up_to(20000);
        if (ap.size() > ps.size()) drift("ap list is implausibly long");
        for (std::size_t i = 0; i < ap.size(); ++i) r.an_exact[static_cast<long>(ps[i])] = vec(ap[i], "ap");
        if (hk.contains("an") && hk["an"].is_array()) {
            const Json& an = hk["an"];
            for (std::size_t i = 0; i < an.size(); ++i) {
                const long n = static_cast<long>(i) + 1;
                auto c = vec(an[i], "an");
                auto [pos, fresh] = r.an_exact.emplace(n, c);
                if (!fresh && pos->second != c) drift("an and ap disagree at n = " + std::to_string(n));
            }
        }
        return r;
    } catch (const Json::exception& e) {
        drift(e.what());
    }
}

// ---------------------------------------------------------------- client

/// $TWISTCTL_CACHE, else $XDG_CACHE_HOME/twistctl, else ~/.cache/twistctl.
inline std::string default_cache_dir() {
    if (const char* c = std::getenv("TWISTCTL_CACHE"); c && *c) return c;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::string(x) + "/twistctl";
    if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/twistctl";
    return ".twistctl-cache";
}

struct ClientOptions {
    std::string cache_dir = default_cache_dir();
    bool network = false;  // explicit opt-in
    std::string base_url = "https://www.lmfdb.org";
    std::chrono::milliseconds min_interval{1000};
    int timeout_seconds = 30;
};

/// Single-flight HTTP client with a read-through cache. Cache reads do not take the request lock.
class Client {
   public:
    explicit Client(ClientOptions o = {}) : opt_(std::move(o)) {}

    const ClientOptions& options() const { return opt_; }
    int requests() const { return requests_; }
    int cache_hits() const { return cache_hits_; }

    std::filesystem::path cache_path(const std::string& endpoint, const std::string& label) const {
        return std::filesystem::path(opt_.cache_dir) / ("v" + std::to_string(kCacheVersion)) / endpoint / (label + ".json");
    }

    /// Raw body for one endpoint; served from cache when present, stored once its shape checks out.
    std::string fetch_raw(const std::string& endpoint, const std::string& label) {
        bool fresh = false;
        std::string body = load(endpoint, label, fresh);
        if (fresh) {
            try {
                detail::only_row(Json::parse(body), label);
            } catch (const Json::exception&) {
                reject(endpoint, label, body, "unparseable body");
            } catch (const Error& e) {
                if (e.code() == Errc::NotFound) throw;
                reject(endpoint, label, body, e.what());
            }
            store(endpoint, label, body);
        }
        return body;
    }

    /// Both endpoints; fresh bodies reach the cache only if the record parses.
    NewformRecord fetch_newform(const std::string& label) {
        if (!valid_label(label)) throw Error(Errc::NotFound, "malformed label '" + label + "'");
        bool fresh_nf = false, fresh_hk = false;
        const std::string nf = load(kNewformEndpoint, label, fresh_nf);
        const std::string hk = load(kHeckeEndpoint, label, fresh_hk);
        NewformRecord r;
        try {
            Json jn, jh;
            try {
                jn = Json::parse(nf);
                jh = Json::parse(hk);
            } catch (const Json::exception& e) {
                throw Error(Errc::SchemaDrift, std::string("body does not parse: ") + e.what());
            }
            r = parse_record(label, jn, jh);
        } catch (const Error& e) {
            if (e.code() != Errc::SchemaDrift) throw;
            std::string kept;
            if (fresh_nf) kept += " " + preserve(kNewformEndpoint, label, nf);
            if (fresh_hk) kept += " " + preserve(kHeckeEndpoint, label, hk);
            throw Error(Errc::SchemaDrift, std::string(e.what()).substr(std::string("SchemaDrift: ").size()) +
                                               (kept.empty() ? "" : "; raw body kept at" + kept));
        }
        if (fresh_nf) store(kNewformEndpoint, label, nf);
        if (fresh_hk) store(kHeckeEndpoint, label, hk);
        return r;
    }

   private:
    static std::mutex& flight() {
        static std::mutex m;
        return m;
    }
    static std::chrono::steady_clock::time_point& last_request() {
        static std::chrono::steady_clock::time_point t{};
        return t;
    }

    std::string load(const std::string& endpoint, const std::string& label, bool& fresh) {
        if (!valid_label(label)) throw Error(Errc::NotFound, "malformed label '" + label + "'");
        const auto path = cache_path(endpoint, label);
        if (std::filesystem::exists(path)) {
            ++cache_hits_;
            fresh = false;
            return io::read_file(path.string());
        }
        if (!opt_.network)
            throw Error(Errc::NetworkError, "cache miss for " + endpoint + "/" + label + " and network access is off");
        fresh = true;
        return get(endpoint, label);
    }

    [[noreturn]] void reject(const std::string& endpoint, const std::string& label, const std::string& body,
                             const std::string& why) const {
        throw Error(Errc::SchemaDrift, why + "; raw body kept at " + preserve(endpoint, label, body));
    }

    std::string url_path(const std::string& endpoint, const std::string& label) const {
        return "/api/" + endpoint + "/?label=" + label + "&_format=json";
    }

    std::string get(const std::string& endpoint, const std::string& label) {
        std::lock_guard<std::mutex> lock(flight());
        auto& last = last_request();
        const auto now = std::chrono::steady_clock::now();
        if (last.time_since_epoch().count() != 0 && now - last < opt_.min_interval)
            std::this_thread::sleep_for(opt_.min_interval - (now - last));
        last = std::chrono::steady_clock::now();
        ++requests_;
        httplib::Client cli(opt_.base_url);
        cli.set_connection_timeout(opt_.timeout_seconds, 0);
        cli.set_read_timeout(opt_.timeout_seconds, 0);
        cli.set_follow_location(true);
        auto res = cli.Get(url_path(endpoint, label));
        if (!res) throw Error(Errc::NetworkError, opt_.base_url + ": " + httplib::to_string(res.error()));
        if (res->status == 404) throw Error(Errc::NotFound, endpoint + "/" + label + " returned 404");
        if (res->status != 200)
            throw Error(Errc::NetworkError, endpoint + "/" + label + " returned HTTP " + std::to_string(res->status));
        return res->body;
    }

    static void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
        std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
        {
            std::ofstream out(tmp, std::ios::binary);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out) throw Error(Errc::NetworkError, "cannot write cache file " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    void store(const std::string& endpoint, const std::string& label, const std::string& body) const {
        const auto path = cache_path(endpoint, label);
        Json meta;
        meta["label"] = label;
        meta["endpoint"] = endpoint;
        meta["cache_version"] = kCacheVersion;
        meta["url"] = opt_.base_url + url_path(endpoint, label);
        meta["bytes"] = body.size();
        meta["source"] = "lmfdb-api";
        const std::time_t t = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        meta["fetched_at"] = stamp;
        write_atomic(path, body);
        auto mpath = path;
        mpath.replace_extension(".meta.json");
        write_atomic(mpath, meta.dump(2) + "\n");
    }

    std::string preserve(const std::string& endpoint, const std::string& label, const std::string& body) const {
        auto path = cache_path(endpoint, label);
        path.replace_extension(".rejected");
        write_atomic(path, body);
        return path.string();
    }

    ClientOptions opt_;
    std::atomic<int> requests_{0};
    std::atomic<int> cache_hits_{0};
};

// ---------------------------------------------------------------- conversion

/// Trivial, or a quadratic character in Kronecker form; other recorded characters are not materialized.
inline std::optional<Character> recorded_character(const NumberField& K, const RecordedTwist& t) {
    if (t.trivial()) return trivial_character(K);
    if (t.discriminant != 0) return kronecker_character(K, t.discriminant);
    return std::nullopt;
}

/// Nebentypus as a character with values in K; empty when trivial.
inline std::optional<Character> nebentypus(const NumberField& K, const NewformRecord& r) {
    if (r.char_order == 1) return std::nullopt;
    if (r.char_order != 2)
        throw Error(Errc::InvalidArgument, "nebentypus " + r.nebentypus_label() + " of order " + std::to_string(r.char_order) +
                                               " needs explicit character values; only orders 1 and 2 are converted");
    const long f = r.char_conductor;
    long d = 0;
    if (r.char_parity) d = *r.char_parity < 0 ? -f : f;
    else if (f % 2 == 1) d = (f % 4 == 1) ? f : -f;
    else if (f == 4) d = -4;
    else
        throw Error(Errc::SchemaDrift, "char_parity missing for quadratic nebentypus of conductor " + std::to_string(f));
    return kronecker_character(K, d);
}

/// n = 2 system with a = a_p at primes not dividing the level, m = k - 1 and omega the nebentypus.
inline EigenSystem to_eigensystem(const NewformRecord& r, const NumberField& K) {
    if (K.degree() != r.degree())
        throw Error(Errc::NotGalois, "field of degree " + std::to_string(K.degree()) + " supplied for a degree " +
                                         std::to_string(r.degree()) + " Hecke field");
    if (r.degree() > 1 && !(K.min_poly() == r.hecke_field_poly))
        throw Error(Errc::InvalidArgument, "basis mismatch: supplied field " + K.min_poly().str() + " but record uses " +
                                               r.hecke_field_poly.str());
    EigenSystem s;
    s.n = 2;
    s.field = K;
    s.central.m = r.weight - 1;
    s.central.omega = nebentypus(K, r);
    for (long p = 2; p <= r.level; ++p)
        if (r.level % p == 0 && is_prime(static_cast<std::uint64_t>(p))) s.bad_places.insert(p);
    for (const auto& [n, c] : r.an_exact) {
        if (!is_prime(static_cast<std::uint64_t>(n)) || s.bad_places.count(n)) continue;
        PlaceData d;
        d.norm = n;
        d.a = FieldElement(c);
        twist::detail::add_place(s, n, std::move(d));
    }
    if (s.coeffs.empty()) throw Error(Errc::MissingCoefficients, r.label + " has no coefficients at good primes");
    return s;
}

/// Field from automorphism images in the record's power basis (empty for a rational form).
inline EigenSystem to_eigensystem(const NewformRecord& r, const std::vector<FieldElement>& aut_images) {
    if (r.degree() == 1) return to_eigensystem(r, NumberField::rationals());
    if (aut_images.size() != static_cast<std::size_t>(r.degree()))
        throw Error(Errc::NotGalois, r.hecke_field_poly.str() + " needs " + std::to_string(r.degree()) +
                                         " automorphism images, got " + std::to_string(aut_images.size()) +
                                         "; pass Galois closure data");
    try {
        return to_eigensystem(r, field_make(r.hecke_field_poly, aut_images));
    } catch (const Error& e) {
        if (e.code() == Errc::NotAnAutomorphism || e.code() == Errc::NotClosed)
            throw Error(Errc::NotGalois, std::string("supplied images do not form the Galois group: ") + e.what());
        throw;
    }
}

/// Records without nebentypus-free ap at primes <= B cannot support a bound-B comparison.
inline void require_coefficients(const NewformRecord& r, long B) {
    long top = 0;
    for (const auto& [n, c] : r.an_exact)
        if (is_prime(static_cast<std::uint64_t>(n))) top = std::max(top, n);
    if (top < B)
        throw Error(Errc::MissingCoefficients, r.label + " has a_p only up to " + std::to_string(top) + ", bound is " +
                                                   std::to_string(B));
}

// ---------------------------------------------------------------- comparison

struct DetectedPair {
    int aut_index = 0;
    long conductor = 1;
    int order = 1;
    bool from_self_twist = false;
    Character character;
};

struct RecordedMatch {
    RecordedTwist twist;
    std::vector<int> automorphisms;  // detected sigma matched to this entry
    bool matched = false;
};

struct TwistComparison {
    std::string label;
    long bound = 0;
    std::vector<DetectedPair> detected;
    std::vector<RecordedMatch> recorded;
    int detected_count = 0;
    int recorded_count = 0;
    bool count_agrees = false;
    bool orders_agree = false;
    bool bound_insufficient = false;
    std::string insufficiency;
    bool trivial_added = false;  // record listed no trivial twist; one was assumed
    std::vector<std::string> mismatches;            // disagreements with proved entries or unrecorded detections
    std::vector<std::string> unproved_mismatches;   // disagreements with entries LMFDB marks unproved
    bool agree() const { return !bound_insufficient && count_agrees && orders_agree && mismatches.empty() && unproved_mismatches.empty(); }
};

/// Inner pairs (sigma, chi) of Gamma^inn; a self-twist psi doubles each into (sigma, chi psi).
inline std::vector<DetectedPair> detected_pairs(const NumberField& K, const TwistGroup& G,
                                                const std::optional<Character>& self_twist) {
    std::vector<DetectedPair> out;
    for (const auto& t : G.twists) {
        if (t.kind != TwistKind::inner) continue;
        out.push_back({t.aut_index, conductor(K, t.character), t.character.order, false, t.character});
        if (self_twist) {
            Character c = char_mul(K, t.character, *self_twist);
            out.push_back({t.aut_index, conductor(K, c), c.order, true, c});
        }
    }
    return out;
}

/// Matches detected pairs to recorded entries by (conductor, order), and by values where the record pins the character.
inline TwistComparison compare_inner_twists(const std::string& label, const NumberField& K, const std::vector<DetectedPair>& det,
                                            const NewformRecord& r, const std::vector<long>& places, long B) {
    TwistComparison c;
    c.label = label;
    c.bound = B;
    c.detected = det;
    for (const auto& t : r.recorded_inner_twists) c.recorded.push_back({t, {}, false});
    if (std::none_of(c.recorded.begin(), c.recorded.end(), [](const RecordedMatch& m) { return m.twist.trivial(); })) {
        RecordedTwist one;
        one.character_label = "1.a";
        one.proved = true;
        c.recorded.insert(c.recorded.begin(), {one, {}, false});
        c.trivial_added = true;
    }
    std::vector<bool> used(det.size(), false);
    for (auto& m : c.recorded) {
        const auto chi = recorded_character(K, m.twist);
        for (std::size_t i = 0; i < det.size() && static_cast<int>(m.automorphisms.size()) < m.twist.multiplicity; ++i) {
            if (used[i] || det[i].conductor != m.twist.modulus || det[i].order != m.twist.order) continue;
            if (chi && !same_values(K, *chi, det[i].character, places)) continue;
            used[i] = true;
            m.automorphisms.push_back(det[i].aut_index);
        }
        m.matched = static_cast<int>(m.automorphisms.size()) == m.twist.multiplicity;
        if (!m.matched) {
            std::string msg = "recorded " + m.twist.character_label + " (order " + std::to_string(m.twist.order) + ", multiplicity " +
                              std::to_string(m.twist.multiplicity) + ") matched " + std::to_string(m.automorphisms.size()) + " time(s)";
            (m.twist.proved ? c.mismatches : c.unproved_mismatches).push_back(msg);
        }
        c.recorded_count += m.twist.multiplicity;
    }
    for (std::size_t i = 0; i < det.size(); ++i)
        if (!used[i])
            c.mismatches.push_back("detected (sigma " + std::to_string(det[i].aut_index) + ", conductor " +
                                   std::to_string(det[i].conductor) + ", order " + std::to_string(det[i].order) + ") not recorded");
    c.detected_count = static_cast<int>(det.size());
    c.count_agrees = c.detected_count == c.recorded_count;
    std::vector<int> od, orr;
    for (const auto& d : det) od.push_back(d.order);
    for (const auto& m : c.recorded)
        for (int k = 0; k < m.twist.multiplicity; ++k) orr.push_back(m.twist.order);
    std::sort(od.begin(), od.end());
    std::sort(orr.begin(), orr.end());
    c.orders_agree = od == orr;
    return c;
}

/// Detection at bound B on the converted system, then the comparison. Failures caused by B are flagged, not counted as mismatches.
inline TwistComparison compare_inner_twists(const EigenSystem& s, const NewformRecord& r, long B, DetectionOptions o = {}) {
    o.bound = B;
    const auto places = places_up_to(s, B);
    try {
        auto a = analyze_twists(s, o);
        auto v = general_type_verdict(s, o);
        auto c = compare_inner_twists(r.label, s.field, detected_pairs(s.field, a.group, v.self_twist), r, places, B);
        if (a.lemma_cent.insufficient_bound) {
            c.bound_insufficient = true;
            c.insufficiency = "stabilizer of the data is strictly larger than the detected group at B = " + std::to_string(B);
        }
        return c;
    } catch (const Error& e) {
        if (e.code() != Errc::NotClosed && e.code() != Errc::InsufficientData) throw;
        TwistComparison c;
        c.label = r.label;
        c.bound = B;
        c.bound_insufficient = true;
        c.insufficiency = e.what();
        for (const auto& t : r.recorded_inner_twists) {
            c.recorded.push_back({t, {}, false});
            c.recorded_count += t.multiplicity;
        }
        return c;
    }
}

}  // namespace twist::lmfdb

// ---------------------------------------------------------------- JSON

namespace twist::io {

inline Json to_json(const lmfdb::RecordedTwist& t) {
    Json j;
    j["character"] = t.character_label;
    j["modulus"] = t.modulus;
    j["order"] = t.order;
    j["parity"] = t.parity;
    j["discriminant"] = t.discriminant;
    j["multiplicity"] = t.multiplicity;
    j["proved"] = t.proved;
    return j;
}

inline Json to_json(const lmfdb::NewformRecord& r) {
    Json j;
    j["label"] = r.label;
    j["level"] = r.level;
    j["weight"] = r.weight;
    j["nebentypus"] = r.nebentypus_label();
    j["nebentypus_order"] = r.char_order;
    j["hecke_field_poly"] = to_json(r.hecke_field_poly);
    j["is_cm"] = r.is_cm;
    std::size_t primes = 0;
    long top = 0;
    for (const auto& [n, c] : r.an_exact)
        if (is_prime(static_cast<std::uint64_t>(n))) {
            ++primes;
            top = n;
        }
    j["coefficients"] = r.an_exact.size();
    j["max_prime"] = top;
    j["primes"] = primes;
    Json ts = Json::array();
    for (const auto& t : r.recorded_inner_twists) ts.push_back(to_json(t));
    j["recorded_inner_twists"] = ts;
    return j;
}

inline Json to_json(const lmfdb::TwistComparison& c) {
    Json j;
    j["label"] = c.label;
    j["bound"] = c.bound;
    j["agree"] = c.agree();
    j["detected_count"] = c.detected_count;
    j["recorded_count"] = c.recorded_count;
    j["count_agrees"] = c.count_agrees;
    j["orders_agree"] = c.orders_agree;
    j["bound_insufficient"] = c.bound_insufficient;
    j["insufficiency"] = c.insufficiency;
    Json d = Json::array();
    for (const auto& p : c.detected)
        d.push_back(Json{{"aut_index", p.aut_index},
                         {"conductor", p.conductor},
                         {"order", p.order},
                         {"from_self_twist", p.from_self_twist},
                         {"character", to_json(p.character)}});
    j["detected"] = d;
    Json rs = Json::array();
    for (const auto& m : c.recorded) {
        Json e = to_json(m.twist);
        e["matched"] = m.matched;
        e["automorphisms"] = m.automorphisms;
        rs.push_back(e);
    }
    j["recorded"] = rs;
    j["trivial_assumed"] = c.trivial_added;
    j["mismatches"] = c.mismatches;
    j["unproved_mismatches"] = c.unproved_mismatches;
    return j;
}

}  // namespace twist::io

#endif
