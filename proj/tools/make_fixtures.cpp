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

// Regenerates everything under data/: synthetic systems, cocycle files and the
// offline LMFDB seed cache. Output is deterministic; a test reruns this into a
// scratch directory and compares bytes with the committed tree.
//
// The seed cache bodies mimic the LMFDB API layout. Their coefficients are
// computed here from independent models (point counts on a Weierstrass model,
// or the Hecke character of an imaginary quadratic field), never copied.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "twist/synthetic.hpp"

namespace fs = std::filesystem;
using namespace twist;

namespace {

void write(const fs::path& path, const std::string& bytes) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_json(const fs::path& path, const Json& j) { write(path, j.dump(2) + "\n"); }

FieldElement fe(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return FieldElement(std::move(v));
}

// ---------------------------------------------------------------- synthetic systems

EigenSystem vantop_system() {
    auto K = NumberField::make(RationalPolynomial({1, 0, 1}), {fe({0, 1}), fe({0, -1})});
    SyntheticSpec spec;
    spec.n = 3;
    spec.field = K;
    spec.bound = 1000;
    spec.seed = 1;
    spec.group = {{TwistKind::outer, 1, trivial_character(K)}};
    return denormalize(planted_system(spec), 3);
}

/// Q(sqrt2, i) with a = sqrt2 + i; one inner and two outer twists, all characters trivial.
EigenSystem inner_outer_system() {
    // a^4 - 2a^2 + 9 = 0; sqrt2 = (5a - a^3)/6, i = (a + a^3)/6
    RationalPolynomial phi({9, 0, -2, 0, 1});
    auto img = [](long c1, long c3) {
        return FieldElement({Rational(0), Rational(c1, 6), Rational(0), Rational(c3, 6)});
    };
    // identity, i -> -i, sqrt2 -> -sqrt2, both
    auto K = NumberField::make(phi, {img(6, 0), img(4, -2), img(-4, 2), img(-6, 0)});
    auto one = trivial_character(K);
    SyntheticSpec spec;
    spec.n = 3;
    spec.field = K;
    spec.bound = 1000;
    spec.seed = 7;
    spec.bad_places = {2, 3};
    spec.group = {{TwistKind::inner, 1, one}, {TwistKind::outer, 2, one}, {TwistKind::outer, 3, one}};
    return planted_system(spec);
}

// ---------------------------------------------------------------- cocycles

Json cocycle_doc(long q, int m, int n, std::vector<std::vector<long>> alpha, bool flip) {
    Json a = Json::array();
    for (auto& row : alpha) a.push_back(row);
    Json j;
    j["model"] = Json{{"q", q}, {"m", m}, {"n", n}};
    j["assignments"] = Json{{"1", Json{{"alpha", a}, {"flip", flip}}}};
    return j;
}

// ---------------------------------------------------------------- newform coefficients

struct Curve {
    long a1, a2, a3, a4, a6;
};

/// p - #{affine solutions}; correct at bad primes as well (node: +-1, cusp: 0).
long curve_ap(const Curve& E, long p) {
    auto md = [p](long x) { return ((x % p) + p) % p; };
    std::vector<long> rhs(static_cast<std::size_t>(p));
    long count = 0;
    for (long x = 0; x < p; ++x) {
        const long r = md(md(md(x * x) * x) + md(E.a2 * md(x * x)) + md(E.a4 * x) + E.a6);
        for (long y = 0; y < p; ++y)
            if (md(md(y * y) + md(E.a1 * md(x * y)) + md(E.a3 * y)) == r) ++count;
    }
    return p - count;
}

/// Weight 3 CM form of level 7: a_p = Tr(alpha^2) for p = N(alpha) split in Q(sqrt -7), a_7 = -7, 0 at inert p.
long cm7_ap(long p) {
    if (p == 7) return -7;
    for (long y = 0; 2 * y * y <= p; ++y)
        for (long x = -2 * p; x <= 2 * p; ++x)
            if (x * x + x * y + 2 * y * y == p) return (2 * x + y) * (2 * x + y) - 2 * p;
    return 0;
}

struct FormSpec {
    std::string label;
    long level;
    int weight;
    std::string char_orbit;
    long char_orbit_index;
    long char_conductor;
    int char_order;
    int char_parity;
    long conrey;
    bool cm;
    std::vector<long> cm_discs;
    Json inner_twists;
    std::function<long(long)> ap;
    std::function<long(long)> omega;  // nebentypus on integers, 0 when not coprime to the level
};

long kron(long d, long n) {
    // (d / n) for odd prime n or n = 2
    if (n == 2) {
        if (d % 2 == 0) return 0;
        long r = ((d % 8) + 8) % 8;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    long a = ((d % n) + n) % n;
    if (a == 0) return 0;
    long r = 1, e = (n - 1) / 2, b = a;
    while (e) {
        if (e & 1) r = r * b % n;
        b = b * b % n;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

/// a_n for n <= 100 from a_p by multiplicativity and the Hecke recursion.
std::vector<long> an_upto(const FormSpec& f, long N) {
    std::vector<long> a(static_cast<std::size_t>(N) + 1, 0);
    a[1] = 1;
    for (long n = 2; n <= N; ++n) {
        long p = 2;
        while (n % p) ++p;
        long pk = 1, k = 0;
        long m = n;
        while (m % p == 0) {
            m /= p;
            pk *= p;
            ++k;
        }
        if (m > 1) {
            a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(m)] * a[static_cast<std::size_t>(pk)];
            continue;
        }
        if (k == 1) {
            a[static_cast<std::size_t>(n)] = f.ap(p);
            continue;
        }
        long pw = 1;
        for (int i = 0; i < f.weight - 1; ++i) pw *= p;
        a[static_cast<std::size_t>(n)] = f.ap(p) * a[static_cast<std::size_t>(pk / p)] -
                                         f.omega(p) * pw * a[static_cast<std::size_t>(pk / p / p)];
    }
    return a;
}

void seed_cache(const fs::path& root, const FormSpec& f) {
    const std::string base = "https://www.lmfdb.org";
    Json nf;
    nf["label"] = f.label;
    nf["level"] = f.level;
    nf["weight"] = f.weight;
    nf["char_orbit_label"] = f.char_orbit;
    nf["char_orbit_index"] = f.char_orbit_index;
    nf["char_conductor"] = f.char_conductor;
    nf["char_order"] = f.char_order;
    nf["char_parity"] = f.char_parity;
    nf["conrey_indexes"] = Json::array({f.conrey});
    nf["dim"] = 1;
    nf["field_poly"] = Json::array({0, 1});
    nf["is_cm"] = f.cm;
    nf["cm_discs"] = f.cm_discs;
    nf["inner_twists"] = f.inner_twists;
    nf["inner_twist_count"] = f.inner_twists.size();

    Json hk;
    hk["label"] = f.label;
    hk["field_poly"] = Json::array({0, 1});
    hk["hecke_ring_power_basis"] = true;
    hk["hecke_ring_cyclotomic_generator"] = 0;
    hk["maxp"] = 997;
    Json ap = Json::array();
    for (auto p : primes_up_to(997)) ap.push_back(Json::array({f.ap(static_cast<long>(p))}));
    hk["ap"] = ap;
    Json an = Json::array();
    auto a = an_upto(f, 100);
    for (long n = 1; n <= 100; ++n) an.push_back(Json::array({a[static_cast<std::size_t>(n)]}));
    hk["an"] = an;

    auto emit = [&](const std::string& endpoint, const Json& row) {
        Json body;
        body["table"] = endpoint;
        body["data"] = Json::array({row});
        body["start"] = 0;
        const std::string bytes = body.dump();
        const fs::path dir = root / "v1" / endpoint;
        write(dir / (f.label + ".json"), bytes);
        Json meta;
        meta["label"] = f.label;
        meta["endpoint"] = endpoint;
        meta["cache_version"] = 1;
        meta["url"] = base + "/api/" + endpoint + "/?label=" + f.label + "&_format=json";
        meta["bytes"] = bytes.size();
        meta["source"] = "offline-seed";
        meta["note"] = "coefficients recomputed by tools/make_fixtures from an independent model; refresh with a live fetch";
        write_json(dir / (f.label + ".meta.json"), meta);
    };
    emit("mf_newforms", nf);
    emit("mf_hecke_nf", hk);
}

std::vector<FormSpec> forms() {
    const Json trivial = Json::array({1, 1, 1, 1, 1, 1, 1});
    Curve e11{0, -1, 1, -10, -20};
    Curve e27{0, 0, 1, 0, -7};
    auto principal = [](long N) { return [N](long p) { return N % p == 0 ? 0L : 1L; }; };
    return {
        {"11.2.a.a", 11, 2, "a", 1, 1, 1, 1, 1, false, {}, Json::array({trivial}),
         [e11](long p) { return curve_ap(e11, p); }, principal(11)},
        {"27.2.a.a", 27, 2, "a", 1, 1, 1, 1, 1, true, {-3}, Json::array({trivial, Json::array({1, 1, 3, 2, -1, 2, -3})}),
         [e27](long p) { return curve_ap(e27, p); }, principal(27)},
        {"7.3.b.a", 7, 3, "b", 2, 7, 2, -1, 6, true, {-7}, Json::array({trivial, Json::array({1, 1, 7, 2, -1, 2, -7})}),
         cm7_ap, [](long p) { return kron(-7, p); }},
    };
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <data-dir>\n";
        return 2;
    }
    try {
        const fs::path root = argv[1];
        write_json(root / "vantop.json", serialize(vantop_system()));
        write_json(root / "inner_outer.json", serialize(inner_outer_system()));

        const fs::path cc = root / "cocycles";
        write_json(cc / "su2_q2.json", cocycle_doc(2, 2, 2, {{1, 0}, {0, 1}}, true));
        write_json(cc / "su2_q3.json", cocycle_doc(3, 2, 2, {{1, 0}, {0, 1}}, true));
        write_json(cc / "su3_q2.json", cocycle_doc(2, 2, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, true));
        write_json(cc / "sl3_q2.json", cocycle_doc(2, 2, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, false));
        // alpha = I with an off-diagonal 2 under the flip: alpha * ^s alpha^-T is not scalar
        write_json(cc / "broken_q3.json", cocycle_doc(3, 2, 2, {{1, 2}, {0, 1}}, true));
        write_json(cc / "diag_flip_q3.json", cocycle_doc(3, 2, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 2}}, true));

        for (const auto& f : forms()) seed_cache(root / "lmfdb-cache", f);
        std::cout << "wrote fixtures under " << root.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
