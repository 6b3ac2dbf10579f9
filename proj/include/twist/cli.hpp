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

// twistctl front end. run() is callable in-process; exit codes are
// 0 success, 1 domain error (message carries the module error name), 2 usage error.

#ifndef TWIST_CLI_HPP
#define TWIST_CLI_HPP

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twist/cocycle.hpp"
#include "twist/image.hpp"
#include "twist/lmfdb.hpp"

namespace twist::cli {

enum ExitCode { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Raised for bad flag values found after parsing; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    std::string input;
    long bound = 200;
    long n_max = 0;
    std::string primes = "3..100";
    std::string format = "text";
    std::string output;
    std::string cache_dir = lmfdb::default_cache_dir();
    bool network = false;
    std::string base_url = "https://www.lmfdb.org";
    std::uint64_t budget = kDefaultBudget;
    std::uint64_t seed = 1;
    // oracle
    int n = 3;
    long q = 2;
    int m = 2;
    bool flip = false;
    // verify-cocycle
    bool fixed_points = false;
    bool projection = false;
    int base_change = 0;
    // lmfdb
    std::string label;
    std::string aut_images;
    long lmfdb_bound = 500;
};

/// "3..100", "2,3,5" or mixtures such as "3..50,97". Ranges contribute their primes; listed entries are kept as given.
inline std::vector<std::uint64_t> parse_primes(const std::string& spec) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(spec);
    std::string part;
    auto num = [&](const std::string& t) -> std::uint64_t {
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("--primes: '" + t + "' is not a nonnegative integer");
        return std::stoull(t);
    };
    while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(num(part));
            continue;
        }
        const std::uint64_t lo = num(part.substr(0, dots)), hi = num(part.substr(dots + 2));
        if (hi < lo) throw UsageError("--primes: empty range " + part);
        if (hi - lo > 1000000) throw UsageError("--primes: range " + part + " is too long");
        for (std::uint64_t p = lo; p <= hi; ++p)
            if (is_prime(p)) out.push_back(p);
    }
    if (out.empty()) throw UsageError("--primes: no primes in '" + spec + "'");
    return out;
}

namespace detail {

inline EigenSystem load_input(const std::string& path) {
    const std::string text = io::read_file(path);
    return load_system(io::parse_text(text, path));
}

/// n = 3 raw data is normalized before detection; n = 2 works on raw a.
inline EigenSystem prepared(const EigenSystem& s, bool& normalized_here) {
    normalized_here = s.n == 3 && !s.normalized();
    return normalized_here ? normalize(s) : s;
}

inline std::string group_structure(const NumberField& K, const Subgroup& S) {
    const auto k = S.size();
    if (k == 1) return "trivial";
    for (int g : S.members)
        if (static_cast<std::size_t>(K.order(g)) == k) return "Z/" + std::to_string(k);
    if (k == 4) return "Z/2 x Z/2";
    return "order " + std::to_string(k);
}

inline Json twists_json(const EigenSystem& s, bool normalized_here, const TwistAnalysis& a, const GeneralTypeResult& v) {
    Json j;
    j["n"] = s.n;
    j["normalized_input"] = normalized_here;
    j["bound"] = a.lemma_cent.bound;
    Json body = io::to_json(a);
    j["twists"] = body["twists"];
    j["gamma_order"] = a.group.full_subgroup.size();
    j["gamma_structure"] = group_structure(s.field, a.group.full_subgroup);
    j["gamma_inn_order"] = a.group.inner_subgroup.size();
    j["gamma"] = body["gamma"];
    j["gamma_inn"] = body["gamma_inn"];
    j["outer_twists"] = a.group.full_subgroup.size() - a.group.inner_subgroup.size();
    j["F"] = body["F"];
    j["F_inn"] = body["F_inn"];
    j["lemma_cent"] = body["lemma_cent"];
    j["general_type"] = io::to_json(v);
    return j;
}

inline std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline bool flat(const Json& v) {
    if (v.is_primitive()) return true;
    if (v.is_array()) return std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive() || (x.is_array() && flat(x)); });
    return false;
}

/// Indented key: value rendering; carries exactly the JSON facts.
inline void render(const Json& j, std::ostream& out, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (flat(it.value())) {
                out << pad << it.key() << ": " << scalar_text(it.value()) << "\n";
            } else {
                out << pad << it.key() << ":\n";
                render(it.value(), out, indent + 2);
            }
        }
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (flat(e)) {
                out << pad << "- " << scalar_text(e) << "\n";
            } else {
                out << pad << "-\n";
                render(e, out, indent + 2);
            }
        }
    } else {
        out << pad << scalar_text(j) << "\n";
    }
}

inline void classify_table(const Json& r, std::ostream& out) {
    out << std::left << std::setw(7) << "p" << std::setw(7) << "place" << std::setw(4) << "f" << std::setw(7) << "F_inn"
        << std::setw(15) << "form" << std::setw(32) << "group" << "image\n";
    for (const auto& p : r["primes"])
        for (const auto& w : p["places"])
            out << std::left << std::setw(7) << p["p"].get<std::uint64_t>() << std::setw(7) << w["place"].get<int>()
                << std::setw(4) << w["residue_degree"].get<int>() << std::setw(7) << w["places_in_F_inn"].get<int>()
                << std::setw(15) << w["form"].get<std::string>() << std::setw(32) << w["group_label"].get<std::string>()
                << w["image_type"].get<std::string>() << (w["split_caveat"].get<bool>() ? " (split over E_p)" : "") << "\n";
    for (const auto& e : r["excluded"])
        out << "excluded " << e["p"].get<std::uint64_t>() << ": " << e["reason"].get<std::string>() << "\n";
    out << "gamma_order: " << r["gamma_order"] << "\n";
    out << "gamma_inn_order: " << r["gamma_inn_order"] << "\n";
    out << "F: " << r["F"].dump() << "\n";
    out << "F_inn: " << r["F_inn"].dump() << "\n";
    out << "predicted_dimension: " << r["predicted_dimension"] << "\n";
    out << "mt_upper_bound_dimension: " << r["mt_upper_bound_dimension"] << "\n";
    out << "n: " << r["n"] << "\n";
    out << "bound: " << r["bound"] << "\n";
}

inline DetectionOptions detection(const RunConfig& c) {
    DetectionOptions o;
    o.bound = c.bound;
    o.n_max = c.n_max;
    return o;
}

}  // namespace detail

/// Executes the parsed configuration; returns the report and its text rendering.
struct Output {
    Json json;
    std::string text;
    int code = kOk;
};

inline Output cmd_twists(const RunConfig& c) {
    bool norm = false;
    EigenSystem s = detail::prepared(detail::load_input(c.input), norm);
    auto o = detail::detection(c);
    auto a = analyze_twists(s, o);
    auto v = general_type_verdict(s, o);
    Output out;
    out.json = detail::twists_json(s, norm, a, v);
    return out;
}

inline Output cmd_report(const RunConfig& c, bool classify_only) {
    bool norm = false;
    EigenSystem s = detail::prepared(detail::load_input(c.input), norm);
    auto o = detail::detection(c);
    auto primes = parse_primes(c.primes);
    auto a = analyze_twists(s, o);
    auto r = image_report(s, a.group, primes, o);
    Output out;
    Json ij = io::to_json(r);
    if (classify_only) {
        ij.erase("general_type");
        out.json = ij;
        std::ostringstream t;
        detail::classify_table(ij, t);
        out.text = t.str();
    } else {
        out.json["twists"] = detail::twists_json(s, norm, a, r.verdict);
        out.json["image"] = ij;
    }
    return out;
}

inline Output cmd_normalize(const RunConfig& c) {
    Output out;
    out.json = serialize(normalize(detail::load_input(c.input)));
    out.text = out.json.dump(2) + "\n";
    return out;
}

inline Output cmd_verify(const RunConfig& c) {
    const Json doc = io::read_json(c.input);
    Output out;
    Json& j = out.json;
    if (doc.contains("model")) {
        auto [M, cc] = finite_cocycle_from(doc, true);
        j["kind"] = "finite";
        j["model"] = io::to_json(M);
        j["valid"] = true;
        Json flips = Json::object();
        for (const auto& [s, e] : cc.assignments()) flips[std::to_string(s)] = e.flip;
        j["flips"] = flips;
        const bool outer = std::any_of(cc.assignments().begin(), cc.assignments().end(), [](const auto& kv) { return kv.second.flip; });
        j["form"] = outer ? "outer" : "inner";
        if (c.fixed_points) j["fixed_points"] = twisted_fixed_points(M, cc, c.budget).order;
        if (c.projection) j["projection"] = io::to_json(projection_iso_check(M, cc, ProjectionOptions{c.budget, 100, c.seed}));
        if (c.base_change > 0) j["base_change"] = io::to_json(base_change_check(M, cc, c.base_change, c.budget));
    } else {
        auto cc = field_cocycle_from(doc);
        j["kind"] = "field";
        j["n"] = cc.algebra().n();
        j["group"] = cc.group().members;
        j["valid"] = true;
        Json flips = Json::object();
        bool outer = false;
        for (const auto& [s, e] : cc.assignments()) {
            flips[std::to_string(s)] = e.flip;
            outer = outer || e.flip;
        }
        j["flips"] = flips;
        j["form"] = outer ? "outer" : "inner";
    }
    return out;
}

inline Output cmd_oracle(const RunConfig& c) {
    auto M = FiniteModel::make(c.q, c.m, c.n);
    auto cc = c.flip ? flip_cocycle(M) : trivial_cocycle(M);
    auto fp = twisted_fixed_points(M, cc, c.budget);
    const bool unitary = c.flip;
    const std::string name = std::string(unitary ? "SU_" : "SL_") + std::to_string(c.n) + "(" + std::to_string(c.q) + ")";
    const std::uint64_t expect = unitary ? su_order(c.n, c.q) : sl_order(c.n, c.q);
    Output out;
    out.json["model"] = io::to_json(M);
    out.json["flip"] = c.flip;
    out.json["candidates"] = fp.candidates;
    out.json["order"] = fp.order;
    out.json["closed_form_group"] = name;
    out.json["closed_form_order"] = expect;
    out.json["matches"] = fp.order == expect;
    out.text = std::to_string(fp.order) + "\n" +
               (fp.order == expect ? "matches " + name : "MISMATCH: " + name + " has order " + std::to_string(expect)) + "\n";
    if (fp.order != expect) out.code = kDomainError;
    return out;
}

inline std::vector<FieldElement> aut_images_from(const std::string& path) {
    if (path.empty()) return {};
    const Json j = io::read_json(path);
    if (!j.is_array()) io::schema("automorphism images must be a list of coordinate vectors");
    std::vector<FieldElement> out;
    for (const auto& v : j) out.emplace_back(io::rationals_from(v));
    return out;
}

inline Output cmd_lmfdb(const RunConfig& c, bool compare) {
    lmfdb::ClientOptions o;
    o.cache_dir = c.cache_dir;
    o.network = c.network;
    o.base_url = c.base_url;
    lmfdb::Client client(o);
    auto r = client.fetch_newform(c.label);
    Output out;
    if (!compare) {
        out.json = io::to_json(r);
        out.json["cache_dir"] = c.cache_dir;
        return out;
    }
    lmfdb::require_coefficients(r, c.lmfdb_bound);
    auto s = lmfdb::to_eigensystem(r, aut_images_from(c.aut_images));
    auto o2 = detail::detection(c);
    out.json = io::to_json(lmfdb::compare_inner_twists(s, r, c.lmfdb_bound, o2));
    return out;
}

/// Parses argv and runs one subcommand, writing to out/err.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig c;
    CLI::App app{"twistctl: extra twists, twisted forms and image predictions for compatible systems"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "twistctl 0.1.0");

    auto fmt = [&](CLI::App* s) {
        s->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
        s->add_option("--output,-o", c.output, "write the report to this file instead of stdout");
    };
    auto detect_opts = [&](CLI::App* s) {
        s->add_option("--input,-i", c.input, "eigensystem JSON")->required()->check(CLI::ExistingFile);
        s->add_option("--bound,-B", c.bound, "use places of norm <= B")->check(CLI::PositiveNumber)->capture_default_str();
        s->add_option("--n-max", c.n_max, "conductor search limit (default 16 * product of bad norms)")->check(CLI::NonNegativeNumber);
        fmt(s);
    };

    auto* tw = app.add_subcommand("twists", "detect and assemble extra twists, fixed fields and the lemma-cent check");
    detect_opts(tw);
    auto* cl = app.add_subcommand("classify", "per-prime inner/outer verdicts and dimensions");
    detect_opts(cl);
    cl->add_option("--primes,-p", c.primes, "primes as a..b ranges or comma lists")->capture_default_str();
    auto* rp = app.add_subcommand("report", "full image report");
    detect_opts(rp);
    rp->add_option("--primes,-p", c.primes, "primes as a..b ranges or comma lists")->capture_default_str();
    auto* nm = app.add_subcommand("normalize", "rescale an eigensystem to trivial determinant");
    nm->add_option("--input,-i", c.input, "eigensystem JSON")->required()->check(CLI::ExistingFile);
    fmt(nm);

    auto* vc = app.add_subcommand("verify-cocycle", "validate a cocycle file");
    vc->add_option("--input,-i", c.input, "cocycle JSON")->required()->check(CLI::ExistingFile);
    vc->add_flag("--fixed-points", c.fixed_points, "also enumerate the twisted fixed points");
    vc->add_flag("--projection", c.projection, "also run the projection isomorphism check");
    vc->add_option("--base-change", c.base_change, "also compare with the restriction to the index-d subgroup")->check(CLI::PositiveNumber);
    vc->add_option("--budget", c.budget, "enumeration budget")->check(CLI::PositiveNumber);
    vc->add_option("--seed", c.seed, "seed for sampled checks")->capture_default_str();
    fmt(vc);

    auto* orc = app.add_subcommand("oracle", "finite-field fixed points against closed-form orders");
    orc->add_option("--n", c.n, "matrix size")->check(CLI::Range(1, 6))->capture_default_str();
    orc->add_option("--q", c.q, "prime power q")->check(CLI::Range(2L, 1024L))->capture_default_str();
    orc->add_option("--m", c.m, "degree of E over the base")->check(CLI::Range(1, 10))->capture_default_str();
    orc->add_flag("--flip", c.flip, "compose the generator with transpose-inverse");
    orc->add_option("--budget", c.budget, "enumeration budget")->check(CLI::PositiveNumber);
    fmt(orc);

    auto* lm = app.add_subcommand("lmfdb", "LMFDB newform data");
    lm->require_subcommand(1, 1);
    auto lm_opts = [&](CLI::App* s) {
        s->add_option("--label,-l", c.label, "newform label level.weight.char.orbit")->required();
        s->add_option("--cache", c.cache_dir, "cache directory (default $TWISTCTL_CACHE)")->capture_default_str();
        s->add_flag("--network", c.network, "allow HTTP requests on cache misses");
        s->add_option("--base-url", c.base_url, "API host")->capture_default_str();
        fmt(s);
    };
    auto* lf = lm->add_subcommand("fetch", "fetch and cache a newform record");
    lm_opts(lf);
    auto* lc = lm->add_subcommand("compare", "compare detected inner twists with the recorded ones");
    lm_opts(lc);
    lc->add_option("--bound,-B", c.lmfdb_bound, "detection bound")->check(CLI::PositiveNumber)->capture_default_str();
    lc->add_option("--aut-images", c.aut_images, "JSON list of automorphism images in the record's power basis")
        ->check(CLI::ExistingFile);
    lc->add_option("--n-max", c.n_max, "conductor search limit")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        // CLI11 reports a stray word as a missing subcommand; name it instead
        if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
            err << "unknown subcommand '" << argv[1] << "'\nRun with --help for more information.\n";
            return kUsageError;
        }
        app.exit(e, out, err);
        return kUsageError;
    }
    try {
        Output o;
        if (app.got_subcommand(tw)) o = cmd_twists(c);
        else if (app.got_subcommand(cl)) o = cmd_report(c, true);
        else if (app.got_subcommand(rp)) o = cmd_report(c, false);
        else if (app.got_subcommand(nm)) o = cmd_normalize(c);
        else if (app.got_subcommand(vc)) o = cmd_verify(c);
        else if (app.got_subcommand(orc)) o = cmd_oracle(c);
        else if (lm->got_subcommand(lf)) o = cmd_lmfdb(c, false);
        else o = cmd_lmfdb(c, true);

        std::string text;
        if (c.format == "json") {
            text = o.json.dump(2) + "\n";
        } else if (!o.text.empty()) {
            text = o.text;
        } else {
            std::ostringstream t;
            detail::render(o.json, t);
            text = t.str();
        }
        if (c.output.empty()) {
            out << text;
        } else {
            std::ofstream f(c.output, std::ios::binary);
            if (!f) throw UsageError("--output: cannot write " + c.output);
            f << text;
            if (!f) throw UsageError("--output: cannot write " + c.output);
        }
        return o.code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

/// Convenience for in-process callers.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"twistctl"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace twist::cli

#endif
