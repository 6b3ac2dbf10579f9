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

#include <atomic>
#include <filesystem>
#include <future>
#include <random>
#include <thread>

#include "support/fields.hpp"
#include "twist/lmfdb.hpp"

using namespace twist;
using namespace twist::lmfdb;
using twist::testing::fe;
namespace fs = std::filesystem;

namespace {

const std::string kSeed = TWIST_DATA_DIR "/lmfdb-cache";
const std::vector<std::string> kLabels = {"11.2.a.a", "27.2.a.a", "7.3.b.a"};

std::string seed_body(const std::string& endpoint, const std::string& label) {
    return io::read_file(kSeed + "/v1/" + endpoint + "/" + label + ".json");
}

fs::path scratch(const std::string& tag) {
    static std::atomic<int> k{0};
    auto p = fs::temp_directory_path() / ("twist-lmfdb-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(k++));
    fs::remove_all(p);
    return p;
}

/// Serves the seed bodies on 127.0.0.1; `override_body` replaces every response when set.
class MockLmfdb {
   public:
    MockLmfdb() {
        srv_.Get(R"(/api/([a-z_]+)/)", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            const std::string endpoint = req.matches[1];
            const std::string label = req.get_param_value("label");
            if (status_ != 200) {
                res.status = status_;
                res.set_content("error", "text/plain");
                return;
            }
            if (!override_.empty()) {
                res.set_content(override_, "application/json");
                return;
            }
            const fs::path f = fs::path(kSeed) / "v1" / endpoint / (label + ".json");
            if (!fs::exists(f)) {
                res.set_content(R"({"table":")" + endpoint + R"(","data":[],"start":0})", "application/json");
                return;
            }
            res.set_content(io::read_file(f.string()), "application/json");
        });
        port_ = srv_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { srv_.listen_after_bind(); });
        srv_.wait_until_ready();
    }
    ~MockLmfdb() {
        srv_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int hits() const { return hits_; }
    void set_override(std::string body) { override_ = std::move(body); }
    void set_status(int s) { status_ = s; }

   private:
    httplib::Server srv_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
    std::string override_;
    int status_ = 200;
};

ClientOptions online(const MockLmfdb& m, const fs::path& dir) {
    ClientOptions o;
    o.cache_dir = dir.string();
    o.network = true;
    o.base_url = m.url();
    o.timeout_seconds = 5;
    return o;
}

ClientOptions offline(const std::string& dir = kSeed) {
    ClientOptions o;
    o.cache_dir = dir;
    o.network = false;
    return o;
}

}  // namespace

TEST(Labels, WellFormedness) {
    EXPECT_TRUE(valid_label("11.2.a.a"));
    EXPECT_TRUE(valid_label("7.3.b.a"));
    EXPECT_TRUE(valid_label("1000.2.bd.ab"));
    for (const char* bad : {"abc", "11.2.a", "11.2.A.a", "0.2.a.a", "11.2.a.a.", "11..a.a", "11.2.1.a", " 11.2.a.a"})
        EXPECT_FALSE(valid_label(bad)) << bad;
    EXPECT_EQ(orbit_letters(1), "a");
    EXPECT_EQ(orbit_letters(2), "b");
    EXPECT_EQ(orbit_letters(26), "z");
    EXPECT_EQ(orbit_letters(27), "ba");
}

TEST(Fetch, MalformedLabelFailsBeforeAnyRequest) {
    MockLmfdb m;
    Client c(online(m, scratch("bad")));
    try {
        c.fetch_newform("abc");
        FAIL() << "expected NotFound";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotFound);
    }
    EXPECT_EQ(m.hits(), 0);
    EXPECT_EQ(c.requests(), 0);
}

TEST(Fetch, CachesThenServesOffline) {
    MockLmfdb m;
    auto dir = scratch("cache");
    NewformRecord first;
    {
        Client c(online(m, dir));
        first = c.fetch_newform("11.2.a.a");
        EXPECT_EQ(c.requests(), 2);
        EXPECT_EQ(m.hits(), 2);
    }
    for (const char* ep : {kNewformEndpoint, kHeckeEndpoint}) {
        const fs::path body = dir / "v1" / ep / "11.2.a.a.json";
        const fs::path meta = dir / "v1" / ep / "11.2.a.a.meta.json";
        ASSERT_TRUE(fs::exists(body));
        ASSERT_TRUE(fs::exists(meta));
        // byte-identical round trip of the served body
        EXPECT_EQ(io::read_file(body.string()), seed_body(ep, "11.2.a.a"));
        auto mj = io::read_json(meta.string());
        EXPECT_EQ(mj["label"], "11.2.a.a");
        EXPECT_EQ(mj["endpoint"], ep);
        EXPECT_EQ(mj["cache_version"], 1);
        EXPECT_EQ(mj["bytes"].get<std::size_t>(), seed_body(ep, "11.2.a.a").size());
    }
    Client again(offline(dir.string()));
    auto second = again.fetch_newform("11.2.a.a");
    EXPECT_EQ(again.requests(), 0);
    EXPECT_EQ(again.cache_hits(), 2);
    EXPECT_EQ(second.an_exact, first.an_exact);
    EXPECT_EQ(m.hits(), 2);
    fs::remove_all(dir);
}

TEST(Fetch, CacheMissWithoutNetworkIsNetworkError) {
    Client c(offline(scratch("empty").string()));
    try {
        c.fetch_newform("11.2.a.a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NetworkError);
    }
}

TEST(Fetch, UnknownLabelIsNotFound) {
    MockLmfdb m;
    auto dir = scratch("missing");
    Client c(online(m, dir));
    try {
        c.fetch_newform("13.2.a.a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotFound);
    }
    EXPECT_FALSE(fs::exists(dir / "v1" / kNewformEndpoint / "13.2.a.a.json"));
    fs::remove_all(dir);
}

TEST(Fetch, HttpFailuresAreNetworkErrors) {
    MockLmfdb m;
    m.set_status(503);
    Client c(online(m, scratch("503")));
    try {
        c.fetch_newform("11.2.a.a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NetworkError);
        EXPECT_NE(std::string(e.what()).find("503"), std::string::npos);
    }
    ClientOptions o = online(m, scratch("refused"));
    o.base_url = "http://127.0.0.1:1";
    Client dead(o);
    try {
        dead.fetch_newform("11.2.a.a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NetworkError);
    }
}

TEST(Fetch, SchemaDriftKeepsRawBody) {
    MockLmfdb m;
    const std::string odd = R"({"data":[{"label":"11.2.a.a","level":11}]})";
    m.set_override(odd);
    auto dir = scratch("drift");
    Client c(online(m, dir));
    try {
        c.fetch_newform("11.2.a.a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SchemaDrift);
        EXPECT_NE(std::string(e.what()).find("rejected"), std::string::npos) << e.what();
    }
    EXPECT_EQ(io::read_file((dir / "v1" / kNewformEndpoint / "11.2.a.a.rejected").string()), odd);
    // nothing usable was cached
    EXPECT_FALSE(fs::exists(dir / "v1" / kNewformEndpoint / "11.2.a.a.json"));

    m.set_override("<html>maintenance</html>");
    try {
        c.fetch_raw(kHeckeEndpoint, "27.2.a.a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SchemaDrift);
    }
    fs::remove_all(dir);
}

TEST(Fetch, RateLimitSpacesRequests) {
    MockLmfdb m;
    auto dir = scratch("rate");
    Client c(online(m, dir));
    const auto t0 = std::chrono::steady_clock::now();
    c.fetch_newform("27.2.a.a");  // two requests
    c.fetch_newform("7.3.b.a");   // two more
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_EQ(c.requests(), 4);
    EXPECT_GE(ms, 2900);  // three gaps of >= 1 s (the first request may go out immediately)
    fs::remove_all(dir);
}

TEST(Cache, ConcurrentReadsAgree) {
    std::vector<std::future<NewformRecord>> jobs;
    for (int k = 0; k < 8; ++k)
        jobs.push_back(std::async(std::launch::async, [k] {
            Client c(offline());
            return c.fetch_newform(kLabels[static_cast<std::size_t>(k) % kLabels.size()]);
        }));
    for (int k = 0; k < 8; ++k) {
        auto r = jobs[static_cast<std::size_t>(k)].get();
        EXPECT_EQ(r.label, kLabels[static_cast<std::size_t>(k) % kLabels.size()]);
    }
}

// ---------------------------------------------------------------- records

TEST(Record, SeedRecordsParse) {
    Client c(offline());
    auto r = c.fetch_newform("11.2.a.a");
    EXPECT_EQ(r.level, 11);
    EXPECT_EQ(r.weight, 2);
    EXPECT_EQ(r.degree(), 1);
    EXPECT_EQ(r.an_exact.at(2), std::vector<Rational>{Rational(-2)});
    EXPECT_EQ(r.an_exact.at(13), std::vector<Rational>{Rational(4)});
    ASSERT_EQ(r.recorded_inner_twists.size(), 1u);
    EXPECT_TRUE(r.recorded_inner_twists[0].trivial());

    auto cm = c.fetch_newform("27.2.a.a");
    ASSERT_EQ(cm.recorded_inner_twists.size(), 2u);
    EXPECT_EQ(cm.recorded_inner_twists[1].character_label, "3.b");
    EXPECT_EQ(cm.recorded_inner_twists[1].order, 2);
    EXPECT_TRUE(cm.is_cm);

    auto neb = c.fetch_newform("7.3.b.a");
    EXPECT_EQ(neb.nebentypus_label(), "7.b");
    EXPECT_EQ(neb.char_order, 2);
}

TEST(Record, HeckeRingBasisIsConvertedToPowerBasis) {
    // x^2 - x - 1 with basis 1, (1 + 2x)/1 ... and a nontrivial denominator on the second element
    Json nf = Json::parse(R"({"data":[{"label":"5.2.a.a","level":5,"weight":2,"char_orbit_label":"a","char_conductor":1,
        "char_order":1,"inner_twists":[]}]})");
    Json hk = Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-1,-1,1],"hecke_ring_power_basis":false,
        "hecke_ring_numerators":[[1,0],[1,2]],"hecke_ring_denominators":[1,3],"ap":[[0,3],[1,0]]}]})");
    auto r = parse_record("5.2.a.a", nf, hk);
    // 3 * (1 + 2x)/3 = 1 + 2x
    EXPECT_EQ(r.an_exact.at(2), (std::vector<Rational>{Rational(1), Rational(2)}));
    EXPECT_EQ(r.an_exact.at(3), (std::vector<Rational>{Rational(1), Rational(0)}));
}

TEST(Record, ShapeProblemsAreSchemaDrift) {
    Json nf = Json::parse(R"({"data":[{"label":"5.2.a.a","level":5,"weight":2,"char_orbit_label":"a","char_conductor":1,
        "char_order":1,"inner_twists":[]}]})");
    auto drift = [&](const Json& n, const Json& h) {
        try {
            parse_record("5.2.a.a", n, h);
            return false;
        } catch (const Error& e) {
            return e.code() == Errc::SchemaDrift;
        }
    };
    EXPECT_TRUE(drift(nf, Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-1,-1,1],"ap":[[1]]}]})")));
    EXPECT_TRUE(drift(nf, Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-1,-1,1],"ap":[[1,"x"]]}]})")));
    EXPECT_TRUE(drift(nf, Json::parse(R"({"rows":[]})")));
    EXPECT_TRUE(drift(nf, Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-1,-1,1],"ap":[[1,0]],
        "hecke_ring_cyclotomic_generator":5}]})")));
    Json bad_twist = nf;
    bad_twist["data"][0]["inner_twists"] = Json::parse(R"([[1,1,"3"]])");
    EXPECT_TRUE(drift(bad_twist, Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-1,-1,1],"ap":[[1,0]]}]})")));
    Json wrong_label = nf;
    wrong_label["data"][0]["level"] = 7;
    EXPECT_TRUE(drift(wrong_label, Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-1,-1,1],"ap":[[1,0]]}]})")));
}

// ---------------------------------------------------------------- conversion

TEST(Convert, RationalNewformGivesSystemOverQ) {
    Client c(offline());
    auto r = c.fetch_newform("11.2.a.a");
    auto s = to_eigensystem(r, std::vector<FieldElement>{});
    EXPECT_EQ(s.n, 2);
    EXPECT_EQ(s.field.degree(), 1);
    EXPECT_EQ(s.central.m, 1);
    EXPECT_FALSE(s.central.omega.has_value());
    EXPECT_EQ(s.bad_places, (std::set<long>{11}));
    EXPECT_FALSE(s.coeffs.count(11));
    EXPECT_EQ(s.coeffs.at(3).a, fe({-1}));
    auto a = analyze_twists(s, DetectionOptions{.bound = 500});
    EXPECT_EQ(a.group.twists.size(), 1u);
}

TEST(Convert, NebentypusIsCarried) {
    Client c(offline());
    auto s = to_eigensystem(c.fetch_newform("7.3.b.a"), std::vector<FieldElement>{});
    ASSERT_TRUE(s.central.omega.has_value());
    EXPECT_EQ(s.central.m, 2);
    EXPECT_EQ(s.omega_order(), 2);
    EXPECT_EQ(effective_order_bound(s, {}), 4);
    EXPECT_EQ(char_eval(s.field, *s.central.omega, 3), fe({-1}));  // (-7 / 3) = -1
    EXPECT_EQ(char_eval(s.field, *s.central.omega, 2), fe({1}));
}

TEST(Convert, RoundTripThroughSerialize) {
    Client c(offline());
    for (const auto& L : kLabels) {
        auto s = to_eigensystem(c.fetch_newform(L), std::vector<FieldElement>{});
        auto doc = serialize(s);
        auto back = load_system(doc);
        EXPECT_EQ(serialize(back).dump(), doc.dump()) << L;
        // deterministic
        EXPECT_EQ(serialize(to_eigensystem(c.fetch_newform(L), std::vector<FieldElement>{})).dump(), doc.dump());
    }
}

namespace {

NewformRecord quadratic_record() {
    Json nf = Json::parse(R"({"data":[{"label":"5.2.a.a","level":5,"weight":2,"char_orbit_label":"a","char_conductor":1,
        "char_order":1,"inner_twists":[[1,1,1,1,1,1,1]]}]})");
    Json hk = Json::parse(R"({"data":[{"label":"5.2.a.a","field_poly":[-5,0,1],"ap":[[1,1],[0,-1],[2,0],[1,2]]}]})");
    return parse_record("5.2.a.a", nf, hk);
}

}  // namespace

TEST(Convert, QuadraticFieldWithConjugation) {
    auto r = quadratic_record();
    auto s = to_eigensystem(r, {fe({0, 1}), fe({0, -1})});
    EXPECT_EQ(s.field.degree(), 2);
    EXPECT_EQ(s.field.full_group().size(), 2u);
    EXPECT_EQ(s.coeffs.at(2).a, fe({1, 1}));
    EXPECT_FALSE(s.coeffs.count(5));
}

TEST(Convert, NonGaloisDataIsRejected) {
    auto r = quadratic_record();
    auto expect_not_galois = [&](const std::vector<FieldElement>& imgs) {
        try {
            to_eigensystem(r, imgs);
            return false;
        } catch (const Error& e) {
            return e.code() == Errc::NotGalois;
        }
    };
    EXPECT_TRUE(expect_not_galois({}));
    EXPECT_TRUE(expect_not_galois({fe({0, 1})}));
    EXPECT_TRUE(expect_not_galois({fe({0, 1}), fe({1, 1})}));
    // supplied field in another basis
    auto other = NumberField::make(RationalPolynomial({-20, 0, 1}), {fe({0, 1}), fe({0, -1})});
    try {
        to_eigensystem(r, other);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("basis mismatch"), std::string::npos);
    }
}

TEST(Convert, MissingCoefficients) {
    Json nf = Json::parse(R"({"data":[{"label":"2.2.a.a","level":2,"weight":2,"char_orbit_label":"a","char_conductor":1,
        "char_order":1,"inner_twists":[]}]})");
    Json hk = Json::parse(R"({"data":[{"label":"2.2.a.a","field_poly":[0,1],"ap":[[1]]}]})");
    auto r = parse_record("2.2.a.a", nf, hk);
    try {
        to_eigensystem(r, std::vector<FieldElement>{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingCoefficients);
    }
    Client c(offline());
    try {
        require_coefficients(c.fetch_newform("11.2.a.a"), 2000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingCoefficients);
    }
}

// ---------------------------------------------------------------- comparison

TEST(Compare, SeedLabelsAgreeAtB500) {
    Client c(offline());
    for (const auto& L : kLabels) {
        auto r = c.fetch_newform(L);
        require_coefficients(r, 500);
        auto s = to_eigensystem(r, std::vector<FieldElement>{});
        auto cmp = compare_inner_twists(s, r, 500);
        EXPECT_TRUE(cmp.agree()) << io::to_json(cmp).dump(2);
        EXPECT_EQ(cmp.detected_count, cmp.recorded_count) << L;
    }
}

TEST(Compare, CmTwistHasMatchingOrder) {
    Client c(offline());
    auto r = c.fetch_newform("27.2.a.a");
    auto cmp = compare_inner_twists(to_eigensystem(r, std::vector<FieldElement>{}), r, 500);
    ASSERT_EQ(cmp.detected.size(), 2u);
    EXPECT_EQ(cmp.detected[1].order, 2);
    EXPECT_EQ(cmp.detected[1].conductor, 3);
    EXPECT_TRUE(cmp.recorded[1].matched);
    EXPECT_EQ(cmp.recorded[1].automorphisms, std::vector<int>{0});
}

TEST(Compare, SmallBoundIsFlaggedNotMismatched) {
    Client c(offline());
    auto r = c.fetch_newform("27.2.a.a");
    auto cmp = compare_inner_twists(to_eigensystem(r, std::vector<FieldElement>{}), r, 20);
    EXPECT_TRUE(cmp.bound_insufficient);
    EXPECT_TRUE(cmp.mismatches.empty());
    EXPECT_FALSE(cmp.agree());
    // rerun at a larger bound resolves
    EXPECT_TRUE(compare_inner_twists(to_eigensystem(r, std::vector<FieldElement>{}), r, 500).agree());
}

TEST(Compare, WrongRecordIsAMismatch) {
    Client c(offline());
    auto r = c.fetch_newform("11.2.a.a");
    auto s = to_eigensystem(r, std::vector<FieldElement>{});
    auto fake = r;
    RecordedTwist t;
    t.modulus = 3;
    t.orbit_index = 2;
    t.order = 2;
    t.discriminant = -3;
    t.character_label = "3.b";
    t.proved = true;
    fake.recorded_inner_twists.push_back(t);
    auto cmp = compare_inner_twists(s, fake, 500);
    EXPECT_FALSE(cmp.agree());
    EXPECT_FALSE(cmp.count_agrees);
    EXPECT_EQ(cmp.mismatches.size(), 1u);
    // same disagreement against an unproved entry is reported separately
    fake.recorded_inner_twists.back().proved = false;
    cmp = compare_inner_twists(s, fake, 500);
    EXPECT_TRUE(cmp.mismatches.empty());
    EXPECT_EQ(cmp.unproved_mismatches.size(), 1u);
}

TEST(Compare, ImplicitTrivialTwist) {
    Client c(offline());
    auto r = c.fetch_newform("11.2.a.a");
    r.recorded_inner_twists.clear();
    auto cmp = compare_inner_twists(to_eigensystem(r, std::vector<FieldElement>{}), r, 500);
    EXPECT_TRUE(cmp.trivial_added);
    EXPECT_TRUE(cmp.agree());
}
