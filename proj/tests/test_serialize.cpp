#include "catch_amalgamated.hpp"

#include "kptau/serialize.hpp"

using namespace kptau;

namespace {

SeriesFile sample(int g = 3) {
    SeriesFile f;
    f.series = compute_tau_cutjoin(g);
    return f;
}

}  // namespace

TEST_CASE("sha256", "[serialize]") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("canonical payloads", "[serialize]") {
    CHECK(to_json(Rational(-3, 6)) == "-1/2");
    CHECK(to_json(NPoly{0, 2}) == json::array({"0", "2"}));
    CHECK(to_json(NPoly{}) == json::array());
    json layer = to_json(TPolynomial(TMonomial{{1, 1}, {2, 1}}, NPoly{0, 2}));
    CHECK(layer.dump() == R"([{"exponents":{"1":1,"2":1},"coeff":["0","2"]}])");
    CHECK(tpoly_from_json(layer) == TPolynomial(TMonomial{{1, 1}, {2, 1}}, NPoly{0, 2}));
}

TEST_CASE("round trip is byte-identical", "[serialize]") {
    SeriesFile f = sample();
    std::string a = series_to_string(f);
    SeriesFile back = series_from_string(a);
    CHECK(back.series == f.series);
    CHECK(series_to_string(back) == a);

    f.engine = "linear";
    f.manifest = compute_tau_linear(2).manifest;
    f.series = compute_tau_cutjoin(2);
    std::string b = series_to_string(f);
    SeriesFile lb = series_from_string(b);
    CHECK(lb.manifest.size() == 3);
    CHECK(lb.manifest[2].unknowns == f.manifest[2].unknowns);
    CHECK(series_to_string(lb) == b);
}

TEST_CASE("header", "[serialize]") {
    SeriesFile f = sample(1);
    f.eval_n = Rational(1, 2);
    f.series = eval_N(f.series, *f.eval_n);
    json doc = series_to_json(f);
    CHECK(doc["convention"] == "dt0=0");
    CHECK(doc["gmax"] == 1);
    CHECK(doc["eval_n"] == "1/2");
    CHECK(doc["checksum"].get<std::string>().rfind("sha256:", 0) == 0);
    CHECK(series_from_string(doc.dump()).eval_n == Rational(1, 2));
}

TEST_CASE("corrupt files", "[serialize]") {
    json doc = series_to_json(sample(2));
    json flipped = doc;
    flipped["layers"][1][0]["coeff"][0] = "-1/6";
    CHECK_THROWS_AS(series_from_string(flipped.dump()), ChecksumError);
    SeriesFile tolerated = series_from_string(flipped.dump(), true);
    CHECK(!tolerated.checksum_ok);

    json other = doc;
    other["convention"] = "dt0=N";
    CHECK_THROWS_AS(series_from_string(other.dump()), SerializeError);

    json short_doc = doc;
    short_doc["gmax"] = 5;
    CHECK_THROWS_AS(series_from_string(short_doc.dump(), true), SerializeError);

    json heavy = doc;
    heavy["layers"][1].push_back(json{{"exponents", {{"1", 1}}}, {"coeff", {"1"}}});
    CHECK_THROWS_AS(series_from_string(heavy.dump(), true), SerializeError);

    CHECK_THROWS_AS(series_from_string("{not json"), SerializeError);
    CHECK_THROWS_AS(read_series("/nonexistent/tau.json"), SerializeError);
}

TEST_CASE("correlator export", "[serialize]") {
    auto rows = correlator_table(free_energy(compute_tau_cutjoin(2)));
    json doc = correlators_to_json(rows, 2);
    CHECK(doc["rows"].size() == rows.size());
    CHECK(doc["rows"][0].contains("alphas"));
    std::string text = correlators_to_text(rows);
    CHECK(text.rfind("alphas", 0) == 0);
    CHECK(text.find("1/24") != std::string::npos);
    CHECK(text.find(" \n") == std::string::npos);
}
