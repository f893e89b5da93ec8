#pragma once

#include "kptau/correlators.hpp"
#include "kptau/tau_engine.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kptau {

inline constexpr const char* format_version = "1.0.0";
inline constexpr const char* boundary_convention = "dt0=0";

using json = nlohmann::ordered_json;

class SerializeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class ChecksumError : public SerializeError {
    using SerializeError::SerializeError;
};

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

// ---- canonical payloads -------------------------------------------------------

inline json to_json(const Rational& r) { return r.to_string(); }

inline json to_json(const NPoly& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(c.to_string());
    return a;
}

inline json to_json(const TMonomial& m) {
    json o = json::object();
    for (auto [k, e] : m.factors()) o[std::to_string(k)] = e;
    return o;
}

inline json to_json(const TPolynomial& p) {
    json a = json::array();
    for (const auto& [m, c] : p.terms()) a.push_back(json{{"exponents", to_json(m)}, {"coeff", to_json(c)}});
    return a;
}

inline Rational rational_from_json(const json& j) {
    if (!j.is_string()) throw SerializeError("expected a rational string");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SerializeError(std::string("bad rational: ") + e.what());
    }
}

inline NPoly npoly_from_json(const json& j) {
    if (!j.is_array()) throw SerializeError("expected an NPoly array");
    std::vector<Rational> cs;
    for (const auto& x : j) cs.push_back(rational_from_json(x));
    return NPoly(std::move(cs));
}

inline TMonomial monomial_from_json(const json& j) {
    if (!j.is_object()) throw SerializeError("expected an exponents object");
    TMonomial m;
    for (const auto& [k, e] : j.items()) {
        int idx = 0;
        try {
            idx = std::stoi(k);
        } catch (const std::exception&) {
            throw SerializeError("bad variable index " + k);
        }
        if (!e.is_number_integer() || e.get<int>() <= 0) throw SerializeError("bad exponent for t" + k);
        m.multiply_var(idx, e.get<int>());
    }
    return m;
}

inline TPolynomial tpoly_from_json(const json& j) {
    if (!j.is_array()) throw SerializeError("expected a polynomial array");
    TPolynomial p;
    for (const auto& term : j) {
        if (!term.is_object() || !term.contains("exponents") || !term.contains("coeff"))
            throw SerializeError("malformed term");
        p.add(monomial_from_json(term["exponents"]), npoly_from_json(term["coeff"]));
    }
    return p;
}

// ---- series files -------------------------------------------------------------

struct SeriesFile {
    TauSeries series;
    std::string engine = "cut-and-join";
    std::optional<Rational> eval_n;
    std::vector<LayerManifest> manifest;  // linear route only
    bool checksum_ok = true;
};

inline json manifest_to_json(const std::vector<LayerManifest>& manifest);
inline std::vector<LayerManifest> manifest_from_json(const json& j);

namespace detail {

inline std::string checksum_of(json doc) {
    doc.erase("checksum");
    return "sha256:" + sha256_hex(doc.dump());
}

inline std::string kind_name(SeriesKind k) { return k == SeriesKind::tau ? "tau" : "free-energy"; }

}  // namespace detail

inline json series_to_json(const SeriesFile& f) {
    json doc;
    doc["version"] = format_version;
    doc["engine"] = f.engine;
    doc["kind"] = detail::kind_name(f.series.kind);
    doc["gmax"] = f.series.gmax();
    doc["convention"] = boundary_convention;
    if (f.eval_n) doc["eval_n"] = f.eval_n->to_string();
    json layers = json::array();
    for (const auto& l : f.series.layers) layers.push_back(to_json(l));
    doc["layers"] = std::move(layers);
    if (!f.manifest.empty()) doc["manifest"] = manifest_to_json(f.manifest);
    doc["checksum"] = detail::checksum_of(doc);
    return doc;
}

inline std::string series_to_string(const SeriesFile& f) { return series_to_json(f).dump(1) + "\n"; }

// Parses a series file. A checksum mismatch throws ChecksumError unless
// tolerate_checksum is set, in which case it is reported in checksum_ok.
inline SeriesFile series_from_string(const std::string& text, bool tolerate_checksum = false) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SerializeError(std::string("invalid JSON: ") + e.what());
    }
    for (const char* key : {"version", "kind", "gmax", "convention", "layers", "checksum"})
        if (!doc.contains(key)) throw SerializeError(std::string("missing field ") + key);
    if (doc["convention"] != boundary_convention)
        throw SerializeError("boundary convention " + doc["convention"].dump() + " is not " + boundary_convention);
    SeriesFile f;
    f.checksum_ok = doc["checksum"] == detail::checksum_of(doc);
    if (!f.checksum_ok && !tolerate_checksum) throw ChecksumError("checksum mismatch");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "tau") f.series.kind = SeriesKind::tau;
    else if (kind == "free-energy") f.series.kind = SeriesKind::free_energy;
    else throw SerializeError("unknown kind " + kind);
    if (doc.contains("engine")) f.engine = doc["engine"].get<std::string>();
    if (doc.contains("eval_n")) f.eval_n = rational_from_json(doc["eval_n"]);
    if (doc.contains("manifest")) f.manifest = manifest_from_json(doc["manifest"]);
    for (const auto& l : doc["layers"]) f.series.layers.push_back(tpoly_from_json(l));
    if (f.series.gmax() != doc["gmax"].get<int>()) throw SerializeError("gmax does not match layer count");
    for (int g = 0; g <= f.series.gmax(); ++g)
        if (!f.series.layer(g).is_homogeneous(3 * g))
            throw SerializeError("layer " + std::to_string(g) + " is not of weight " + std::to_string(3 * g));
    return f;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SerializeError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw SerializeError("write to " + path + " failed");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SerializeError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_series(const std::string& path, const SeriesFile& f) { write_text_file(path, series_to_string(f)); }

inline SeriesFile read_series(const std::string& path, bool tolerate_checksum = false) {
    return series_from_string(read_text_file(path), tolerate_checksum);
}

// ---- correlator tables --------------------------------------------------------

inline json correlators_to_json(const std::vector<CorrelatorRow>& rows, int gmax) {
    json doc;
    doc["version"] = format_version;
    doc["kind"] = "correlators";
    doc["gmax"] = gmax;
    doc["convention"] = boundary_convention;
    json a = json::array();
    for (const auto& r : rows)
        a.push_back(json{{"alphas", r.key.alphas}, {"betas", r.key.betas}, {"h", r.key.h}, {"b", r.key.b},
                         {"value", r.value.to_string()}});
    doc["rows"] = std::move(a);
    return doc;
}

inline std::string correlators_to_text(const std::vector<CorrelatorRow>& rows) {
    auto list = [](const std::vector<int>& xs) {
        std::string s = "(";
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
        return s + ")";
    };
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"alphas", "betas", "h", "b", "value"});
    for (const auto& r : rows)
        cells.push_back({list(r.key.alphas), list(r.key.betas), std::to_string(r.key.h), std::to_string(r.key.b),
                         r.value.to_string()});
    std::array<std::size_t, 5> width{};
    for (const auto& c : cells)
        for (std::size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], c[i].size());
    std::ostringstream os;
    for (const auto& c : cells) {
        for (std::size_t i = 0; i < 5; ++i) {
            if (i + 1 < 5) os << std::left << std::setw(static_cast<int>(width[i])) << c[i];
            else os << c[i];
            os << (i + 1 < 5 ? "  " : "\n");
        }
    }
    return os.str();
}

// ---- manifests and reports ----------------------------------------------------

inline json manifest_to_json(const std::vector<LayerManifest>& manifest) {
    json a = json::array();
    for (const auto& m : manifest)
        a.push_back(json{{"g", m.g},
                         {"L_range", {m.L_range.first, m.L_range.second}},
                         {"M_range", {m.M_range.first, m.M_range.second}},
                         {"unknowns", m.unknowns},
                         {"equations", m.equations},
                         {"rank", m.rank},
                         {"unique", m.unique},
                         {"sampled", m.sampled},
                         {"status", m.status}});
    return a;
}

inline std::vector<LayerManifest> manifest_from_json(const json& j) {
    std::vector<LayerManifest> out;
    try {
        for (const auto& m : j) {
            LayerManifest x;
            x.g = m.at("g").get<int>();
            x.L_range = {m.at("L_range").at(0).get<int>(), m.at("L_range").at(1).get<int>()};
            x.M_range = {m.at("M_range").at(0).get<int>(), m.at("M_range").at(1).get<int>()};
            x.unknowns = m.at("unknowns").get<int>();
            x.equations = m.at("equations").get<int>();
            x.rank = m.at("rank").get<int>();
            x.unique = m.at("unique").get<bool>();
            x.sampled = m.at("sampled").get<bool>();
            x.status = m.at("status").get<std::string>();
            out.push_back(std::move(x));
        }
    } catch (const json::exception& e) {
        throw SerializeError(std::string("malformed manifest: ") + e.what());
    }
    return out;
}

inline json report_to_json(const VerificationReport& rep) {
    json a = json::array();
    for (const auto& e : rep.entries) {
        json row{{"operator", e.op.to_string()},
                 {"requested_weight", e.requested_weight},
                 {"max_weight_checked", e.max_weight_checked},
                 {"complete", e.complete},
                 {"pass", e.pass}};
        if (!e.residual.is_zero()) {
            const auto& [m, c] = *e.residual.terms().begin();
            row["first_residual"] = json{{"monomial", m.to_string()}, {"coeff", to_json(c)}};
        }
        a.push_back(std::move(row));
    }
    return a;
}

}  // namespace kptau
