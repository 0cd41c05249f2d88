#pragma once

// Body files and report serialization.
//
// Body JSON:
//   { "n": 3, "f": "x1^2 + x2^2 + x3^2 - 4", "delta": 0.5,
//     "tolerances": { "boundary": 1e-9, "pivot": 1e-9 } }     // optional
//
// Other top-level keys (e.g. "name") are ignored.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dircurv/body.hpp"
#include "dircurv/error.hpp"

namespace dircurv {

struct BodySpec {
    int n = 0;
    std::string f;
    double delta = 0.0;
    Tolerances tol;
};

inline BodySpec body_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidBody, "body must be a JSON object");
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw Error(ErrorCode::InvalidBody, std::string("missing key \"") + key + "\"", key);
        return j.at(key);
    };
    BodySpec spec;
    const auto& n = require("n");
    if (!n.is_number_integer()) throw Error(ErrorCode::InvalidBody, "\"n\" must be an integer", "n");
    spec.n = n.get<int>();
    const auto& f = require("f");
    if (!f.is_string()) throw Error(ErrorCode::InvalidBody, "\"f\" must be a string", "f");
    spec.f = f.get<std::string>();
    const auto& delta = require("delta");
    if (!delta.is_number()) throw Error(ErrorCode::InvalidBody, "\"delta\" must be a number", "delta");
    spec.delta = delta.get<double>();
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) throw Error(ErrorCode::InvalidBody, "\"tolerances\" must be an object", "tolerances");
        for (const auto& [key, value] : t.items()) {
            if (!value.is_number())
                throw Error(ErrorCode::InvalidBody, "tolerance values must be numbers", "tolerances." + key);
            if (key == "boundary") spec.tol.boundary = value.get<double>();
            else if (key == "pivot") spec.tol.pivot = value.get<double>();
            else throw Error(ErrorCode::InvalidBody, "unknown tolerance \"" + key + "\"", "tolerances." + key);
        }
    }
    return spec;
}

// Defaults filled in, keys sorted: the form that gets hashed.
inline nlohmann::json canonical_json(const BodySpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    j["f"] = spec.f;
    j["delta"] = spec.delta;
    j["tolerances"] = {{"boundary", spec.tol.boundary}, {"pivot", spec.tol.pivot}};
    return j;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string body_hash(const BodySpec& spec) { return "fnv1a64:" + fnv1a64_hex(canonical_json(spec).dump()); }

inline ImplicitBody make_body(const BodySpec& spec) {
    return ImplicitBody(spec.n, parse(spec.f, spec.n), spec.delta, spec.tol);
}

inline BodySpec load_body_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open body file", path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidBody, std::string("malformed JSON: ") + e.what(), path);
    }
    return body_spec_from_json(j);
}

// Finite values as JSON numbers (nlohmann prints the shortest round-trip
// form, at most 17 significant digits); infinities as the strings "inf" and
// "-inf".
inline nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline nlohmann::ordered_json json_vector(std::span<const double> v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double x : v) arr.push_back(json_number(x));
    return arr;
}

}  // namespace dircurv
