#include <nlohmann/json.hpp>

#include "dops/copoly.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

namespace {

using nlohmann::json;

json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j, const char* where) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw Error(std::string("JSON: expected rational string at ") + where);
}

std::vector<Rational> rational_row(const json& j, const char* where) {
    if (!j.is_array()) throw Error(std::string("JSON: expected array at ") + where);
    std::vector<Rational> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(rational_from_json(e, where));
    return out;
}

}  // namespace

std::string to_json(const RecCoeffs& c) {
    json j;
    j["d"] = c.d;
    json beta = json::array();
    for (const auto& b : c.beta) beta.push_back(rational_to_json(b));
    j["beta"] = std::move(beta);
    json gamma = json::array();
    for (const auto& row : c.gamma) {
        json r = json::array();
        for (const auto& g : row) r.push_back(rational_to_json(g));
        gamma.push_back(std::move(r));
    }
    j["gamma"] = std::move(gamma);
    return j.dump();
}

std::string to_json(const Perturbation& p) {
    json j;
    j["k"] = p.k;
    json mu = json::array();
    for (const auto& m : p.mu) mu.push_back(rational_to_json(m));
    j["mu"] = std::move(mu);
    json eta = json::array();
    for (const auto& row : p.eta) {
        json r = json::array();
        for (const auto& e : row) r.push_back(rational_to_json(e));
        eta.push_back(std::move(r));
    }
    j["eta"] = std::move(eta);
    j["lambda"] = rational_to_json(p.lambda);
    return j.dump();
}

Perturbation perturbation_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("JSON: parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("k")) {
        throw Error("JSON: perturbation needs key k");
    }
    if (!j["k"].is_number_integer()) throw Error("JSON: k must be an integer");
    Perturbation p;
    p.k = j["k"].get<int>();
    if (j.contains("mu")) p.mu = rational_row(j["mu"], "mu");
    if (j.contains("eta")) {
        if (!j["eta"].is_array()) throw Error("JSON: eta must be an array of arrays");
        for (const auto& row : j["eta"]) p.eta.push_back(rational_row(row, "eta"));
    }
    if (j.contains("lambda")) p.lambda = rational_from_json(j["lambda"], "lambda");
    return p;
}

RecCoeffs reccoeffs_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("JSON: parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("d") || !j.contains("beta") || !j.contains("gamma")) {
        throw Error("JSON: recurrence descriptor needs keys d, beta, gamma");
    }
    if (!j["d"].is_number_integer()) throw Error("JSON: d must be an integer");
    RecCoeffs c;
    c.d = j["d"].get<int>();
    if (c.d < 1) throw Error("JSON: d must be >= 1");
    c.beta = rational_row(j["beta"], "beta");
    if (!j["gamma"].is_array()) throw Error("JSON: gamma must be an array of arrays");
    for (const auto& row : j["gamma"]) c.gamma.push_back(rational_row(row, "gamma"));
    if (static_cast<int>(c.gamma.size()) != c.d) {
        throw Error("JSON: gamma must hold exactly d rows");
    }
    return c;
}

}  // namespace dops
