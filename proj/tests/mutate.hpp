#pragma once

// Single-field certificate mutations. Each mutant must be rejected:
//  - any leaf value changed, digest left alone
//  - any leaf replaced by a value of the wrong type, digest recomputed
//  - any object field removed, digest recomputed
//  - an unknown field added to any object, digest recomputed

#include <functional>
#include <json.hpp>
#include <random>
#include <string>
#include <vector>

#include "obs/certificate.hpp"

struct MutationResults {
    std::size_t tried = 0;
    std::vector<std::string> accepted;  // descriptions of mutants that passed
    std::vector<std::string> unstructured;  // rejected without a reason
};

inline MutationResults mutation_suite(const std::string& text, std::size_t per_kind, unsigned seed) {
    using nlohmann::json;
    const json original = json::parse(text);
    std::vector<json::json_pointer> leaves, objects, fields;
    std::function<void(const json&, const json::json_pointer&)> walk = [&](const json& v, const json::json_pointer& at) {
        if (v.is_object()) {
            objects.push_back(at);
            for (const auto& [k, c] : v.items()) {
                fields.push_back(at / k);
                walk(c, at / k);
            }
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) walk(v[i], at / i);
        } else {
            leaves.push_back(at);
        }
    };
    walk(original, json::json_pointer());

    std::mt19937 rng(seed);
    auto sample = [&](const std::vector<json::json_pointer>& all) {
        std::vector<json::json_pointer> out = all;
        std::shuffle(out.begin(), out.end(), rng);
        if (out.size() > per_kind) out.resize(per_kind);
        return out;
    };
    // the digest itself is left alone when it is the mutated field
    auto reseal = [](json env, const json::json_pointer& at) {
        if (at.to_string() != "/digest" && env.contains("payload") && env["payload"].is_object())
            env["digest"] = "sha256:" + obs::sha256_hex(env["payload"].dump());
        return env.dump() + "\n";
    };
    MutationResults res;
    auto check = [&](const std::string& mutant, const std::string& what) {
        ++res.tried;
        auto rep = obs::verify_certificate_text(mutant);
        if (rep.ok)
            res.accepted.push_back(what);
        else if (rep.reason.empty())
            res.unstructured.push_back(what);
    };

    for (const auto& p : sample(leaves)) {
        json m = original;
        json& v = m[p];
        if (v.is_number_integer())
            v = v.get<long long>() + 1;
        else if (v.is_string())
            v = v.get<std::string>() + "0";
        else
            v = nullptr;
        check(m.dump() + "\n", "changed " + p.to_string());
    }
    for (const auto& p : sample(leaves)) {
        json m = original;
        m[p] = true;
        check(reseal(m, p), "retyped " + p.to_string());
    }
    for (const auto& p : sample(fields)) {
        json m = original;
        m[p.parent_pointer()].erase(p.back());
        check(reseal(m, p), "removed " + p.to_string());
    }
    for (const auto& p : sample(objects)) {
        json m = original;
        m[p]["unexpected"] = 0;
        check(reseal(m, p), "added field under " + p.to_string());
    }
    return res;
}
