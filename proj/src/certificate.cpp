#include "obs/certificate.hpp"

#include <openssl/evp.h>

#include <json.hpp>
#include <set>

#include "obs/error.hpp"

namespace obs {

using nlohmann::json;

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw CertificateError(path + ": " + what); }

void expect_keys(const json& obj, const std::string& path, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) bad(path, "expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        allowed.insert(k);
        if (!obj.contains(k)) bad(path + "." + k, "missing field");
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) bad(path + "." + k, "unknown field");
}

int read_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) bad(path, "expected an integer");
    auto x = v.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) bad(path, "integer out of range");
    return static_cast<int>(x);
}

Rational read_rational(const json& v, const std::string& path) {
    if (!v.is_string()) bad(path, "expected a rational string \"a/b\"");
    const auto& text = v.get_ref<const std::string&>();
    Rational r;
    try {
        r = Rational::parse(text);
    } catch (const std::exception& e) {
        bad(path, "invalid rational \"" + text + "\" (" + e.what() + ")");
    }
    if (r.to_fraction() != text) bad(path, "rational \"" + text + "\" is not in lowest-terms a/b form");
    return r;
}

std::vector<int> read_ints(const json& v, const std::string& path) {
    if (!v.is_array()) bad(path, "expected an array");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_int(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

const json& read_array(const json& v, const std::string& path) {
    if (!v.is_array()) bad(path, "expected an array");
    return v;
}

void check_dims(int m, int g, const std::string& path) {
    try {
        check_dimensions(m, g);
    } catch (const std::exception& e) {
        bad(path, e.what());
    }
}

// ---- pair states ----

json write_state(const m2::PairState& s, bool with_sent) {
    json j;
    j["a"] = s.a;
    j["b"] = s.b;
    if (with_sent) j["sent"] = s.sent.items_descending();
    return j;
}

m2::PairState read_state(const json& v, const std::string& path, int m, int g, bool with_sent) {
    if (with_sent)
        expect_keys(v, path, {"a", "b", "sent"});
    else
        expect_keys(v, path, {"a", "b"});
    m2::PairState s{ItemMultiset(g), read_ints(v["a"], path + ".a"), read_ints(v["b"], path + ".b")};
    for (const char* side : {"a", "b"}) {
        const auto& loads = side[0] == 'a' ? s.a : s.b;
        if (static_cast<int>(loads.size()) != m) bad(path + "." + side, "expected " + std::to_string(m) + " loads");
        for (int x : loads)
            if (x < 0 || x > m * g) bad(path + "." + side, "load out of range");
    }
    if (with_sent) {
        auto items = read_ints(v["sent"], path + ".sent");
        for (std::size_t i = 0; i < items.size(); ++i)
            if (items[i] < 1 || items[i] > g) bad(path + ".sent[" + std::to_string(i) + "]", "item out of range");
        s.sent = ItemMultiset::from_items(g, items);
    }
    return s;
}

// ---- payloads ----

json payload_of(const LowerBoundCertificate& c) {
    json adv = json::array();
    for (const auto& [seq, p] : c.adversary.support) adv.push_back({{"instance", seq}, {"prob", p.to_fraction()}});
    return {{"m", c.m}, {"g", c.g}, {"value", c.value.to_fraction()}, {"adversary", adv}};
}

json payload_of(const m2::StrategyPairCertificate& c) {
    json table = json::array();
    for (const auto& d : c.table)
        table.push_back({{"state", write_state(d.state, !d.any_sent)}, {"item", d.item}, {"binA", d.bin_a}, {"binB", d.bin_b}});
    return {{"m", c.m}, {"g", c.g}, {"p", c.p.to_fraction()}, {"guarantee", c.guarantee.to_fraction()}, {"table", table}};
}

json payload_of(const m2::SweepCertificate& c) {
    json entries = json::array();
    for (const auto& e : c.entries) {
        json nodes = json::array();
        for (const auto& n : e.proof.nodes) {
            json node = {{"state", write_state(n.state, true)}, {"item", n.item}};
            if (n.item == 0) node["payoff"] = n.payoff.to_fraction();
            nodes.push_back(node);
        }
        entries.push_back({{"p", e.p.to_fraction()}, {"threshold", e.threshold.to_fraction()}, {"proof-tree", nodes}});
    }
    return {{"m", c.m}, {"g", c.g}, {"N", c.n}, {"target", c.target.to_fraction()}, {"entries", entries}};
}

LowerBoundCertificate read_lower(const json& p) {
    const std::string path = "payload";
    expect_keys(p, path, {"m", "g", "value", "adversary"});
    LowerBoundCertificate c;
    c.m = read_int(p["m"], path + ".m");
    c.g = read_int(p["g"], path + ".g");
    check_dims(c.m, c.g, path);
    c.value = read_rational(p["value"], path + ".value");
    c.adversary.m = c.m;
    c.adversary.g = c.g;
    const auto& adv = read_array(p["adversary"], path + ".adversary");
    for (std::size_t i = 0; i < adv.size(); ++i) {
        const std::string at = path + ".adversary[" + std::to_string(i) + "]";
        expect_keys(adv[i], at, {"instance", "prob"});
        c.adversary.support.emplace_back(read_ints(adv[i]["instance"], at + ".instance"),
                                         read_rational(adv[i]["prob"], at + ".prob"));
    }
    return c;
}

m2::StrategyPairCertificate read_pair(const json& p) {
    const std::string path = "payload";
    expect_keys(p, path, {"m", "g", "p", "guarantee", "table"});
    m2::StrategyPairCertificate c;
    c.m = read_int(p["m"], path + ".m");
    c.g = read_int(p["g"], path + ".g");
    check_dims(c.m, c.g, path);
    c.p = read_rational(p["p"], path + ".p");
    c.guarantee = read_rational(p["guarantee"], path + ".guarantee");
    const auto& table = read_array(p["table"], path + ".table");
    c.table.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string at = path + ".table[" + std::to_string(i) + "]";
        expect_keys(table[i], at, {"state", "item", "binA", "binB"});
        const json& st = table[i]["state"];
        bool exact = st.is_object() && st.contains("sent");
        m2::PairDecision d;
        d.state = read_state(st, at + ".state", c.m, c.g, exact);
        d.item = read_int(table[i]["item"], at + ".item");
        d.bin_a = read_int(table[i]["binA"], at + ".binA");
        d.bin_b = read_int(table[i]["binB"], at + ".binB");
        d.any_sent = !exact;
        c.table.push_back(std::move(d));
    }
    return c;
}

m2::SweepCertificate read_sweep(const json& p) {
    const std::string path = "payload";
    expect_keys(p, path, {"m", "g", "N", "target", "entries"});
    m2::SweepCertificate c;
    c.m = read_int(p["m"], path + ".m");
    c.g = read_int(p["g"], path + ".g");
    check_dims(c.m, c.g, path);
    c.n = read_int(p["N"], path + ".N");
    c.target = read_rational(p["target"], path + ".target");
    const auto& entries = read_array(p["entries"], path + ".entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string at = path + ".entries[" + std::to_string(i) + "]";
        expect_keys(entries[i], at, {"p", "threshold", "proof-tree"});
        m2::SweepEntry e;
        e.p = read_rational(entries[i]["p"], at + ".p");
        e.threshold = read_rational(entries[i]["threshold"], at + ".threshold");
        const auto& nodes = read_array(entries[i]["proof-tree"], at + ".proof-tree");
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const std::string nat = at + ".proof-tree[" + std::to_string(k) + "]";
            const json& n = nodes[k];
            bool leaf = n.is_object() && n.contains("item") && n["item"] == 0;
            if (leaf)
                expect_keys(n, nat, {"state", "item", "payoff"});
            else
                expect_keys(n, nat, {"state", "item"});
            m2::AdversaryMove mv;
            mv.state = read_state(n["state"], nat + ".state", c.m, c.g, true);
            mv.item = read_int(n["item"], nat + ".item");
            if (leaf) mv.payoff = read_rational(n["payoff"], nat + ".payoff");
            e.proof.nodes.push_back(std::move(mv));
        }
        c.entries.push_back(std::move(e));
    }
    return c;
}

}  // namespace

std::string certificate_kind(const Certificate& cert) {
    switch (cert.index()) {
        case 0: return "randomized-lower-bound";
        case 1: return "strategy-pair";
        default: return "sweep";
    }
}

std::string emit_certificate(const Certificate& cert) {
    json payload = std::visit([](const auto& c) { return payload_of(c); }, cert);
    std::string text = payload.dump();
    json env = {{"kind", certificate_kind(cert)},
                {"version", kCertificateVersion},
                {"digest", "sha256:" + sha256_hex(text)},
                {"payload", std::move(payload)}};
    return env.dump() + "\n";
}

Certificate load_certificate(const std::string& text) {
    json env;
    try {
        env = json::parse(text);
    } catch (const json::parse_error& e) {
        bad("$", std::string("not valid JSON (") + e.what() + ")");
    }
    expect_keys(env, "$", {"kind", "version", "digest", "payload"});
    if (!env["kind"].is_string()) bad("kind", "expected a string");
    if (read_int(env["version"], "version") != kCertificateVersion)
        bad("version", "unsupported version " + env["version"].dump());
    if (!env["digest"].is_string()) bad("digest", "expected a string");
    const json& payload = env["payload"];
    if (!payload.is_object()) bad("payload", "expected an object");
    if (env["digest"].get<std::string>() != "sha256:" + sha256_hex(payload.dump()))
        bad("digest", "does not match the payload");
    const auto kind = env["kind"].get<std::string>();
    if (kind == "randomized-lower-bound") return read_lower(payload);
    if (kind == "strategy-pair") return read_pair(payload);
    if (kind == "sweep") return read_sweep(payload);
    bad("kind", "unknown certificate kind \"" + kind + "\"");
}

VerifyReport verify_certificate(const Certificate& cert) {
    struct Visitor {
        VerifyReport operator()(const LowerBoundCertificate& c) const { return verify_lower_cert(c); }
        VerifyReport operator()(const m2::StrategyPairCertificate& c) const { return m2::verify_pair_cert(c); }
        VerifyReport operator()(const m2::SweepCertificate& c) const { return m2::verify_sweep_cert(c); }
    };
    return std::visit(Visitor{}, cert);
}

VerifyReport verify_certificate_text(const std::string& text) {
    Certificate cert;
    try {
        cert = load_certificate(text);
    } catch (const CertificateError& e) {
        VerifyReport r;
        r.ok = false;
        r.reason = e.what();
        return r;
    }
    VerifyReport r;
    try {
        r = verify_certificate(cert);
    } catch (const std::exception& e) {
        r.ok = false;
        r.reason = e.what();
    }
    r.checks.insert(r.checks.begin(), "digest and schema valid (" + certificate_kind(cert) + ")");
    return r;
}

}  // namespace obs
