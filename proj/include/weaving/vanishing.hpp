#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaving/rational.hpp"

namespace weaving {

// The inequality rules backing mutation steps. Each rule checks the integer
// hypotheses of one vanishing statement; conclusions are axioms here.
enum class Rule {
    HardVanishing,       // needs t outside [0, a]
    EasyVanishing,       // open window a < t < d+g-2j-1-b, plus the j=0 clause
    DivisorVanishing,    // t-free, needs the divisor condition (a > b)
    SymmetricVanishing,  // both degrees bounded by j, needs 2t < a-b
    ProjectorRange,      // 0 <= 2l <= k <= g-1
    KoszulRange,         // k >= 2l plus matching term ranks
    ExternalCitation,    // cited from outside, never certified here
};

inline std::string rule_name(Rule r) {
    switch (r) {
        case Rule::HardVanishing: return "hard_vanishing";
        case Rule::EasyVanishing: return "easy_vanishing";
        case Rule::DivisorVanishing: return "divisor_vanishing";
        case Rule::SymmetricVanishing: return "symmetric_vanishing";
        case Rule::ProjectorRange: return "projector_range";
        case Rule::KoszulRange: return "koszul_range";
        case Rule::ExternalCitation: return "external_citation";
    }
    return "?";
}

inline std::optional<Rule> rule_from_name(const std::string& s) {
    for (Rule r : {Rule::HardVanishing, Rule::EasyVanishing, Rule::DivisorVanishing,
                   Rule::SymmetricVanishing, Rule::ProjectorRange, Rule::KoszulRange,
                   Rule::ExternalCitation})
        if (rule_name(r) == s) return r;
    return std::nullopt;
}

enum class CertStatus { Certified, Rejected, External };

inline std::string cert_status_name(CertStatus s) {
    switch (s) {
        case CertStatus::Certified: return "certified";
        case CertStatus::Rejected: return "rejected";
        case CertStatus::External: return "external";
    }
    return "?";
}

struct Certificate {
    Rule rule = Rule::EasyVanishing;
    CertStatus status = CertStatus::Rejected;
    std::map<std::string, long long> params;  // g,d,j,a,b and integral t; or k,l
    std::vector<std::string> verified;        // inequalities that held
    std::vector<std::string> failures;        // inequalities that failed
    std::string source;                       // free-form provenance note

    bool certified() const { return status == CertStatus::Certified; }
};

inline void to_json(nlohmann::json& j, const Certificate& c) {
    j = nlohmann::json{{"rule", rule_name(c.rule)},
                       {"status", cert_status_name(c.status)},
                       {"params", c.params},
                       {"verifiedInequalities", c.verified},
                       {"failures", c.failures}};
    if (!c.source.empty()) j["source"] = c.source;
}

struct VanishingQuery {
    long long g = 2;
    long long d = 0;
    long long j = 0;
    long long a = 0;
    long long b = 0;
    Rat t{};
    bool has_t = true;
    bool barred_left = false;
    bool barred_right = false;
    std::string source;
};

namespace detail {

inline std::string ineq(const std::string& text, bool ok) { return text; }

struct Checker {
    Certificate cert;
    bool ok = true;

    explicit Checker(Rule r, const VanishingQuery& q) {
        cert.rule = r;
        cert.source = q.source;
        cert.params = {{"g", q.g}, {"d", q.d}, {"j", q.j}, {"a", q.a}, {"b", q.b}};
        if (q.has_t && q.t.is_integer()) cert.params["t"] = q.t.num();
    }

    void require(bool held, const std::string& text) {
        if (held)
            cert.verified.push_back(text);
        else {
            cert.failures.push_back(text);
            ok = false;
        }
    }

    Certificate done() {
        cert.status = ok ? CertStatus::Certified : CertStatus::Rejected;
        return cert;
    }
};

inline std::string show(const char* name, long long v) {
    return std::string(name) + "=" + std::to_string(v);
}

}  // namespace detail

// Certified iff 2 < d <= 2g+1, 1 <= j <= floor((d-1)/2), a,b <= d+g-2j-1,
// a-j-1 < t < d+g-2j-1-b, and t outside [0,a].
inline Certificate check_hard_vanishing(const VanishingQuery& q) {
    detail::Checker c(Rule::HardVanishing, q);
    if (!q.has_t || !q.t.is_integer()) {
        c.require(false, "t not integral");
        return c.done();
    }
    long long t = q.t.num();
    long long bound = q.d + q.g - 2 * q.j - 1;
    c.require(2 < q.d && q.d <= 2 * q.g + 1, "2 < d <= 2g+1");
    c.require(1 <= q.j && 2 * q.j <= q.d - 1, "1 <= j <= (d-1)/2");
    c.require(q.a <= bound, "a <= d+g-2j-1");
    c.require(q.b <= bound, "b <= d+g-2j-1");
    c.require(q.a - q.j - 1 < t, "a-j-1 < t");
    c.require(t < bound - q.b, "t < d+g-2j-1-b");
    c.require(t < 0 || t > q.a, "t not in [0,a]");
    return c.done();
}

// Certified iff either (d > 2 and 1 <= j <= floor((d-1)/2)) or (d > 0 and
// j = 0), and a < t < d+g-2j-1-b.
inline Certificate check_easy_vanishing(const VanishingQuery& q) {
    detail::Checker c(Rule::EasyVanishing, q);
    if (!q.has_t || !q.t.is_integer()) {
        c.require(false, "t not integral");
        return c.done();
    }
    long long t = q.t.num();
    bool range = (q.d > 2 && 1 <= q.j && 2 * q.j <= q.d - 1) || (q.d > 0 && q.j == 0);
    c.require(range, "(d>2, 1<=j<=(d-1)/2) or (d>0, j=0)");
    c.require(q.a < t, "a < t");
    c.require(t < q.d + q.g - 2 * q.j - 1 - q.b, "t < d+g-2j-1-b");
    return c.done();
}

// Certified iff 2 < d <= 2g+1, 1 <= j <= floor((d-1)/2), a <= j,
// b < d+g-2j-1, and a > b (the sufficient form of the divisor condition).
inline Certificate check_divisor_vanishing(const VanishingQuery& q) {
    detail::Checker c(Rule::DivisorVanishing, q);
    c.cert.params.erase("t");
    c.require(q.a > q.b, "divisor condition implied by a > b");
    c.require(2 < q.d && q.d <= 2 * q.g + 1, "2 < d <= 2g+1");
    c.require(1 <= q.j && 2 * q.j <= q.d - 1, "1 <= j <= (d-1)/2");
    c.require(q.a <= q.j, "a <= j");
    c.require(q.b < q.d + q.g - 2 * q.j - 1, "b < d+g-2j-1");
    return c.done();
}

// Certified iff 2 < d <= 2g+1, 1 <= j <= floor((d-1)/2), a and b both at
// most min(d+g-2j-1, j), a-j-1 < t < d+g-2j-1-b, and 2t < a-b. Also valid
// with the signed families on either side.
inline Certificate check_symmetric_vanishing(const VanishingQuery& q) {
    detail::Checker c(Rule::SymmetricVanishing, q);
    if (!q.has_t || !q.t.is_integer()) {
        c.require(false, "t not integral");
        return c.done();
    }
    long long t = q.t.num();
    long long bound = q.d + q.g - 2 * q.j - 1;
    long long cap = std::min(bound, q.j);
    c.require(2 < q.d && q.d <= 2 * q.g + 1, "2 < d <= 2g+1");
    c.require(1 <= q.j && 2 * q.j <= q.d - 1, "1 <= j <= (d-1)/2");
    c.require(q.a <= cap, "a <= min(d+g-2j-1, j)");
    c.require(q.b <= cap, "b <= min(d+g-2j-1, j)");
    c.require(q.a - q.j - 1 < t, "a-j-1 < t");
    c.require(t < bound - q.b, "t < d+g-2j-1-b");
    c.require(2 * t < q.a - q.b, "2t < a-b");
    return c.done();
}

// Certified iff 0 <= 2l <= k <= g-1. Backs projector moves: the projection
// past the degree-k tensor block sends the Z^k-twisted dual incidence
// subcategory of degree l into the right-hand kernel category.
inline Certificate check_projector_range(long long g, long long k, long long l,
                                         const std::string& source = {}) {
    Certificate c;
    c.rule = Rule::ProjectorRange;
    c.source = source;
    c.params = {{"g", g}, {"k", k}, {"l", l}};
    bool ok = true;
    auto req = [&](bool held, const char* text) {
        if (held)
            c.verified.push_back(text);
        else {
            c.failures.push_back(text);
            ok = false;
        }
    };
    req(0 <= l, "0 <= l");
    req(2 * l <= k, "2l <= k");
    req(k <= g - 1, "k <= g-1");
    c.status = ok ? CertStatus::Certified : CertStatus::Rejected;
    return c;
}

struct Obligation {
    std::optional<Rule> hint;  // empty means "auto"
    VanishingQuery query;
};

// Dispatcher. With a hint, checks exactly that rule; with "auto", tries the
// rules in the fixed order easy, hard, symmetric, divisor and returns the
// first certified result. On total failure the rejection aggregates every
// rule's failed inequalities.
inline Certificate certify(const Obligation& ob) {
    auto run_one = [&](Rule r) -> Certificate {
        switch (r) {
            case Rule::EasyVanishing: return check_easy_vanishing(ob.query);
            case Rule::HardVanishing: return check_hard_vanishing(ob.query);
            case Rule::SymmetricVanishing: return check_symmetric_vanishing(ob.query);
            case Rule::DivisorVanishing: return check_divisor_vanishing(ob.query);
            default: {
                Certificate c;
                c.rule = r;
                c.source = ob.query.source;
                c.status = r == Rule::ExternalCitation ? CertStatus::External
                                                       : CertStatus::Rejected;
                return c;
            }
        }
    };
    if (ob.hint) return run_one(*ob.hint);
    Certificate agg;
    agg.source = ob.query.source;
    for (Rule r : {Rule::EasyVanishing, Rule::HardVanishing, Rule::SymmetricVanishing,
                   Rule::DivisorVanishing}) {
        Certificate c = run_one(r);
        if (c.certified()) return c;
        for (const auto& f : c.failures) agg.failures.push_back(rule_name(r) + ": " + f);
    }
    agg.rule = Rule::EasyVanishing;
    agg.status = CertStatus::Rejected;
    agg.params = {{"g", ob.query.g}, {"d", ob.query.d}, {"j", ob.query.j},
                  {"a", ob.query.a}, {"b", ob.query.b}};
    if (ob.query.has_t && ob.query.t.is_integer()) agg.params["t"] = ob.query.t.num();
    return agg;
}

inline Certificate external_citation(const std::string& source) {
    Certificate c;
    c.rule = Rule::ExternalCitation;
    c.status = CertStatus::External;
    c.source = source;
    return c;
}

}  // namespace weaving
