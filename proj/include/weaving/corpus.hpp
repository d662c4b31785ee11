#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaving/vanishing.hpp"

namespace weaving {

// ---------------------------------------------------------------------------
// Tiny integer expression evaluator for the instantiation corpus: variables,
// + - * / (exact division expected), parentheses, unary minus.
// ---------------------------------------------------------------------------

namespace expr_detail {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    const std::map<std::string, long long>& env;

    void skip() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }

    long long parse_expr() {
        long long v = parse_term();
        for (;;) {
            skip();
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                char op = s[pos++];
                long long r = parse_term();
                v = op == '+' ? v + r : v - r;
            } else
                return v;
        }
    }

    long long parse_term() {
        long long v = parse_atom();
        for (;;) {
            skip();
            if (pos < s.size() && (s[pos] == '*' || s[pos] == '/')) {
                char op = s[pos++];
                long long r = parse_atom();
                if (op == '*')
                    v = v * r;
                else {
                    if (r == 0) throw std::domain_error("expr: division by zero");
                    // round-down division; ranges use it for floor(l/2)
                    long long q = v / r;
                    if (v % r != 0 && ((v < 0) != (r < 0))) --q;
                    v = q;
                }
            } else
                return v;
        }
    }

    long long parse_atom() {
        skip();
        if (pos >= s.size()) throw std::domain_error("expr: unexpected end");
        if (s[pos] == '(') {
            ++pos;
            long long v = parse_expr();
            skip();
            if (pos >= s.size() || s[pos] != ')') throw std::domain_error("expr: missing )");
            ++pos;
            return v;
        }
        if (s[pos] == '-') {
            ++pos;
            return -parse_atom();
        }
        if (std::isdigit((unsigned char)s[pos])) {
            long long v = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos]))
                v = v * 10 + (s[pos++] - '0');
            return v;
        }
        if (std::isalpha((unsigned char)s[pos]) || s[pos] == '_') {
            std::string name;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                name += s[pos++];
            auto it = env.find(name);
            if (it == env.end()) throw std::domain_error("expr: unknown variable " + name);
            return it->second;
        }
        throw std::domain_error("expr: unexpected character in '" + s + "'");
    }
};

}  // namespace expr_detail

inline long long eval_expr(const std::string& s, const std::map<std::string, long long>& env) {
    expr_detail::Parser p{s, 0, env};
    long long v = p.parse_expr();
    p.skip();
    if (p.pos != s.size()) throw std::domain_error("expr: trailing input in '" + s + "'");
    return v;
}

// Conditions are single comparisons: <expr> OP <expr> with OP one of
// <, <=, ==, !=, >=, >.
inline bool eval_condition(const std::string& s, const std::map<std::string, long long>& env) {
    static const char* ops[] = {"<=", ">=", "==", "!=", "<", ">"};
    for (const char* op : ops) {
        auto at = s.find(op);
        if (at == std::string::npos) continue;
        long long lhs = eval_expr(s.substr(0, at), env);
        long long rhs = eval_expr(s.substr(at + std::strlen(op)), env);
        std::string o = op;
        if (o == "<") return lhs < rhs;
        if (o == "<=") return lhs <= rhs;
        if (o == "==") return lhs == rhs;
        if (o == "!=") return lhs != rhs;
        if (o == ">=") return lhs >= rhs;
        return lhs > rhs;
    }
    throw std::domain_error("condition: no comparison in '" + s + "'");
}

// ---------------------------------------------------------------------------
// Corpus of quoted parameter instantiations
// ---------------------------------------------------------------------------

struct CorpusVar {
    std::string name;
    std::string from;
    std::string to;
};

struct CorpusEntry {
    Rule rule = Rule::EasyVanishing;
    std::string source;
    std::map<std::string, std::string> params;  // expressions in the vars and g
    std::vector<CorpusVar> vars;                // nested enumeration order
    std::vector<std::string> valid_if;          // side conditions
};

inline std::vector<CorpusEntry> load_corpus(std::istream& in) {
    std::vector<CorpusEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        CorpusEntry e;
        auto r = rule_from_name(j.at("rule").get<std::string>());
        if (!r) throw std::domain_error("corpus: unknown rule");
        e.rule = *r;
        e.source = j.value("source", "");
        for (auto& [k, v] : j.at("params").items()) e.params[k] = v.get<std::string>();
        for (auto& v : j.at("vars"))
            e.vars.push_back({v.at("name").get<std::string>(),
                              v.at("from").get<std::string>(), v.at("to").get<std::string>()});
        if (j.contains("valid_if"))
            for (auto& c : j.at("valid_if")) e.valid_if.push_back(c.get<std::string>());
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<CorpusEntry> load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("corpus: cannot open " + path);
    return load_corpus(in);
}

struct CorpusStats {
    long long expanded = 0;
    long long certified = 0;
    std::vector<Certificate> rejects;
};

namespace corpus_detail {

inline void expand(const CorpusEntry& e, std::map<std::string, long long>& env,
                   std::size_t depth, CorpusStats& st) {
    if (depth == e.vars.size()) {
        for (const auto& c : e.valid_if)
            if (!eval_condition(c, env)) return;
        Obligation ob;
        ob.hint = e.rule;
        ob.query.g = env.at("g");
        auto get = [&](const char* name, long long dflt) {
            auto it = e.params.find(name);
            return it == e.params.end() ? dflt : eval_expr(it->second, env);
        };
        if (e.rule == Rule::ProjectorRange) {
            Certificate c = check_projector_range(env.at("g"), get("k", 0), get("l", 0),
                                                  e.source);
            ++st.expanded;
            if (c.certified())
                ++st.certified;
            else
                st.rejects.push_back(std::move(c));
            return;
        }
        ob.query.d = get("d", 0);
        ob.query.j = get("j", 0);
        ob.query.a = get("a", 0);
        ob.query.b = get("b", 0);
        if (e.params.count("t"))
            ob.query.t = Rat(eval_expr(e.params.at("t"), env));
        else
            ob.query.has_t = false;
        ob.query.source = e.source;
        Certificate c = certify(ob);
        ++st.expanded;
        if (c.certified())
            ++st.certified;
        else
            st.rejects.push_back(std::move(c));
        return;
    }
    const CorpusVar& v = e.vars[depth];
    long long lo = eval_expr(v.from, env), hi = eval_expr(v.to, env);
    for (long long x = lo; x <= hi; ++x) {
        env[v.name] = x;
        expand(e, env, depth + 1, st);
    }
    env.erase(v.name);
}

}  // namespace corpus_detail

// Expands every entry for the given genus and batch-checks the quoted rule.
inline CorpusStats replay_corpus(const std::vector<CorpusEntry>& entries, long long g) {
    CorpusStats st;
    for (const auto& e : entries) {
        std::map<std::string, long long> env{{"g", g}};
        corpus_detail::expand(e, env, 0, st);
    }
    return st;
}

}  // namespace weaving
