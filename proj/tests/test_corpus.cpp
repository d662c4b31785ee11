#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "weaving/corpus.hpp"

using namespace weaving;

TEST_CASE("expression evaluator") {
    std::map<std::string, long long> env{{"g", 5}, {"i", 3}, {"k", 2}};
    CHECK(eval_expr("2*g-1", env) == 9);
    CHECK(eval_expr("(g-1)*(g-2)", env) == 12);
    CHECK(eval_expr("-k+i", env) == 1);
    CHECK(eval_expr("7/2", env) == 3);
    CHECK(eval_expr("-7/2", env) == -4);  // round-down division
    CHECK(eval_expr("g - (i - k)", env) == 4);
    CHECK_THROWS_AS(eval_expr("2*q", env), std::domain_error);
    CHECK_THROWS_AS(eval_expr("1+", env), std::domain_error);
}

TEST_CASE("condition evaluator") {
    std::map<std::string, long long> env{{"g", 5}, {"l", 3}};
    CHECK(eval_condition("l<=g-1", env));
    CHECK(eval_condition("l<g", env));
    CHECK(!eval_condition("l==g", env));
    CHECK(eval_condition("2*l>=g", env));
    CHECK(eval_condition("l!=0", env));
}

TEST_CASE("corpus loading and expansion") {
    std::istringstream in(
        R"({"rule":"easy_vanishing","source":"toy","params":{"j":"i","d":"2*g-1","a":"0","b":"0","t":"1"},"vars":[{"name":"i","from":"1","to":"g-1"}]})"
        "\n"
        R"({"rule":"projector_range","source":"toy ranges","params":{"k":"2*m","l":"m"},"vars":[{"name":"m","from":"0","to":"1"}],"valid_if":["m<=g"]})"
        "\n");
    auto entries = load_corpus(in);
    REQUIRE(entries.size() == 2);
    CorpusStats st = replay_corpus(entries, 5);
    CHECK(st.expanded == 4 + 2);
    CHECK(st.certified == st.expanded);
}

// Every parameter instantiation quoted in a proof must come back certified
// whenever its side conditions hold, with zero false rejects, across the
// whole desk-scale genus range.
TEST_CASE("bundled corpus replays clean") {
    auto entries = load_corpus_file(std::string(WEAVING_SOURCE_DIR) +
                                    "/data/proof_instantiations.jsonl");
    CHECK(entries.size() >= 20);
    for (long long g = 3; g <= 12; ++g) {
        CorpusStats st = replay_corpus(entries, g);
        CHECK(st.expanded > 0);
        if (!st.rejects.empty()) {
            nlohmann::json j = st.rejects.front();
            INFO("first reject at g=", g, ": ", j.dump());
        }
        CHECK(st.certified == st.expanded);
    }
}
