#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weaving/vanishing.hpp"

using namespace weaving;

static VanishingQuery q(long long g, long long d, long long j, long long a, long long b,
                        Rat t) {
    VanishingQuery v;
    v.g = g;
    v.d = d;
    v.j = j;
    v.a = a;
    v.b = b;
    v.t = t;
    return v;
}

TEST_CASE("narrow-window rule") {
    // the section-twist instance: -5 < -1 < 4 and -1 outside [0, 0]
    CHECK(check_hard_vanishing(q(5, 9, 4, 0, 1, Rat(-1))).certified());
    SUBCASE("the excluded interval boundary rejects") {
        for (long long a = 0; a <= 3; ++a) {
            Certificate c = check_hard_vanishing(q(5, 9, 4, a, 0, Rat(0)));
            CHECK(!c.certified());
        }
    }
    SUBCASE("resolution-recipe instance") {
        // j = i-l, d = 2g-1-2l, t = l+m-k with i=4, l=1, m=2, k=4
        CHECK(check_hard_vanishing(q(5, 7, 3, 2, 0, Rat(-1))).certified());
    }
    SUBCASE("non-integral time rejects") {
        Certificate c = check_hard_vanishing(q(5, 9, 4, 0, 1, Rat(1, 2)));
        CHECK(!c.certified());
        CHECK(c.failures.at(0) == "t not integral");
    }
}

TEST_CASE("wide-window rule") {
    CHECK(check_easy_vanishing(q(5, 9, 4, 0, 0, Rat(1))).certified());
    SUBCASE("open boundary rejects") {
        CHECK(!check_easy_vanishing(q(5, 9, 4, 2, 0, Rat(2))).certified());
    }
    SUBCASE("the j = 0 clause allows every positive degree") {
        CHECK(check_easy_vanishing(q(5, 1, 0, 0, 0, Rat(1))).certified());
        CHECK(!check_easy_vanishing(q(5, 0, 0, 0, 0, Rat(1))).certified());
    }
    SUBCASE("certified times form an integer interval") {
        for (long long d : {5, 9})
            for (long long j = 0; j <= 2; ++j)
                for (long long a = 0; a <= 2; ++a)
                    for (long long b = 0; b <= 2; ++b) {
                        std::vector<long long> ok;
                        for (long long t = -12; t <= 12; ++t)
                            if (check_easy_vanishing(q(5, d, j, a, b, Rat(t))).certified())
                                ok.push_back(t);
                        for (std::size_t u = 1; u < ok.size(); ++u)
                            CHECK(ok[u] == ok[u - 1] + 1);
                    }
    }
}

TEST_CASE("divisor rule") {
    VanishingQuery v = q(5, 9, 4, 2, 1, Rat(0));
    v.has_t = false;
    CHECK(check_divisor_vanishing(v).certified());
    SUBCASE("equal degrees cannot imply the divisor condition") {
        VanishingQuery w = q(5, 9, 4, 2, 2, Rat(0));
        w.has_t = false;
        Certificate c = check_divisor_vanishing(w);
        CHECK(!c.certified());
        CHECK(c.failures.at(0) == "divisor condition implied by a > b");
    }
    SUBCASE("degree cap") {
        VanishingQuery w = q(5, 9, 4, 5, 1, Rat(0));
        w.has_t = false;
        CHECK(!check_divisor_vanishing(w).certified());
    }
}

TEST_CASE("symmetric rule") {
    SUBCASE("reordering instance for genus five") {
        // blocks (lambda, k) = (5, 1) before (6, 1): j1 = 3, j2 = 4, t = -1
        CHECK(check_symmetric_vanishing(q(5, 9, 4, 3, 4, Rat(-1))).certified());
    }
    SUBCASE("strict half-difference boundary") {
        CHECK(!check_symmetric_vanishing(q(5, 9, 4, 2, 0, Rat(1))).certified());
    }
    SUBCASE("trivial degrees certify for genus at least three") {
        for (long long g = 3; g <= 12; ++g)
            CHECK(check_symmetric_vanishing(q(g, 2 * g - 1, g - 1, 0, 0, Rat(-1))).certified());
    }
}

TEST_CASE("projector range rule") {
    CHECK(check_projector_range(5, 3, 1).certified());
    CHECK(!check_projector_range(5, 1, 1).certified());
    CHECK(!check_projector_range(5, 5, 0).certified());
    // first-mega reductions: k = 2(lambda-m)-(g-1) with l in {0, 1}
    long long g = 5, lam = 5, m = 1;
    long long k = 2 * (lam - m) - (g - 1);
    CHECK(k == 4);
    CHECK(check_projector_range(g, k, 0).certified());
    CHECK(check_projector_range(g, k, 1).certified());
    CHECK(check_projector_range(g, k - 2, 0).certified());
}

TEST_CASE("dispatcher") {
    SUBCASE("hints check exactly one rule") {
        Obligation ob;
        ob.hint = Rule::EasyVanishing;
        ob.query = q(5, 9, 4, 0, 0, Rat(1));
        CHECK(certify(ob).rule == Rule::EasyVanishing);
        CHECK(certify(ob).certified());
    }
    SUBCASE("auto takes the wide-window rule first") {
        Obligation ob;
        ob.query = q(5, 9, 4, 0, 0, Rat(1));
        Certificate c = certify(ob);
        CHECK(c.certified());
        CHECK(c.rule == Rule::EasyVanishing);
    }
    SUBCASE("negative times route to the narrow-window rule") {
        Obligation ob;
        ob.query = q(5, 9, 4, 0, 1, Rat(-1));
        Certificate c = certify(ob);
        CHECK(c.certified());
        CHECK(c.rule == Rule::HardVanishing);
    }
    SUBCASE("total failure aggregates") {
        Obligation ob;
        ob.query = q(5, 1, 1, 0, 0, Rat(0));
        Certificate c = certify(ob);
        CHECK(!c.certified());
        CHECK(c.failures.size() > 3);
    }
}

TEST_CASE("certificate serialization") {
    Certificate c = check_easy_vanishing(q(5, 9, 4, 0, 0, Rat(1)));
    nlohmann::json j = c;
    CHECK(j["rule"] == "easy_vanishing");
    CHECK(j["status"] == "certified");
    CHECK(j["params"]["d"] == 9);
    CHECK(j["verifiedInequalities"].size() >= 3);
}
