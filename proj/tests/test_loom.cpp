#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weaving/crosswarp.hpp"
#include "weaving/loom.hpp"
#include "weaving/twill.hpp"

using namespace weaving;

static Decomposition stage2(long long g) {
    return cross_warp_run(twill_run(g, TwillMode::Theorem).dec, g).dec;
}

TEST_CASE("helix twist exponents") {
    // first mega-block theta exponent: -(k+j) + (-2)(3-g) - (2g-5) = -(k+j+1)
    for (long long g = 2; g <= 12; ++g)
        for (long long k = 0; k <= g - 2; ++k)
            for (long long j = 0; j + k <= g - 2; ++j) {
                ZThetaExp e = z_theta_exponents(g, helix_twist(g, 0, j, k));
                CHECK(e.z == 3 + j + 2 * k - g);
                CHECK(e.theta == -(k + j + 1));
            }
    // the j = k = 0 block of the third family is Z^{1-g} theta
    for (long long g = 2; g <= 12; ++g) {
        ZThetaExp e = z_theta_exponents(g, helix_twist(g, 2, 0, 0));
        CHECK(e.z == 1 - g);
        CHECK(e.theta == 1);
    }
}

TEST_CASE("the three loom moves reach the four mega-block form") {
    for (long long g = 2; g <= 8; ++g) {
        LoomResult res = loom_run(stage2(g), g);
        CHECK(diff(res.dec, four_mega_list(g)).empty());
        CHECK(res.obligations == res.certified);
        auto ranges = res.dec.mega_ranges();
        REQUIRE(ranges.size() == 4);
        long long total = 0;
        for (auto [b, e] : ranges) total += (long long)(e - b);
        CHECK(total == strand_count(g));
        if (g == 5) {
            CHECK(ranges[0].second - ranges[0].first == 6);
            CHECK(ranges[1].second - ranges[1].first == 10);
            CHECK(ranges[2].second - ranges[2].first == 10);
            CHECK(ranges[3].second - ranges[3].first == 9);
        }
    }
}

TEST_CASE("reordering certifies every inversion and every degree tie") {
    long long g = 6;
    Decomposition in = stage2(g);
    LoomResult res = loom_run(in, g);
    long long reorders = 0, certs = 0;
    for (const auto& e : res.log.events) {
        if (e.kind != EventKind::Reorder) continue;
        ++reorders;
        // count inversions of the span permutation
        std::map<int, std::size_t> tpos;
        for (std::size_t i = 0; i < e.post_ids.size(); ++i) tpos[e.post_ids[i]] = i;
        long long inv = 0;
        for (std::size_t a = 0; a < e.pre_ids.size(); ++a)
            for (std::size_t b = a + 1; b < e.pre_ids.size(); ++b)
                if (tpos[e.pre_ids[a]] > tpos[e.pre_ids[b]]) ++inv;
        CHECK((long long)e.certificates.size() >= inv);
        for (const auto& c : e.certificates) {
            CHECK(c.certified());
            certs += 1;
        }
    }
    CHECK(reorders == 3);
    CHECK(certs > 0);
}

TEST_CASE("equal-degree ties use the narrow-window route") {
    long long g = 6;
    LoomResult res = loom_run(stage2(g), g);
    bool tie_seen = false, sym_seen = false;
    for (const auto& e : res.log.events) {
        if (e.kind != EventKind::Reorder) continue;
        for (const auto& c : e.certificates) {
            if (c.rule == Rule::HardVanishing) tie_seen = true;
            if (c.rule == Rule::SymmetricVanishing) sym_seen = true;
        }
    }
    CHECK(tie_seen);
    CHECK(sym_seen);
}

TEST_CASE("split moves the low tail to the front with the canonical twist") {
    long long g = 5;
    LoomResult res = loom_run(stage2(g), g);
    auto ranges = res.dec.mega_ranges();
    // mega-block I = omega_M-twist of the low lambda part of the old third family
    for (std::size_t p = ranges[0].first; p < ranges[0].second; ++p) {
        auto [mega, lam, k] = res.coords.at(res.dec.blocks[p].id);
        CHECK(mega == 0);
        CHECK(lam <= g - 2);
        ZThetaExp e = z_theta_exponents(g, res.dec.blocks[p].kernel.twist);
        CHECK(e.z == lam + 2 - g);
        CHECK(e.theta == -(lam - k + 1));
    }
    // mega-block IV keeps zero Z power exactly on the lambda = g-1 blocks
    for (std::size_t p = ranges[3].first; p < ranges[3].second; ++p) {
        auto [mega, lam, k] = res.coords.at(res.dec.blocks[p].id);
        ZThetaExp e = z_theta_exponents(g, res.dec.blocks[p].kernel.twist);
        CHECK((e.z == 0) == (lam == g - 1));
    }
}
