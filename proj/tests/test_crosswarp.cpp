#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weaving/crosswarp.hpp"
#include "weaving/twill.hpp"

using namespace weaving;

TEST_CASE("bullet insertion step") {
    long long g = 5, i = 4;
    SUBCASE("degree one") {
        std::vector<KernelExpr> seq = {KernelExpr::tensor_fstar(1), KernelExpr::line()};
        StepResult r = step_insert_bullet(seq, g, 1, i);
        REQUIRE(r.seq.size() == 2);
        CHECK(r.seq[0] == KernelExpr::line());
        CHECK(r.seq[1].base == KernelBase::FBullet);
        CHECK(r.seq[1].index == 1);
        CHECK(r.seq[1].shift == 1);
        for (const auto& c : r.obligations) CHECK(c.certified());
    }
    SUBCASE("degree zero is the identity") {
        std::vector<KernelExpr> seq = {KernelExpr::line()};
        StepResult r = step_insert_bullet(seq, g, 0, i);
        CHECK(r.seq == seq);
        CHECK(r.obligations.empty());
    }
    SUBCASE("obligation count for the worked example") {
        auto obs = insert_bullet_obligations(g, 4, 3, "x");
        CHECK(obs.size() == 12);  // (l <= 3) x (m < 3)
        for (const auto& c : obs) CHECK(c.certified());
    }
    SUBCASE("pattern mismatch") {
        std::vector<KernelExpr> seq = {KernelExpr::d_sheaf(1), KernelExpr::line()};
        CHECK_THROWS_AS(step_insert_bullet(seq, g, 1, i), std::domain_error);
    }
}

TEST_CASE("bullet resolution step") {
    long long g = 5, i = 4;
    PicElt lbar = bundle_lbar(g);
    SUBCASE("degree one") {
        std::vector<KernelExpr> seq = {KernelExpr::line(-1 * lbar), KernelExpr::f_bullet(1)};
        StepResult r = step_resolve_bullet(seq, g, 1, i);
        REQUIRE(r.seq.size() == 2);
        CHECK(r.seq[0] == KernelExpr::d_sheaf(1));
        CHECK(r.seq[1] == KernelExpr::line(-1 * lbar));
        for (const auto& c : r.obligations) CHECK(c.certified());
    }
    SUBCASE("all obligations certified for the worked size") {
        auto obs = resolve_bullet_obligations(g, 4, 2, "x");
        CHECK(!obs.empty());
        for (const auto& c : obs) CHECK(c.certified());
    }
    SUBCASE("degree zero is the identity") {
        std::vector<KernelExpr> seq = {KernelExpr::line()};
        StepResult r = step_resolve_bullet(seq, g, 0, i);
        CHECK(r.seq == seq);
    }
    SUBCASE("missing bullet") {
        std::vector<KernelExpr> seq = {KernelExpr::line(-1 * lbar), KernelExpr::line()};
        CHECK_THROWS_AS(step_resolve_bullet(seq, g, 1, i), std::domain_error);
    }
}

TEST_CASE("the stage rewrites the stopped list onto the tensor closed form") {
    for (long long g = 2; g <= 8; ++g) {
        TwillResult tw = twill_run(g, TwillMode::Theorem);
        CrossWarpResult res = cross_warp_run(tw.dec, g);
        CHECK(diff(res.dec, cross_warp_list(g)).empty());
        CHECK((long long)res.dec.size() == strand_count(g));
        // mega-block sizes are preserved
        REQUIRE(res.dec.boundaries.size() == 2);
        CHECK(res.dec.boundaries[0] == (std::size_t)(g * (g - 1) / 2));
        CHECK(res.dec.boundaries[1] == (std::size_t)(g * (g - 1)));
        CHECK(res.obligations > 0);
        CHECK(res.obligations == res.certified);
    }
}

TEST_CASE("strands keep their twist and flip their base") {
    long long g = 5;
    TwillResult tw = twill_run(g, TwillMode::Theorem);
    CrossWarpResult res = cross_warp_run(tw.dec, g);
    for (const auto& b : tw.dec.blocks) {
        const Block* after = res.dec.find(b.id);
        REQUIRE(after != nullptr);
        if (b.source_degree == 0) {
            CHECK(after->kernel.base == KernelBase::Line);
        } else {
            CHECK(after->kernel.base == KernelBase::TensorFstar);
            CHECK(after->kernel.index == b.source_degree);
        }
        if (!(b.source_degree == (int)(g - 1)))  // the top block's twist is chart-relaxed
            CHECK(after->kernel.twist == b.kernel.twist);
    }
}

TEST_CASE("weft flags mark every fleeting appearance") {
    long long g = 4;
    TwillResult tw = twill_run(g, TwillMode::Theorem);
    CrossWarpResult res = cross_warp_run(tw.dec, g);
    long long wefts = 0, resolved = 0;
    for (const auto& e : res.log.events) {
        if (e.weft) ++wefts;
        for (const auto& [id, k] : e.kernel_updates)
            if (k.base == KernelBase::TensorFstar) ++resolved;
    }
    CHECK(wefts > 0);
    CHECK(wefts == resolved);  // every bullet created is later resolved
    // no bullet survives
    for (const auto& b : res.dec.blocks) CHECK(b.kernel.base != KernelBase::FBullet);
}

TEST_CASE("rejecting a corrupted input") {
    long long g = 4;
    TwillResult tw = twill_run(g, TwillMode::Theorem);
    Decomposition bad = tw.dec;
    bad.blocks[2].kernel.twist = bad.blocks[2].kernel.twist + PicElt::of_mn(1, 0);
    CHECK_THROWS_AS(cross_warp_run(bad, g), std::logic_error);
}
