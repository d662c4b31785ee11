#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weaving/closed_forms.hpp"
#include "weaving/event.hpp"
#include "weaving/twill.hpp"

using namespace weaving;

static Block mk(int id, int k, KernelExpr ker) { return Block{id, k, ker, Ambient{false, 4}}; }

TEST_CASE("apply_event shape checks") {
    Decomposition dec;
    dec.blocks = {mk(1, 0, KernelExpr::line()), mk(2, 1, KernelExpr::d_sheaf(1)),
                  mk(3, 2, KernelExpr::d_sheaf(2))};
    SUBCASE("span mismatch names the offender") {
        Event e;
        e.span_begin = 0;
        e.pre_ids = {1, 3};
        e.post_ids = {3, 1};
        CHECK_THROWS_WITH_AS(apply_event(dec, e),
                             doctest::Contains("expected id 3, found id 2"), EventError);
    }
    SUBCASE("post ids must be a permutation") {
        Event e;
        e.span_begin = 0;
        e.pre_ids = {1, 2};
        e.post_ids = {1, 7};
        CHECK_THROWS_AS(apply_event(dec, e), EventError);
    }
    SUBCASE("a permute swaps positions only") {
        Event e;
        e.kind = EventKind::Permute;
        e.span_begin = 1;
        e.pre_ids = {2, 3};
        e.post_ids = {3, 2};
        apply_event(dec, e);
        CHECK(dec.blocks[1].id == 3);
        CHECK(dec.blocks[2].id == 2);
        CHECK(dec.blocks[1].kernel == KernelExpr::d_sheaf(2));
    }
    SUBCASE("boundaries must be sorted and in range") {
        Event e;
        e.boundaries_set = std::vector<std::size_t>{2, 1};
        CHECK_THROWS_AS(apply_event(dec, e), EventError);
    }
}

TEST_CASE("diff") {
    Decomposition a = twill_stopped_list(5);
    SUBCASE("identical lists compare empty") { CHECK(diff(a, a).empty()); }
    SUBCASE("an off-by-one boundary is reported") {
        Decomposition b = a;
        b.boundaries[0] += 1;
        DiffReport r = diff(a, b);
        REQUIRE(!r.empty());
        CHECK(r.entries[0].what.find("boundaries") != std::string::npos);
    }
    SUBCASE("a kernel mismatch is reported by position") {
        Decomposition b = a;
        b.blocks[3].kernel.twist = b.blocks[3].kernel.twist + PicElt::of_mn(0, 1);
        CHECK(!diff(a, b).empty());
    }
    SUBCASE("projective-bundle twists compare up to source pullbacks") {
        long long g = 5;
        Block x = mk(1, (int)(g - 1), KernelExpr::d_sheaf((int)(g - 1)));
        Block y = mk(2, (int)(g - 1),
                     KernelExpr::d_sheaf((int)(g - 1), PicElt::of_mn(2, 2 * g - 4)));
        x.ambient = y.ambient = Ambient{false, g - 1};
        CHECK(kernel_equivalent(x, y));
        // away from the projective-bundle level the twist matters
        x.ambient = y.ambient = Ambient{false, g - 2};
        CHECK(!kernel_equivalent(x, y));
    }
}

TEST_CASE("braid word") {
    SUBCASE("an empty log gives the empty word") {
        EventLog log;
        CHECK(braid_word(log).empty());
    }
    SUBCASE("a full reversal contributes every pair once") {
        Event e;
        e.pre_ids = {1, 2, 3, 4};
        e.post_ids = {4, 3, 2, 1};
        std::vector<BraidLetter> letters;
        braid_letters_of(e, letters);
        CHECK(letters.size() == 6);  // C(4,2)
    }
    SUBCASE("an orthogonal crossing leaves both kernels untouched") {
        Event e;
        e.kind = EventKind::Permute;
        e.pre_ids = {1, 2};
        e.post_ids = {2, 1};
        std::vector<BraidLetter> letters;
        braid_letters_of(e, letters);
        REQUIRE(letters.size() == 1);
        CHECK(e.kernel_updates.empty());
        // convention: the leftward mover goes over
        CHECK(letters[0].over_id == 2);
        CHECK(letters[0].under_id == 1);
    }
    SUBCASE("a rewritten kernel goes under") {
        Event e;
        e.kind = EventKind::ChainMutation;
        e.pre_ids = {1, 2};
        e.post_ids = {2, 1};
        e.kernel_updates[1] = KernelExpr::line(PicElt::of_mn(0, 1));
        std::vector<BraidLetter> letters;
        braid_letters_of(e, letters);
        REQUIRE(letters.size() == 1);
        CHECK(letters[0].under_id == 1);
        CHECK(letters[0].over_id == 2);
    }
}

TEST_CASE("event log serialization replays byte for byte") {
    long long g = 4;
    TwillResult r1 = twill_run(g, TwillMode::Theorem);
    std::string log1 = r1.log.to_jsonl();

    // replay the serialized log from the empty decomposition
    Decomposition dec;
    for (const auto& e : r1.log.events) apply_event(dec, e);
    nlohmann::json snap_replayed = dec;
    nlohmann::json snap_direct = r1.dec;
    CHECK(snap_replayed.dump() == snap_direct.dump());

    TwillResult r2 = twill_run(g, TwillMode::Theorem);
    CHECK(log1 == r2.log.to_jsonl());
}

TEST_CASE("strand conservation") {
    for (long long g = 2; g <= 12; ++g) {
        Decomposition census = twill_census(g);
        CHECK((long long)census.blocks.size() == g * (3 * g - 1) / 2);
    }
    CHECK(strand_count(5) == 35);
}
