#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaving/block.hpp"
#include "weaving/rational.hpp"

namespace weaving {

enum class EventKind {
    Permute,
    ChainMutation,
    WindowsEmbed,
    GlobalTwist,
    DualizeAll,
    ProjectorMove,
    DivisorRestrictionMove,
    SplitMegaBlock,
    Reorder,
};

inline std::string event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Permute: return "permute";
        case EventKind::ChainMutation: return "chain_mutation";
        case EventKind::WindowsEmbed: return "windows_embed";
        case EventKind::GlobalTwist: return "global_twist";
        case EventKind::DualizeAll: return "dualize_all";
        case EventKind::ProjectorMove: return "projector_move";
        case EventKind::DivisorRestrictionMove: return "divisor_restriction_move";
        case EventKind::SplitMegaBlock: return "split_mega_block";
        case EventKind::Reorder: return "reorder";
    }
    return "?";
}

// One mutation step. Events act on a contiguous span of the decomposition:
// `pre_ids` is the block order inside the span before the event, `post_ids`
// after. Kernel rewrites, appended blocks (windows embeds), ambient and tag
// updates, and boundary edits ride along. Everything needed to replay the
// event from a serialized log is here.
struct Event {
    EventKind kind = EventKind::Permute;
    std::string stage;       // twill | crosswarp | loom | weave | dual
    Rat time{};              // exact event time (twill); else the sequence no.
    int time_eps = 0;
    long long seq = 0;

    std::size_t span_begin = 0;
    std::vector<int> pre_ids;
    std::vector<int> post_ids;

    std::map<int, KernelExpr> kernel_updates;
    std::vector<Block> appended;                    // windows embeds
    std::optional<long long> ambient_level;         // windows embeds
    bool ambient_to_n = false;
    std::optional<std::vector<std::size_t>> boundaries_set;
    std::map<int, ResidueTag> tag_updates;
    bool weft = false;  // marks a fleeting intermediate kernel appearance
    std::string note;

    std::vector<Certificate> certificates;

    bool certified() const {
        for (const auto& c : certificates)
            if (c.status == CertStatus::Rejected) return false;
        return true;
    }
};

inline void to_json(nlohmann::json& j, const Event& e) {
    j = nlohmann::json{{"v", "v1"},
                       {"kind", event_kind_name(e.kind)},
                       {"stage", e.stage},
                       {"time", e.time.str()},
                       {"eps", e.time_eps},
                       {"seq", e.seq},
                       {"span", e.span_begin},
                       {"pre", e.pre_ids},
                       {"post", e.post_ids}};
    if (!e.kernel_updates.empty()) {
        nlohmann::json ku = nlohmann::json::object();
        for (const auto& [id, k] : e.kernel_updates) ku[std::to_string(id)] = k;
        j["kernelUpdates"] = ku;
    }
    if (!e.appended.empty()) j["appended"] = e.appended;
    if (e.ambient_level) j["ambientLevel"] = *e.ambient_level;
    if (e.ambient_to_n) j["ambientToN"] = true;
    if (e.boundaries_set) j["boundaries"] = *e.boundaries_set;
    if (!e.tag_updates.empty()) {
        nlohmann::json tu = nlohmann::json::object();
        for (const auto& [id, t] : e.tag_updates) tu[std::to_string(id)] = residue_tag_name(t);
        j["tags"] = tu;
    }
    if (e.weft) j["weft"] = true;
    if (!e.note.empty()) j["note"] = e.note;
    j["certificates"] = e.certificates;
}

struct EventLog {
    std::vector<Event> events;

    void push(Event e) {
        e.seq = (long long)events.size();
        events.push_back(std::move(e));
    }

    std::string to_jsonl() const {
        std::string out;
        for (const auto& e : events) {
            nlohmann::json j = e;
            out += j.dump();
            out += "\n";
        }
        return out;
    }
};

struct EventError : std::runtime_error {
    explicit EventError(const std::string& m) : std::runtime_error(m) {}
};

// Applies one event. Shape checks: the span's current content must match
// pre_ids exactly (chains and the other span events are contiguous by
// construction), every participant must exist, and ids are preserved.
inline void apply_event(Decomposition& dec, const Event& e) {
    if (e.span_begin + e.pre_ids.size() > dec.size())
        throw EventError("apply_event: span out of range");
    for (std::size_t i = 0; i < e.pre_ids.size(); ++i) {
        if (dec.blocks[e.span_begin + i].id != e.pre_ids[i])
            throw EventError("apply_event: span mismatch at position " +
                             std::to_string(e.span_begin + i) + " (expected id " +
                             std::to_string(e.pre_ids[i]) + ", found id " +
                             std::to_string(dec.blocks[e.span_begin + i].id) + ")");
    }
    if (e.post_ids.size() != e.pre_ids.size())
        throw EventError("apply_event: span size change");
    {
        std::set<int> a(e.pre_ids.begin(), e.pre_ids.end());
        std::set<int> b(e.post_ids.begin(), e.post_ids.end());
        if (a != b) throw EventError("apply_event: post ids are not a permutation");
    }

    std::map<int, Block> pool;
    for (std::size_t i = 0; i < e.pre_ids.size(); ++i)
        pool[e.pre_ids[i]] = dec.blocks[e.span_begin + i];
    for (std::size_t i = 0; i < e.post_ids.size(); ++i)
        dec.blocks[e.span_begin + i] = pool[e.post_ids[i]];

    for (const auto& [id, k] : e.kernel_updates) {
        Block* b = dec.find(id);
        if (!b) throw EventError("apply_event: kernel update for missing id");
        b->kernel = k;
    }
    for (const auto& [id, t] : e.tag_updates) {
        Block* b = dec.find(id);
        if (!b) throw EventError("apply_event: tag update for missing id");
        b->tag = t;
    }
    if (e.ambient_level) {
        for (auto& b : dec.blocks) b.ambient = Ambient{false, *e.ambient_level};
    }
    if (e.ambient_to_n) {
        for (auto& b : dec.blocks) b.ambient = Ambient{true, 0};
    }
    for (const auto& nb : e.appended) {
        if (dec.find(nb.id)) throw EventError("apply_event: duplicate id appended");
        dec.blocks.push_back(nb);
    }
    if (e.boundaries_set) {
        dec.boundaries = *e.boundaries_set;
        if (!dec.boundaries_valid()) throw EventError("apply_event: invalid boundaries");
    }
}

// One signed adjacent transposition of the braid word.
struct BraidLetter {
    std::size_t position = 0;  // crossing of positions (position, position+1)
    int over_id = 0;
    int under_id = 0;
    int sign = 1;
    long long event_seq = 0;
};

inline void to_json(nlohmann::json& j, const BraidLetter& l) {
    j = nlohmann::json{{"i", l.position},
                       {"over", l.over_id},
                       {"under", l.under_id},
                       {"sign", l.sign},
                       {"event", l.event_seq}};
}

// Expands one event's span permutation into adjacent transpositions by
// stably bubbling each post-order block into place; the letter count equals
// the inversion count of the permutation. The strand whose kernel the event
// rewrote goes under; between two rewritten (or two untouched) strands the
// leftward-moving one goes over.
inline void braid_letters_of(const Event& e, std::vector<BraidLetter>& out) {
    std::vector<int> cur = e.pre_ids;
    auto changed = [&](int id) { return e.kernel_updates.count(id) != 0; };
    for (std::size_t target = 0; target < e.post_ids.size(); ++target) {
        int want = e.post_ids[target];
        std::size_t at = target;
        while (cur[at] != want) ++at;
        for (std::size_t p = at; p > target; --p) {
            int left = cur[p - 1], right = cur[p];
            BraidLetter l;
            l.position = e.span_begin + p - 1;
            l.event_seq = e.seq;
            bool lc = changed(left), rc = changed(right);
            if (lc != rc) {
                l.under_id = lc ? left : right;
                l.over_id = lc ? right : left;
            } else {
                // the right block is the one moving left here
                l.over_id = right;
                l.under_id = left;
            }
            l.sign = (l.over_id == right) ? 1 : -1;
            out.push_back(l);
            std::swap(cur[p - 1], cur[p]);
        }
    }
}

inline std::vector<BraidLetter> braid_word(const EventLog& log) {
    std::vector<BraidLetter> out;
    for (const auto& e : log.events) braid_letters_of(e, out);
    return out;
}

}  // namespace weaving
