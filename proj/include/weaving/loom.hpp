#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "weaving/closed_forms.hpp"
#include "weaving/event.hpp"

namespace weaving {

struct LoomResult {
    Decomposition dec;
    EventLog log;
    // per block id: mega-block index (0..3 after the split), lambda, k
    std::map<int, std::tuple<int, long long, long long>> coords;
    long long obligations = 0;
    long long certified = 0;
};

namespace loom_detail {

struct Runner {
    long long g;
    Decomposition dec;
    EventLog log;
    std::map<int, std::pair<long long, long long>> jk;  // id -> (j, k): E-degree, helix k
    long long n_obl = 0, n_cert = 0;

    Runner(long long gg, Decomposition input) : g(gg), dec(std::move(input)) {}

    void absorb(std::vector<Certificate> cs, Event& e) {
        for (const auto& c : cs) {
            ++n_obl;
            if (c.certified()) ++n_cert;
        }
        e.certificates.insert(e.certificates.end(), cs.begin(), cs.end());
        if (!e.certified()) throw std::logic_error("loom: rejected reordering obligation");
    }

    void assign_coords() {
        auto ranges = dec.mega_ranges();
        for (int mega = 0; mega < 3; ++mega) {
            long long cap = mega == 2 ? g - 1 : g - 2;
            std::size_t p = ranges[mega].first;
            for (long long k = cap; k >= 0; --k)
                for (long long j = cap - k; j >= 0; --j) jk[dec.blocks[p++].id] = {j, k};
            if (p != ranges[mega].second)
                throw std::logic_error("loom: mega-block size mismatch");
        }
    }

    // Full helix rotations followed by the simplifying pullback twist, then
    // the change of basis to the Poincare family.
    void helix_and_rewrite() {
        PicElt w1 = (3 - g) * bundle_omega_m(g);
        PicElt w2 = (-(2 * g - 5)) * bundle_theta(g);
        for (PicElt tw : {w1, w2}) {
            Event e;
            e.kind = EventKind::GlobalTwist;
            e.stage = "loom";
            e.time = Rat((long long)log.events.size());
            e.note = tw == w1 ? "helix rotations" : "pullback simplification twist";
            for (const auto& b : dec.blocks)
                e.kernel_updates[b.id] = global_twist(b.kernel, tw);
            apply_event(dec, e);
            log.push(std::move(e));
        }
        Event e;
        e.kind = EventKind::GlobalTwist;
        e.stage = "loom";
        e.time = Rat((long long)log.events.size());
        e.note = "rebase dual-pair family onto the Poincare family";
        for (const auto& b : dec.blocks)
            if (b.kernel.base == KernelBase::TensorFstar)
                e.kernel_updates[b.id] = rewrite_f_to_e(b.kernel, g);
        apply_event(dec, e);
        log.push(std::move(e));

        DiffReport rep = diff(dec, helix_list(g));
        if (!rep.empty())
            throw std::logic_error("loom: helix closed form mismatch\n" + rep.str());
    }

    void reorder_by_lambda() {
        auto ranges = dec.mega_ranges();
        for (int mega = 0; mega < 3; ++mega) {
            auto [mb, me] = ranges[mega];
            std::vector<int> order;
            for (std::size_t p = mb; p < me; ++p) order.push_back(dec.blocks[p].id);
            std::vector<int> target = order;
            auto lam = [&](int id) {
                auto [j, k] = jk.at(id);
                return 2 * k + j;
            };
            std::stable_sort(target.begin(), target.end(), [&](int a, int b) {
                if (lam(a) != lam(b)) return lam(a) > lam(b);
                return jk.at(a).second > jk.at(b).second;
            });
            Event e;
            e.kind = EventKind::Reorder;
            e.stage = "loom";
            e.time = Rat((long long)log.events.size());
            e.span_begin = mb;
            e.pre_ids = order;
            e.post_ids = target;
            e.note = "order by total degree";
            std::map<int, std::size_t> tpos;
            for (std::size_t i = 0; i < target.size(); ++i) tpos[target[i]] = i;
            std::vector<Certificate> cs;
            for (std::size_t a = 0; a < order.size(); ++a)
                for (std::size_t b = a + 1; b < order.size(); ++b) {
                    bool inverted = tpos[order[a]] > tpos[order[b]];
                    // "1" is the old-earlier block, "2" the one now before it
                    auto [j1, k1] = jk.at(order[a]);
                    auto [j2, k2] = jk.at(order[b]);
                    long long l1 = 2 * k1 + j1, l2 = 2 * k2 + j2;
                    VanishingQuery q;
                    q.g = g;
                    q.d = 2 * g - 1;
                    q.j = g - 1;
                    q.source = "total-degree reordering";
                    if (inverted) {
                        if (l1 >= l2) throw std::logic_error("loom: unexpected inversion");
                        q.a = j1;
                        q.b = j2;
                        q.t = Rat((k1 + j1) - (k2 + j2));
                        cs.push_back(certify(Obligation{Rule::SymmetricVanishing, q}));
                    } else if (l1 == l2 && k1 > k2) {
                        // an equal-degree pair never swaps, but the claimed
                        // order still owes its one-sided orthogonality
                        q.a = j1;
                        q.b = j2;
                        q.t = Rat(k2 - k1);
                        cs.push_back(certify(Obligation{Rule::HardVanishing, q}));
                    }
                }
            absorb(std::move(cs), e);
            apply_event(dec, e);
            log.push(std::move(e));
        }
        DiffReport rep = diff(dec, lambda_ordered_list(g));
        if (!rep.empty())
            throw std::logic_error("loom: reordered closed form mismatch\n" + rep.str());
    }

    void split_four() {
        auto ranges = dec.mega_ranges();
        auto [mb, me] = ranges[2];
        // blocks are sorted by lambda descending; cut off the lambda <= g-2 tail
        std::size_t cut = mb;
        while (cut < me) {
            auto [j, k] = jk.at(dec.blocks[cut].id);
            if (2 * k + j <= g - 2) break;
            ++cut;
        }
        {
            Event e;
            e.kind = EventKind::SplitMegaBlock;
            e.stage = "loom";
            e.time = Rat((long long)log.events.size());
            e.boundaries_set = {ranges[0].second, ranges[1].second, cut};
            e.note = "cut the last mega-block at the pullback boundary";
            apply_event(dec, e);
            log.push(std::move(e));
        }
        // twist the low tail by the canonical class and rotate it to the front
        Event e;
        e.kind = EventKind::GlobalTwist;
        e.stage = "loom";
        e.time = Rat((long long)log.events.size());
        e.span_begin = 0;
        std::vector<int> pre, tail;
        for (std::size_t p = 0; p < dec.size(); ++p) pre.push_back(dec.blocks[p].id);
        for (std::size_t p = cut; p < me; ++p) tail.push_back(dec.blocks[p].id);
        std::vector<int> post = tail;
        for (std::size_t p = 0; p < cut; ++p) post.push_back(dec.blocks[p].id);
        e.pre_ids = pre;
        e.post_ids = post;
        PicElt wM = bundle_omega_m(g);
        for (int id : tail) e.kernel_updates[id] = global_twist(dec.find(id)->kernel, wM);
        std::size_t tn = tail.size();
        e.boundaries_set = {tn, tn + ranges[0].second, tn + ranges[1].second};
        e.note = "serre rotation of the low tail to the front";
        apply_event(dec, e);
        log.push(std::move(e));

        DiffReport rep = diff(dec, four_mega_list(g));
        if (!rep.empty())
            throw std::logic_error("loom: four mega-block closed form mismatch\n" + rep.str());
    }

    LoomResult run() {
        assign_coords();
        helix_and_rewrite();
        reorder_by_lambda();
        split_four();
        LoomResult res;
        res.dec = dec;
        res.log = log;
        res.obligations = n_obl;
        res.certified = n_cert;
        auto ranges = dec.mega_ranges();
        for (int mega = 0; mega < 4; ++mega)
            for (std::size_t p = ranges[mega].first; p < ranges[mega].second; ++p) {
                auto [j, k] = jk.at(dec.blocks[p].id);
                res.coords[dec.blocks[p].id] = {mega, 2 * k + j, k};
            }
        return res;
    }
};

}  // namespace loom_detail

// Stage 3: helix rotations with the change to the Poincare family, the
// total-degree reordering with per-swap certificates, and the split into
// four mega-blocks.
inline LoomResult loom_run(const Decomposition& input, long long g) {
    {
        DiffReport rep = diff(input, cross_warp_list(g));
        if (!rep.empty()) throw std::logic_error("loom_run: unexpected input\n" + rep.str());
    }
    loom_detail::Runner r(g, input);
    return r.run();
}

}  // namespace weaving
