#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "weaving/closed_forms.hpp"
#include "weaving/event.hpp"

namespace weaving {

// ---------------------------------------------------------------------------
// The two basic steps, as pattern rewrites on kernel sequences
// ---------------------------------------------------------------------------

// Obligations of the bullet-insertion step of size k on level i: the
// wide-window rule with j = i-l, d = 2g-1-2l, t = k, a = m, b = 0 over
// l <= k, m < k.
inline std::vector<Certificate> insert_bullet_obligations(long long g, long long i,
                                                          long long k,
                                                          const std::string& src) {
    std::vector<Certificate> out;
    for (long long l = 0; l <= k; ++l)
        for (long long m = 0; m < k; ++m) {
            VanishingQuery q;
            q.g = g;
            q.j = i - l;
            q.d = 2 * g - 1 - 2 * l;
            q.a = m;
            q.b = 0;
            q.t = Rat(k);
            q.source = src;
            out.push_back(certify(Obligation{Rule::EasyVanishing, q}));
        }
    return out;
}

// Obligations of the bullet-resolution step of size k on level i: the
// narrow-window rule with j = i-l, d = 2g-1-2l, t = l+m-k, a = m, b = 0
// over the cells with l+m < k, and the wide-window rule with j = i-k,
// d = 2g-1-2k, t = m, a = 0, b = l over l < k, 1 <= m <= k-l.
inline std::vector<Certificate> resolve_bullet_obligations(long long g, long long i,
                                                           long long k,
                                                           const std::string& src) {
    std::vector<Certificate> out;
    for (long long l = 0; l < k; ++l)
        for (long long m = 0; l + m < k; ++m) {
            VanishingQuery q;
            q.g = g;
            q.j = i - l;
            q.d = 2 * g - 1 - 2 * l;
            q.a = m;
            q.b = 0;
            q.t = Rat(l + m - k);
            q.source = src;
            out.push_back(certify(Obligation{Rule::HardVanishing, q}));
        }
    for (long long l = 0; l < k; ++l)
        for (long long m = 1; l + m <= k; ++m) {
            VanishingQuery q;
            q.g = g;
            q.j = i - k;
            q.d = 2 * g - 1 - 2 * k;
            q.a = 0;
            q.b = l;
            q.t = Rat(m);
            q.source = src;
            out.push_back(certify(Obligation{Rule::EasyVanishing, q}));
        }
    return out;
}

struct StepResult {
    std::vector<KernelExpr> seq;
    std::vector<Certificate> obligations;
};

// <F*^k, F*^{k-1}, ..., F*, O> (all twisted by T) -> <F*^{k-1}, ..., O, F.^k>
inline StepResult step_insert_bullet(const std::vector<KernelExpr>& seq, long long g,
                                     long long k, long long i) {
    if (k == 0) return {seq, {}};
    if ((long long)seq.size() != k + 1)
        throw std::domain_error("step_insert_bullet: pattern length mismatch");
    PicElt T = seq[0].twist;
    for (long long u = 0; u <= k; ++u) {
        const KernelExpr& x = seq[u];
        long long deg = k - u;
        bool ok = x.twist == T && x.shift == 0 &&
                  (deg == 0 ? x.base == KernelBase::Line
                            : (x.base == KernelBase::TensorFstar && x.index == deg));
        if (!ok) throw std::domain_error("step_insert_bullet: pattern mismatch");
    }
    StepResult r;
    for (long long u = 1; u <= k; ++u) r.seq.push_back(seq[u]);
    KernelExpr bullet = KernelExpr::f_bullet((int)k, T);
    bullet.shift = (int)k;
    r.seq.push_back(bullet);
    r.obligations = insert_bullet_obligations(g, i, k, "insert_bullet k=" + std::to_string(k));
    return r;
}

// <D^{k-1} Lbar^{-1}, ..., Lbar^{-k}, F.^k> (twist T on the bullet) ->
// <D^k, D^{k-1} Lbar^{-1}, ..., Lbar^{-k}>
inline StepResult step_resolve_bullet(const std::vector<KernelExpr>& seq, long long g,
                                      long long k, long long i) {
    if (k == 0) return {seq, {}};
    if ((long long)seq.size() != k + 1)
        throw std::domain_error("step_resolve_bullet: pattern length mismatch");
    if (seq.back().base != KernelBase::FBullet || seq.back().index != k)
        throw std::domain_error("step_resolve_bullet: missing bullet");
    PicElt T = seq.back().twist;
    PicElt lbar = PicElt::of_mn(0, -1);
    for (long long u = 0; u < k; ++u) {
        const KernelExpr& x = seq[u];
        long long deg = k - 1 - u;
        PicElt want = T + (-(u + 1)) * lbar;
        bool ok = x.twist == want && x.shift == 0 &&
                  (deg == 0 ? x.base == KernelBase::Line
                            : (x.base == KernelBase::DSheaf && x.index == deg));
        if (!ok) throw std::domain_error("step_resolve_bullet: pattern mismatch");
    }
    StepResult r;
    r.seq.push_back(incidence_kernel(k, T));
    for (long long u = 0; u < k; ++u) r.seq.push_back(seq[u]);
    r.obligations =
        resolve_bullet_obligations(g, i, k, "resolve_bullet k=" + std::to_string(k));
    return r;
}

// ---------------------------------------------------------------------------
// Stage runner
// ---------------------------------------------------------------------------

struct CrossWarpResult {
    Decomposition dec;
    EventLog log;
    // Strand coordinates per block id: w = the Lbar exponent, m = the source
    // degree. Both are preserved by the whole stage.
    std::map<int, std::pair<long long, long long>> coords;
    long long obligations = 0;
    long long certified = 0;
};

namespace crosswarp_detail {

struct Runner {
    long long g;
    long long level;
    Decomposition dec;
    EventLog log;
    std::map<int, std::pair<long long, long long>> wm;
    long long n_obl = 0, n_cert = 0;

    // structural bookkeeping for the stacking check, keyed (mega, w, m)
    std::map<std::tuple<int, long long, long long>, std::vector<int>> diag_ids;
    std::map<std::tuple<int, long long, long long>, std::vector<int>> run_ids;

    Runner(long long gg, Decomposition input) : g(gg), level(gg - 1), dec(std::move(input)) {}

    void absorb(std::vector<Certificate> cs, Event& e) {
        for (const auto& c : cs) {
            ++n_obl;
            if (c.certified()) ++n_cert;
        }
        e.certificates.insert(e.certificates.end(), cs.begin(), cs.end());
        if (!e.certified()) throw std::logic_error("crosswarp: rejected obligation");
    }

    void assign_coords() {
        auto ranges = dec.mega_ranges();
        if (ranges.size() != 3) throw std::logic_error("crosswarp: expected three mega-blocks");
        for (int mega = 0; mega < 3; ++mega) {
            long long cap = mega == 2 ? g - 1 : g - 2;
            std::size_t p = ranges[mega].first;
            for (long long c = 0; c <= cap; ++c)
                for (long long j = 0; j <= c; ++j) wm[dec.blocks[p++].id] = {j, c - j};
            if (p != ranges[mega].second)
                throw std::logic_error("crosswarp: mega-block size mismatch");
        }
    }

    // The top incidence block lives on a projective bundle where its twist
    // is only pinned up to a source pullback; rewrite it in the canonical
    // chart before peeling.
    void normalize_chart() {
        Decomposition expected = twill_stopped_list(g);
        Event e;
        e.kind = EventKind::GlobalTwist;
        e.stage = "crosswarp";
        e.time = Rat(0);
        e.note = "source-pullback chart normalization";
        for (std::size_t p = 0; p < dec.size(); ++p) {
            const Block& have = dec.blocks[p];
            const Block& want = expected.blocks[p];
            if (have.kernel.twist != want.kernel.twist) {
                KernelExpr k = have.kernel;
                k.twist = want.kernel.twist;
                e.kernel_updates[have.id] = k;
            }
        }
        if (e.kernel_updates.empty()) return;
        apply_event(dec, e);
        log.push(std::move(e));
    }

    // Phase A: peel each group <D^c, D^{c-1}Lbar^{-1}, ..., Lbar^{-c}> into
    // <Lbar^{-c}, F.^1 Lbar^{-(c-1)}, ..., F.^c> by repeated inverse
    // resolutions, largest degree first.
    void cascade_group(int mega, std::size_t seg, long long c) {
        for (long long m = c; m >= 1; --m) {
            long long w = c - m;
            Event e;
            e.kind = EventKind::ChainMutation;
            e.stage = "crosswarp";
            e.time = Rat((long long)log.events.size());
            e.span_begin = seg;
            for (long long u = 0; u <= m; ++u) e.pre_ids.push_back(dec.blocks[seg + u].id);
            for (long long u = 1; u <= m; ++u) e.post_ids.push_back(e.pre_ids[u]);
            e.post_ids.push_back(e.pre_ids[0]);
            const Block& head = dec.blocks[seg];
            if (head.source_degree != m)
                throw std::logic_error("crosswarp: cascade pattern mismatch");
            KernelExpr bullet = KernelExpr::f_bullet((int)m, head.kernel.twist);
            bullet.shift = (int)m;
            e.kernel_updates[head.id] = bullet;
            e.weft = true;
            e.note = "resolve_bullet inverse k=" + std::to_string(m);
            diag_ids[{mega, w, m}] =
                std::vector<int>(e.pre_ids.begin() + 1, e.pre_ids.end());
            absorb(resolve_bullet_obligations(g, level, m, e.note), e);
            apply_event(dec, e);
            log.push(std::move(e));
        }
        // stacking check, incidence side: the diagonal of the (w, m) step is
        // the once-twisted head of the (w+1, m-1) step followed by its own
        // diagonal
        for (long long m = c; m >= 2; --m) {
            long long w = c - m;
            const auto& d0 = diag_ids.at({mega, w, m});
            const auto& d1 = diag_ids.at({mega, w + 1, m - 1});
            std::vector<int> want;
            want.push_back(d0[0]);
            want.insert(want.end(), d1.begin(), d1.end());
            if (d0 != want) throw std::logic_error("crosswarp: stacking check failed");
        }
    }

    void reorder_mega(int mega, std::size_t mb, std::size_t me, long long cap) {
        std::vector<int> order;
        for (std::size_t p = mb; p < me; ++p) order.push_back(dec.blocks[p].id);
        std::vector<int> target = order;
        std::stable_sort(target.begin(), target.end(), [&](int a, int b) {
            auto [wa, ma] = wm.at(a);
            auto [wb, mbm] = wm.at(b);
            if (wa != wb) return wa > wb;
            return ma < mbm;
        });
        Event e;
        e.kind = EventKind::Reorder;
        e.stage = "crosswarp";
        e.time = Rat((long long)log.events.size());
        e.span_begin = mb;
        e.pre_ids = order;
        e.post_ids = target;
        e.note = "ladder assembly";
        std::map<int, std::size_t> tpos;
        for (std::size_t i = 0; i < target.size(); ++i) tpos[target[i]] = i;
        std::vector<Certificate> cs;
        for (std::size_t a = 0; a < order.size(); ++a)
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                if (tpos[order[a]] < tpos[order[b]]) continue;
                // order[b] precedes order[a] afterwards
                auto [wP, mP] = wm.at(order[b]);
                auto [wQ, mQ] = wm.at(order[a]);
                VanishingQuery q;
                q.g = g;
                q.d = 2 * g - 1;
                q.j = level;
                q.a = mP;
                q.b = mQ;
                q.t = Rat(wQ - wP);
                q.source = "ladder assembly";
                cs.push_back(certify(Obligation{Rule::HardVanishing, q}));
            }
        // the ladder's own semi-orthogonality certificates
        for (long long k = 1; k <= cap; ++k) {
            for (long long aa = 1; aa < k; ++aa)
                for (long long bb = 0; bb < aa; ++bb) {
                    VanishingQuery q;
                    q.g = g;
                    q.d = 2 * g - 1;
                    q.j = level;
                    q.a = aa;
                    q.b = bb;
                    q.has_t = false;
                    q.source = "ladder pair";
                    cs.push_back(certify(Obligation{Rule::DivisorVanishing, q}));
                }
            for (long long l = 0; l < k; ++l) {
                VanishingQuery q1;
                q1.g = g;
                q1.d = 2 * g - 1;
                q1.j = level;
                q1.a = 0;
                q1.b = l;
                q1.t = Rat(-k);
                q1.source = "ladder column";
                cs.push_back(certify(Obligation{Rule::HardVanishing, q1}));
                VanishingQuery q2;
                q2.g = g;
                q2.d = 2 * g - 1;
                q2.j = level;
                q2.a = l;
                q2.b = 0;
                q2.t = Rat(k);
                q2.source = "ladder column";
                cs.push_back(certify(Obligation{Rule::EasyVanishing, q2}));
            }
        }
        absorb(std::move(cs), e);
        apply_event(dec, e);
        log.push(std::move(e));
    }

    void resolve_mega(int mega, std::size_t mb, long long cap) {
        for (long long w = cap; w >= 0; --w) {
            std::size_t seg = mb + (std::size_t)((cap - w) * (cap - w + 1) / 2);
            for (long long m = 1; m <= cap - w; ++m) {
                Event e;
                e.kind = EventKind::ChainMutation;
                e.stage = "crosswarp";
                e.time = Rat((long long)log.events.size());
                e.span_begin = seg;
                for (long long u = 0; u <= m; ++u)
                    e.pre_ids.push_back(dec.blocks[seg + u].id);
                const Block& bullet = dec.blocks[seg + m];
                if (bullet.kernel.base != KernelBase::FBullet || bullet.kernel.index != m)
                    throw std::logic_error("crosswarp: resolution pattern mismatch");
                e.post_ids.push_back(bullet.id);
                for (long long u = 0; u < m; ++u) e.post_ids.push_back(e.pre_ids[u]);
                KernelExpr fs = tensor_fstar_kernel(m, bullet.kernel.twist);
                e.kernel_updates[bullet.id] = fs;
                e.note = "insert_bullet inverse k=" + std::to_string(m);
                if (m >= 2) {
                    std::vector<int> run(e.pre_ids.begin(), e.pre_ids.end() - 1);
                    if (run != run_ids.at({mega, w, m - 1}))
                        throw std::logic_error("crosswarp: run stacking check failed");
                }
                run_ids[{mega, w, m}] = e.post_ids;
                absorb(insert_bullet_obligations(g, level, m, e.note), e);
                apply_event(dec, e);
                log.push(std::move(e));
            }
        }
    }

    CrossWarpResult run() {
        assign_coords();
        normalize_chart();
        auto ranges = dec.mega_ranges();
        for (int mega = 0; mega < 3; ++mega) {
            long long cap = mega == 2 ? g - 1 : g - 2;
            std::size_t mb = ranges[mega].first;
            for (long long c = cap; c >= 1; --c)
                cascade_group(mega, mb + (std::size_t)(c * (c + 1) / 2), c);
            reorder_mega(mega, mb, ranges[mega].second, cap);
            resolve_mega(mega, mb, cap);
        }
        return {dec, log, wm, n_obl, n_cert};
    }
};

}  // namespace crosswarp_detail

// Stage 2: mutate the stopped stage-1 list into the dual-pair tensor-bundle
// list, one mega-block at a time. Hard-fails when the input is not the
// stage-1 closed form or the output is not the stage-2 closed form.
inline CrossWarpResult cross_warp_run(const Decomposition& input, long long g) {
    {
        DiffReport rep = diff(input, twill_stopped_list(g));
        if (!rep.empty())
            throw std::logic_error("cross_warp_run: unexpected input\n" + rep.str());
    }
    crosswarp_detail::Runner r(g, input);
    CrossWarpResult res = r.run();
    DiffReport rep = diff(res.dec, cross_warp_list(g));
    if (!rep.empty())
        throw std::logic_error("cross_warp_run: closed-form mismatch\n" + rep.str());
    return res;
}

}  // namespace weaving
