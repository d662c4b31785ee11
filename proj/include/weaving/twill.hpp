#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "weaving/closed_forms.hpp"
#include "weaving/event.hpp"
#include "weaving/rational.hpp"

namespace weaving {

// ---------------------------------------------------------------------------
// Strand kinematics
// ---------------------------------------------------------------------------

struct Strand {
    long long k = 0;
    long long s = 0;
    int id = 0;
};

inline std::vector<Strand> twill_strands(long long g) {
    std::vector<Strand> out;
    for (long long k = 0; k <= g - 1; ++k)
        for (long long s = 0; s <= 3 * g - 3 - 3 * k; ++s)
            out.push_back({k, s, strand_id(g, k, s)});
    return out;
}

// Trajectory value x = s / (t - k); defined for t > k.
inline Rat trajectory(long long k, long long s, Rat t) {
    if (!(Rat(k) < t)) throw std::domain_error("trajectory: t must exceed k");
    return Rat(s) / (t - Rat(k));
}

// Round-down of the trajectory at a one-sided time. The trajectory strictly
// decreases for s > 0, so just after a crossing an integer value has already
// been passed.
inline long long trajectory_floor(long long k, long long s, Rat t, int eps) {
    Rat x = trajectory(k, s, t);
    long long f = x.floor();
    if (eps > 0 && x.is_integer()) return f - 1;
    return f;
}

inline long long level_of(Rat t, int eps) {
    long long f = t.floor();
    if (eps < 0 && t.is_integer()) return f - 1;
    return f;
}

// The wandering twist: O(floor(s/(t-k)), s + floor(.)(k-1)) below the
// strand's own level, O(s, sk) on it.
inline PicElt twist_bundle(long long g, long long k, long long s, Rat t, int eps = 0) {
    long long lvl = level_of(t, eps);
    if (lvl < k || lvl > g - 1) throw std::domain_error("twist_bundle: level out of range");
    if (s < 0 || s > 3 * g - 3 - 3 * k) throw std::domain_error("twist_bundle: s out of range");
    if (lvl == k) return PicElt::of_mn(s, s * k);
    long long q = s == 0 ? 0 : trajectory_floor(k, s, t, eps);
    return PicElt::of_mn(q, s + q * (k - 1));
}

// Wall weight bound for the windows embedding at level i: the degree-k
// strand with twist L fits iff weight(L, i) + k <= i - 1.
inline bool windows_check(long long g, long long i, long long k, long long s) {
    if (i <= k) throw std::domain_error("windows_check: block must live below the wall");
    long long w = (i - k) >= 1 ? ((s % (i - k)) + (i - k)) % (i - k) : 0;
    if (i - k == 1) w = 0;
    return w + k <= i - 1;
}

// Stopping time: the last moment a strand's twist can still change, solved
// from s/(t-k) = floor(s/(g-1-k)) + (j+k)/(g-1) with
// j = s - floor(s/(g-1-k))(g-1-k). Strands with s = 0 never move and stop
// at birth.
inline Rat stopping_time(long long g, long long k, long long s) {
    if (k < 0 || k > g - 2 || s < 0 || s > 3 * g - 4 - 3 * k)
        throw std::domain_error("stopping_time: index out of range");
    if (s == 0) return Rat(k);
    long long q = s / (g - 1 - k);
    long long j = s - q * (g - 1 - k);
    Rat xstar = Rat(q) + Rat(j + k, g - 1);
    return Rat(k) + Rat(s) / xstar;
}

// Chain membership starting from a minimal (k, s): the consecutive strands
// through the same integer point, down to the current level (the level
// strand enters through the 0/0 convention when t is an integer).
inline std::vector<Strand> chain_participants(long long g, long long n, long long k,
                                              long long s, Rat t) {
    Rat x = trajectory(k, s, t);
    if (x != Rat(n)) throw std::domain_error("chain_participants: n != s/(t-k)");
    if (!x.is_integer()) throw std::domain_error("chain_participants: non-integer slope");
    if (k > 0 && s + n <= 3 * g - 3 - 3 * (k - 1))
        throw std::domain_error("chain_participants: k not minimal");
    long long lvl = t.floor();
    std::vector<Strand> out;
    for (long long u = 0; k + u <= lvl; ++u) {
        long long kk = k + u, ss = s - u * n;
        if (ss < 0 || ss > 3 * g - 3 - 3 * kk) break;
        out.push_back({kk, ss, strand_id(g, kk, ss)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Crossing schedule
// ---------------------------------------------------------------------------

enum class TwillGroupKind { Embed, Chain, Permute };

struct TwillGroup {
    Rat t;
    Rat x;  // unused for embeds
    TwillGroupKind kind = TwillGroupKind::Permute;
    long long level = 0;                 // embeds
    std::vector<Strand> members;         // crossing groups, ordered by k
};

// Exact-rational sweep: pairwise trajectory intersections grouped by (t, x),
// the level entries of the s = 0 strands at each integer time, and the
// windows embeddings. Groups at integer x mutate (chains), the rest only
// permute. Within one time, groups run right to left.
inline std::vector<TwillGroup> crossing_schedule(long long g) {
    if (g < 2) throw std::domain_error("crossing_schedule: genus must be >= 2");
    std::map<std::pair<Rat, Rat>, std::set<std::pair<long long, long long>>> groups;
    auto strands = twill_strands(g);

    for (std::size_t a = 0; a < strands.size(); ++a) {
        for (std::size_t b = a + 1; b < strands.size(); ++b) {
            const Strand &p = strands[a], &q = strands[b];
            if (p.s == 0 || q.s == 0 || p.k == q.k || p.s == q.s) continue;
            Rat tc = Rat(p.s * q.k - q.s * p.k, p.s - q.s);
            if (!(Rat(std::max(p.k, q.k)) < tc) || !(tc < Rat(g))) continue;
            Rat x = trajectory(p.k, p.s, tc);
            auto& set = groups[{tc, x}];
            set.insert({p.k, p.s});
            set.insert({q.k, q.s});
        }
    }
    // Level entries: at t = i the fresh degree-i strand traverses every
    // strand already present, joining the integer-x groups as the last
    // member and forming two-strand permutes elsewhere.
    for (long long i = 1; i <= g - 1; ++i) {
        for (long long k = 0; k < i; ++k)
            for (long long s = 1; s <= 3 * g - 3 - 3 * k; ++s) {
                Rat x = Rat(s, i - k);
                auto& set = groups[{Rat(i), x}];
                set.insert({k, s});
                set.insert({i, 0});
            }
    }
    // Silent integer crossings: the round-down of a trajectory can drop with
    // no partner strand in range; the twist still mutates there.
    for (const auto& st : strands) {
        if (st.s == 0) continue;
        for (long long n = 1; n < st.s; ++n) {
            Rat tc = Rat(st.k) + Rat(st.s, n);
            if (!(Rat(st.k + 1) < tc) || !(tc < Rat(g))) continue;
            groups[{tc, Rat(n)}].insert({st.k, st.s});
        }
    }

    std::vector<TwillGroup> out;
    for (long long i = 0; i <= g - 1; ++i) {
        TwillGroup e;
        e.t = Rat(i);
        e.kind = TwillGroupKind::Embed;
        e.level = i;
        out.push_back(e);
    }
    for (const auto& [key, mem] : groups) {
        TwillGroup gr;
        gr.t = key.first;
        gr.x = key.second;
        gr.kind = key.second.is_integer() ? TwillGroupKind::Chain : TwillGroupKind::Permute;
        for (auto [k, s] : mem) gr.members.push_back({k, s, strand_id(g, k, s)});
        std::sort(gr.members.begin(), gr.members.end(),
                  [](const Strand& a, const Strand& b) { return a.k < b.k; });
        out.push_back(gr);
    }
    std::stable_sort(out.begin(), out.end(), [](const TwillGroup& a, const TwillGroup& b) {
        if (a.t != b.t) return a.t < b.t;
        bool ae = a.kind == TwillGroupKind::Embed, be = b.kind == TwillGroupKind::Embed;
        if (ae != be) return ae;  // embeds first at their level
        if (ae && be) return a.level < b.level;
        return b.x < a.x;  // rightmost first
    });
    return out;
}

// Brute-force pairwise intersection count, including the level-entry
// convention crossings. Written against the raw trajectories only; the
// mutation engine never feeds it.
inline long long oracle_crossing_count(long long g) {
    long long count = 0;
    auto strands = twill_strands(g);
    for (std::size_t a = 0; a < strands.size(); ++a)
        for (std::size_t b = a + 1; b < strands.size(); ++b) {
            const Strand &p = strands[a], &q = strands[b];
            if (p.k == q.k) continue;
            if (p.s == 0 || q.s == 0) {
                // the modified path of (k,0) sweeps level k across every
                // strand of smaller degree with s >= 1
                const Strand& zero = p.s == 0 ? p : q;
                const Strand& other = p.s == 0 ? q : p;
                if (other.s >= 1 && other.k < zero.k) ++count;
                continue;
            }
            if (p.s == q.s) continue;
            Rat tc = Rat(p.s * q.k - q.s * p.k, p.s - q.s);
            if (Rat(std::max(p.k, q.k)) < tc && tc < Rat(g)) ++count;
        }
    return count;
}

// ---------------------------------------------------------------------------
// The stage-1 runner
// ---------------------------------------------------------------------------

enum class TwillMode { Theorem, FullSweep };

struct TwillOptions {
    bool emit_pair_certificates = true;
    std::optional<EpsRat> stop_after;  // replay only the prefix up to here
    bool insertions_only = false;      // census: run embeds, skip crossings
};

struct TwillResult {
    Decomposition dec;
    EventLog log;
};

namespace twill_detail {

// Certificates for one ordered pair inside a crossing group, following the
// reordering recipe: expand the lower-degree block through the basic warp
// ladder and restrict to the higher-degree fiber. On the top level the
// exceptional class dies and the twist difference collapses to its fiber
// degree.
inline void pair_certificates(long long g, long long i, const Block& lo, const Block& hi,
                              const std::string& source, std::vector<Certificate>& out) {
    long long klo = lo.source_degree, khi = hi.source_degree;
    for (long long l = 0; l + 0 <= klo; ++l)
        for (long long m = 0; l + m <= klo; ++m) {
            VanishingQuery q;
            q.g = g;
            q.a = m;
            q.b = 0;
            q.source = source;
            if (khi == i) {
                long long c = fiber_degree(hi.kernel.twist - lo.kernel.twist, i);
                q.j = 0;
                q.d = 2 * g - 1 - 2 * i;
                q.t = Rat(l + m - c);
            } else {
                PicElt delta = hi.kernel.twist - lo.kernel.twist;
                if (delta.m() != 0)
                    throw std::logic_error("pair_certificates: twist strips differ");
                q.j = i - khi;
                q.d = 2 * g - 1 - 2 * khi;
                q.t = Rat(l + m - delta.n());
            }
            out.push_back(certify(Obligation{std::nullopt, q}));
        }
}

// Certificates for a chain mutation: each mutating member of degree k moves
// past the whole ladder of higher-degree incidence subcategories on its
// level, justified by the wide-window rule at every intermediate fiber with
// t = l + m + i - k.
inline void chain_certificates(long long g, long long i, const std::vector<Strand>& members,
                               const std::string& source, std::vector<Certificate>& out) {
    for (const auto& st : members) {
        long long k = st.k;
        if (k >= i) continue;
        for (long long al = k + 1; al <= i; ++al)
            for (long long l = 0; l <= k; ++l)
                for (long long m = 0; l + m <= k; ++m) {
                    VanishingQuery q;
                    q.g = g;
                    q.j = i - al;
                    q.d = 2 * g - 1 - 2 * al;
                    q.a = m;
                    q.b = 0;
                    q.t = Rat(l + m + i - k);
                    q.source = source;
                    out.push_back(certify(Obligation{Rule::EasyVanishing, q}));
                }
    }
}

struct Runner {
    long long g;
    TwillMode mode;
    TwillOptions opt;
    Decomposition dec;
    EventLog log;
    std::map<int, Strand> strand_of;     // id -> (k, s)
    std::map<int, Rat> frozen_at;        // theorem mode: freeze times
    long long current_level = 0;

    explicit Runner(long long gg, TwillMode m, TwillOptions o) : g(gg), mode(m), opt(o) {}

    bool theorem() const { return mode == TwillMode::Theorem; }

    bool is_tail_strand(const Strand& st) const { return st.s == 3 * g - 3 - 3 * st.k; }

    std::optional<Rat> stop_time(const Strand& st) const {
        if (!theorem()) return std::nullopt;
        if (st.s == 0) return std::nullopt;  // handled by its level convention
        if (is_tail_strand(st)) return std::nullopt;
        return stopping_time(g, st.k, st.s);
    }

    bool strand_active(const Strand& st, Rat t) const {
        auto ts = stop_time(st);
        return !ts || t < *ts;
    }

    Rat effective_x(const Block& b, Rat t) const {
        const Strand& st = strand_of.at(b.id);
        if (theorem()) {
            auto it = frozen_at.find(b.id);
            if (it != frozen_at.end()) return trajectory(st.k, st.s, it->second);
        }
        return trajectory(st.k, st.s, t);
    }

    void assert_sorted(Rat t) {
        // Strands with s = 0 follow the modified-path convention and are
        // excluded; frozen strands sit at their stopping abscissa. A frozen
        // strand also blocks the strands behind it (their crossings defer to
        // the final ordering), so in theorem mode the comparison chain
        // restarts at each frozen block.
        Rat prev;
        bool have = false;
        for (const auto& b : dec.blocks) {
            const Strand& st = strand_of.at(b.id);
            if (st.s == 0) continue;
            if (!(Rat(st.k) < t)) continue;
            bool frozen = frozen_at.count(b.id) != 0;
            Rat x = effective_x(b, t);
            if (have && x < prev && !theorem())
                throw std::logic_error("twill: decomposition order violates trajectories at t=" +
                                       t.str());
            if (theorem() && frozen) {
                have = false;
                continue;
            }
            if (theorem() && have && x < prev)
                throw std::logic_error("twill: active strands out of order at t=" + t.str());
            prev = x;
            have = true;
        }
    }

    void run_embed(const TwillGroup& gr) {
        long long i = gr.level;
        Event e;
        e.kind = EventKind::WindowsEmbed;
        e.stage = "twill";
        e.time = Rat(i);
        e.ambient_level = i;
        current_level = i;
        // wall check for everything already present
        for (const auto& b : dec.blocks) {
            const Strand& st = strand_of.at(b.id);
            if (i >= 1 && !windows_check(g, i, st.k, st.s))
                throw std::logic_error("twill: windows weight range violated");
        }
        for (long long s = 0; s <= 3 * g - 3 - 3 * i; ++s) {
            Strand st{i, s, strand_id(g, i, s)};
            strand_of[st.id] = st;
            Block b{st.id, (int)i, incidence_kernel(i, PicElt::of_mn(s, s * i)),
                    Ambient{false, i}};
            e.appended.push_back(b);
        }
        e.note = "level " + std::to_string(i);
        apply_event(dec, e);
        log.push(std::move(e));
    }

    void run_group(const TwillGroup& gr) {
        // Stopped strands froze before reaching this point; the crossing
        // happens among the remaining participants only.
        std::vector<Strand> participants;
        for (const auto& st : gr.members)
            if (st.s == 0 || strand_active(st, gr.t)) participants.push_back(st);
        if (participants.empty()) return;
        long long lvl = gr.t.floor();
        if (participants.size() == 1) {
            // a lone strand whose round-down drops mutates silently
            const Strand& st = participants[0];
            if (gr.kind != TwillGroupKind::Chain || st.k >= lvl || st.s == 0) return;
        }

        std::vector<std::size_t> pos;
        for (const auto& st : participants) {
            auto p = dec.position_of(st.id);
            if (!p) throw std::logic_error("twill: participant missing");
            pos.push_back(*p);
        }
        // Split into positionally contiguous runs. Frozen strands block the
        // crossings between runs; those permutations are exactly the ones the
        // stopping times replace and they defer to the final ordering.
        std::vector<std::vector<Strand>> runs;
        for (std::size_t i = 0; i < participants.size(); ++i) {
            if (i == 0 || pos[i] != pos[i - 1] + 1) runs.emplace_back();
            runs.back().push_back(participants[i]);
        }
        if (runs.size() > 1 && !theorem())
            throw std::logic_error("twill: crossing group is not contiguous at t=" +
                                   gr.t.str());

        for (const auto& run : runs) {
            if (gr.kind == TwillGroupKind::Chain) {
                // a run without mutating members has nothing to do; its
                // members' positional role defers to the final ordering
                bool has_changer = false;
                for (const auto& st : run) has_changer |= st.k < lvl && st.s > 0;
                if (!has_changer) continue;
            } else if (run.size() == 1) {
                continue;
            }
            Event e;
            e.kind = gr.kind == TwillGroupKind::Chain ? EventKind::ChainMutation
                                                      : EventKind::Permute;
            e.stage = "twill";
            e.time = gr.t;
            e.span_begin = *dec.position_of(run[0].id);
            for (const auto& st : run) e.pre_ids.push_back(st.id);
            e.post_ids = e.pre_ids;
            std::reverse(e.post_ids.begin(), e.post_ids.end());

            if (gr.kind == TwillGroupKind::Chain) {
                for (const auto& st : run) {
                    if (st.k == lvl) continue;  // the level strand keeps its kernel
                    PicElt tw = twist_bundle(g, st.k, st.s, gr.t, +1);
                    const Block* b = dec.find(st.id);
                    if (b->kernel.twist == tw)
                        throw std::logic_error("twill: chain member kernel did not change");
                    KernelExpr k = b->kernel;
                    k.twist = tw;
                    e.kernel_updates[st.id] = k;
                }
                chain_certificates(g, lvl, run, "chain at t=" + gr.t.str(), e.certificates);
            } else if (opt.emit_pair_certificates) {
                for (std::size_t a = 0; a < run.size(); ++a)
                    for (std::size_t b = a + 1; b < run.size(); ++b)
                        pair_certificates(g, lvl, *dec.find(run[a].id), *dec.find(run[b].id),
                                          "crossing at t=" + gr.t.str(), e.certificates);
            }
            if (!e.certified())
                throw std::logic_error("twill: rejected certificate at t=" + gr.t.str());
            apply_event(dec, e);
            log.push(std::move(e));
        }
    }

    void freeze_newly_stopped(Rat t) {
        if (!theorem()) return;
        for (const auto& b : dec.blocks) {
            const Strand& st = strand_of.at(b.id);
            auto ts = stop_time(st);
            if (ts && !frozen_at.count(b.id) && !(t < *ts)) frozen_at[b.id] = *ts;
        }
    }

    // A deferred crossing is certified at the moment it would have happened:
    // the strand that froze first owns a vertical line, the other strand's
    // trajectory meets it at a definite time, and both twists there sit in
    // one strip, where the reordering recipe applies.
    void reorder_pair_certificates(int id_a, int id_b, std::vector<Certificate>& out) {
        const Strand &sa = strand_of.at(id_a), &sb = strand_of.at(id_b);
        const Block *ba = dec.find(id_a), *bb = dec.find(id_b);
        if (sa.k == sb.k)
            throw std::logic_error("twill: same-degree strands swapped in reorder");
        long long level;
        Block va = *ba, vb = *bb;  // copies carrying the historical twists
        if (sa.s == 0 || sb.s == 0) {
            const Strand& zero = sa.s == 0 ? sa : sb;
            level = zero.k;
        } else {
            auto ta = stop_time(sa), tb = stop_time(sb);
            if (!ta || !tb)
                throw std::logic_error("twill: unstopped strands swapped in reorder");
            if (sa.s == sb.s)
                throw std::logic_error("twill: parallel strands swapped in reorder");
            Rat tx = Rat(sa.s * sb.k - sb.s * sa.k, sa.s - sb.s);
            if (Rat(std::max(sa.k, sb.k)) < tx && tx < Rat(g) && !(*ta < tx) && !(*tb < tx)) {
                // the trajectories met while both strands were live; the
                // positional swap was blocked, the orthogonality was not
                level = tx.floor();
                Rat xc = trajectory(sa.k, sa.s, tx);
                if (xc.is_integer()) {
                    // a deferred chain participation carries the chain recipe
                    const Strand& klo = sa.k < sb.k ? sa : sb;
                    chain_certificates(g, level, {klo}, "stopped-strand ordering", out);
                    return;
                }
                va.kernel.twist = twist_bundle(g, sa.k, sa.s, tx, 0);
                vb.kernel.twist = twist_bundle(g, sb.k, sb.s, tx, 0);
            } else {
                // one strand froze first; the other passes its vertical line
                const Strand& owner = *ta < *tb ? sa : sb;
                const Strand& mover = *ta < *tb ? sb : sa;
                Rat q = Rat(owner.s) / (stopping_time(g, owner.k, owner.s) - Rat(owner.k));
                Rat tc = Rat(mover.k) + Rat(mover.s) / q;
                level = tc.floor();
                KernelExpr mk = (&mover == &sa ? va : vb).kernel;
                mk.twist = twist_bundle(g, mover.k, mover.s, tc, 0);
                (&mover == &sa ? va : vb).kernel = mk;
            }
        }
        const Block* lo = sa.k < sb.k ? &va : &vb;
        const Block* hi = sa.k < sb.k ? &vb : &va;
        pair_certificates(g, level, *lo, *hi, "stopped-strand ordering", out);
    }

    // Sorting key of the stopped decomposition: mega-block, then j+k, then j.
    std::tuple<int, long long, long long> final_key(const Strand& st) const {
        if (is_tail_strand(st)) return {2, g - 1, g - 1 - st.k};
        if (st.s == 0) return {0, st.k, 0};
        long long q = st.s / (g - 1 - st.k);
        long long j = st.s - q * (g - 1 - st.k);
        return {(int)q, j + st.k, j};
    }

    void final_reorder() {
        std::vector<int> order;
        for (const auto& b : dec.blocks) order.push_back(b.id);
        std::vector<int> target = order;
        std::stable_sort(target.begin(), target.end(), [&](int a, int b) {
            return final_key(strand_of.at(a)) < final_key(strand_of.at(b));
        });
        long long m1 = g * (g - 1) / 2;
        std::vector<std::size_t> bounds = {(std::size_t)m1, (std::size_t)(2 * m1)};
        if (target == order) {
            Event e;
            e.kind = EventKind::Reorder;
            e.stage = "twill";
            e.time = Rat(g - 1);
            e.time_eps = 1;
            e.boundaries_set = bounds;
            e.note = "stopped-strand ordering";
            apply_event(dec, e);
            log.push(std::move(e));
            return;
        }
        Event e;
        e.kind = EventKind::Reorder;
        e.stage = "twill";
        e.time = Rat(g - 1);
        e.time_eps = 1;
        e.span_begin = 0;
        e.pre_ids = order;
        e.post_ids = target;
        e.boundaries_set = bounds;
        e.note = "stopped-strand ordering";
        // one certificate per swapped pair, in the recipe direction
        std::map<int, std::size_t> tpos;
        for (std::size_t i = 0; i < target.size(); ++i) tpos[target[i]] = i;
        for (std::size_t a = 0; a < order.size(); ++a)
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                if (tpos[order[a]] < tpos[order[b]]) continue;
                reorder_pair_certificates(order[a], order[b], e.certificates);
            }
        if (!e.certified()) throw std::logic_error("twill: reorder certificate rejected");
        apply_event(dec, e);
        log.push(std::move(e));
    }

    TwillResult run() {
        auto schedule = crossing_schedule(g);
        for (const auto& gr : schedule) {
            if (opt.stop_after && *opt.stop_after < EpsRat{gr.t, 0}) break;
            // in theorem mode the sweep ends with the top-level chain
            if (theorem() && Rat(g - 1) < gr.t) continue;
            if (gr.kind == TwillGroupKind::Embed) {
                run_embed(gr);
            } else if (!opt.insertions_only) {
                freeze_newly_stopped(gr.t);
                run_group(gr);
                assert_sorted(gr.t);
            }
        }
        if (theorem() && !opt.insertions_only && !opt.stop_after) final_reorder();
        return {dec, log};
    }
};

}  // namespace twill_detail

// Stage 1. Theorem mode stops each strand at its stopping time, performs the
// single leftover chain on the top level and orders the result into three
// mega-blocks; full-sweep mode runs every crossing to t = g - eps. Both
// modes hard-fail when the result drifts from the closed-form list.
inline TwillResult twill_run(long long g, TwillMode mode, TwillOptions opt = {}) {
    if (g < 2) throw std::domain_error("twill_run: genus must be >= 2");
    twill_detail::Runner r(g, mode, opt);
    TwillResult res = r.run();
    if (!opt.stop_after && !opt.insertions_only) {
        Decomposition expected =
            mode == TwillMode::Theorem ? twill_stopped_list(g) : twill_full_list(g);
        DiffReport rep = diff(res.dec, expected);
        if (!rep.empty())
            throw std::logic_error("twill_run: closed-form mismatch\n" + rep.str());
    }
    return res;
}

// Snapshot of the decomposition just after the last event at or before the
// given one-sided time.
inline Decomposition twill_snapshot(long long g, TwillMode mode, Rat t, int eps) {
    TwillOptions opt;
    opt.stop_after = EpsRat{t, eps};
    opt.emit_pair_certificates = false;
    twill_detail::Runner r(g, mode, opt);
    return r.run().dec;
}

// Insertions only: the block census after the last windows embedding.
inline Decomposition twill_census(long long g) {
    TwillOptions opt;
    opt.insertions_only = true;
    twill_detail::Runner r(g, TwillMode::FullSweep, opt);
    return r.run().dec;
}

}  // namespace weaving
