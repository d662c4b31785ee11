#pragma once

#include <algorithm>
#include <vector>

#include "weaving/block.hpp"
#include "weaving/rational.hpp"

namespace weaving {

// Closed-form target lists for the four stages. These are built directly
// from the index sets, independently of the mutation engine, and serve as
// the hard exit checks after each stage.

inline long long strand_count(long long g) { return g * (3 * g - 1) / 2; }

// Stable strand identity: strands are enumerated by (k, s) with
// 0 <= k <= g-1, 0 <= s <= 3g-3-3k.
inline int strand_id(long long g, long long k, long long s) {
    long long id = 0;
    for (long long kk = 0; kk < k; ++kk) id += 3 * g - 2 - 3 * kk;
    return (int)(id + s);
}

inline KernelExpr incidence_kernel(long long k, PicElt twist) {
    if (k == 0) return KernelExpr::line(twist);
    return KernelExpr::d_sheaf((int)k, twist);
}

inline KernelExpr tensor_e_kernel(long long j, PicElt twist) {
    if (j == 0) return KernelExpr::line(twist);
    return KernelExpr::tensor_e((int)j, twist);
}

inline KernelExpr tensor_fstar_kernel(long long j, PicElt twist) {
    if (j == 0) return KernelExpr::line(twist);
    return KernelExpr::tensor_fstar((int)j, twist);
}

// Index pair (j, k) with j the twist index and k the source degree, plus the
// mega-block it belongs to. Shared by the stage-1/2/3 lists.
struct JkIndex {
    long long j = 0;
    long long k = 0;
    int mega = 0;
};

inline std::vector<JkIndex> jk_mega_indices(long long g) {
    std::vector<JkIndex> out;
    for (int mega = 0; mega < 3; ++mega) {
        long long cap = mega == 2 ? g - 1 : g - 2;
        for (long long c = 0; c <= cap; ++c)
            for (long long j = 0; j <= c; ++j) out.push_back({j, c - j, mega});
    }
    return out;
}

// Stage-1 target: three mega-blocks of twisted incidence kernels
//   D^k(0, j) | D^k(1, g-2+j) | D^k(2, 2g-4+j)
// with j+k <= g-2 in the first two and <= g-1 in the third, ordered inside
// each mega-block by j+k then j, both increasing.
inline Decomposition twill_stopped_list(long long g) {
    Decomposition dec;
    Ambient amb{false, g - 1};
    int next_id = 100000;  // expected lists carry synthetic ids
    long long mega_n0[3] = {0, g - 2, 2 * g - 4};
    for (int mega = 0; mega < 3; ++mega) {
        long long cap = mega == 2 ? g - 1 : g - 2;
        for (long long c = 0; c <= cap; ++c)
            for (long long j = 0; j <= c; ++j) {
                long long k = c - j;
                PicElt tw = PicElt::of_mn(mega, mega_n0[mega] + j);
                Block b{next_id++, (int)k, incidence_kernel(k, tw), amb};
                dec.blocks.push_back(b);
            }
        if (mega < 2) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

// Full-sweep target: every strand (k, s) with the level-(g-eps) twist
//   O(floor(s/(g-k)), s + floor(s/(g-k)) (k-1)),
// in increasing order of s/(g-eps-k); strands with s = 0 come first,
// ordered by k. No mega-block structure.
inline Decomposition twill_full_list(long long g) {
    struct Entry {
        Rat x;
        long long k, s;
    };
    std::vector<Entry> entries;
    for (long long k = 0; k <= g - 1; ++k)
        for (long long s = 0; s <= 3 * g - 3 - 3 * k; ++s)
            entries.push_back({s == 0 ? Rat(0) : Rat(s, g - k), k, s});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.k < b.k;
    });
    Decomposition dec;
    Ambient amb{false, g - 1};
    for (const auto& e : entries) {
        long long q = e.s == 0 ? 0 : Rat(e.s, g - e.k).floor();
        PicElt tw = PicElt::of_mn(q, e.s + q * (e.k - 1));
        dec.blocks.push_back(
            Block{strand_id(g, e.k, e.s), (int)e.k, incidence_kernel(e.k, tw), amb});
    }
    return dec;
}

// Stage-2 target: the same three mega-blocks rebased on the dual-pair
// tensor bundles, with twist prefixes O, Z+Lbar, theta+Lbar, ordered inside
// each mega-block by k descending then j descending (k the twist index).
inline Decomposition cross_warp_list(long long g) {
    Decomposition dec;
    Ambient amb{false, g - 1};
    int next_id = 200000;
    PicElt prefix[3] = {PicElt{}, bundle_z(g) + bundle_lbar(g),
                        bundle_theta(g) + bundle_lbar(g)};
    for (int mega = 0; mega < 3; ++mega) {
        long long cap = mega == 2 ? g - 1 : g - 2;
        for (long long k = cap; k >= 0; --k)
            for (long long j = cap - k; j >= 0; --j) {
                PicElt tw = prefix[mega] + (-k) * bundle_lbar(g);
                dec.blocks.push_back(Block{next_id++, (int)j,
                                           tensor_fstar_kernel(j, tw), amb});
            }
        if (mega < 2) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

// Stage-3 intermediate target: three mega-blocks on the Poincare family,
//   Z^{3+j+2k-g} th^{-(k+j+1)} | Z^{2+j+2k-g} th^{-(k+j)} | Z^{1+j+2k-g} th^{-(k+j-1)}
// with E-degree j, ordered by k descending then j descending.
inline PicElt helix_twist(long long g, int mega, long long j, long long k) {
    long long zs[3] = {3 + j + 2 * k - g, 2 + j + 2 * k - g, 1 + j + 2 * k - g};
    long long ts[3] = {-(k + j + 1), -(k + j), -(k + j - 1)};
    return zs[mega] * bundle_z(g) + ts[mega] * bundle_theta(g);
}

inline Decomposition helix_list(long long g) {
    Decomposition dec;
    Ambient amb{false, g - 1};
    int next_id = 300000;
    for (int mega = 0; mega < 3; ++mega) {
        long long cap = mega == 2 ? g - 1 : g - 2;
        for (long long k = cap; k >= 0; --k)
            for (long long j = cap - k; j >= 0; --j)
                dec.blocks.push_back(Block{next_id++, (int)j,
                                           tensor_e_kernel(j, helix_twist(g, mega, j, k)),
                                           amb});
        if (mega < 2) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

// Stage-3 reordered target: the same blocks sorted inside each mega-block by
// lambda = 2k + j descending, then k descending.
inline Decomposition lambda_ordered_list(long long g) {
    Decomposition dec;
    Ambient amb{false, g - 1};
    int next_id = 310000;
    for (int mega = 0; mega < 3; ++mega) {
        long long cap = mega == 2 ? g - 1 : g - 2;
        struct E {
            long long lam, k, j;
        };
        std::vector<E> es;
        for (long long k = 0; k <= cap; ++k)
            for (long long j = 0; j + k <= cap; ++j) es.push_back({2 * k + j, k, j});
        std::stable_sort(es.begin(), es.end(), [](const E& a, const E& b) {
            if (a.lam != b.lam) return a.lam > b.lam;
            return a.k > b.k;
        });
        for (const auto& e : es)
            dec.blocks.push_back(Block{next_id++, (int)e.j,
                                       tensor_e_kernel(e.j, helix_twist(g, mega, e.j, e.k)),
                                       amb});
        if (mega < 2) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

// Stage-3 final target: four mega-blocks
//   I:   Z^{l+2-g} th^{-(l-k+1)} E^{l-2k},  0 <= l <= g-2
//   II:  Z^{l+3-g} th^{-(l-k+1)} E^{l-2k},  0 <= l <= 2(g-2), l-k <= g-2
//   III: Z^{l+2-g} th^{-(l-k)}   E^{l-2k},  same range as II
//   IV:  Z^{l+1-g} th^{-(l-k-1)} E^{l-2k},  g-1 <= l <= 2(g-1), l-k <= g-1
// each ordered by lambda descending then k descending.
struct LamK {
    long long lam = 0;
    long long k = 0;
};

inline std::vector<LamK> four_mega_indices(long long g, int mega) {
    long long lam_lo[4] = {0, 0, 0, g - 1};
    long long lam_hi[4] = {g - 2, 2 * (g - 2), 2 * (g - 2), 2 * (g - 1)};
    long long gap_cap[4] = {g - 2, g - 2, g - 2, g - 1};
    std::vector<LamK> out;
    for (long long lam = lam_hi[mega]; lam >= lam_lo[mega]; --lam)
        for (long long k = lam / 2; k >= 0; --k)
            if (lam - k <= gap_cap[mega]) out.push_back({lam, k});
    return out;
}

inline PicElt four_mega_twist(long long g, int mega, long long lam, long long k) {
    long long zs[4] = {lam + 2 - g, lam + 3 - g, lam + 2 - g, lam + 1 - g};
    long long ts[4] = {-(lam - k + 1), -(lam - k + 1), -(lam - k), -(lam - k - 1)};
    return zs[mega] * bundle_z(g) + ts[mega] * bundle_theta(g);
}

inline Decomposition four_mega_list(long long g) {
    Decomposition dec;
    Ambient amb{false, g - 1};
    int next_id = 400000;
    for (int mega = 0; mega < 4; ++mega) {
        for (const auto& lk : four_mega_indices(g, mega))
            dec.blocks.push_back(Block{next_id++, (int)(lk.lam - 2 * lk.k),
                                       tensor_e_kernel(lk.lam - 2 * lk.k,
                                                       four_mega_twist(g, mega, lk.lam, lk.k)),
                                       amb});
        if (mega < 3) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

// The final pulled-back families over N, ordered by k decreasing inside each
// mega-block:
//   th^{1-g+k} E^{g-2-2k} | th^{2-g+k} E^{g-3-2k} |
//   th^{2-g+k} E^{g-2-2k} | th^{2-g+k} E^{g-1-2k}
inline std::vector<long long> pulled_back_degrees(long long g, int mega) {
    long long p[4] = {g - 2, g - 3, g - 2, g - 1};
    std::vector<long long> ks;
    for (long long k = p[mega] / 2; k >= 0; --k)
        if (p[mega] - 2 * k >= 0) ks.push_back(k);
    return ks;
}

inline PicElt pulled_back_twist(long long g, int mega, long long k) {
    long long c[4] = {1 - g + k, 2 - g + k, 2 - g + k, 2 - g + k};
    return c[mega] * bundle_theta(g);
}

inline Decomposition pulled_back_list(long long g) {
    Decomposition dec;
    Ambient amb{true, 0};
    int next_id = 500000;
    long long p[4] = {g - 2, g - 3, g - 2, g - 1};
    for (int mega = 0; mega < 4; ++mega) {
        if (g == 2 && mega == 1) {
            // empty family; still a (degenerate) mega-block cut
            if (mega < 3) dec.boundaries.push_back(dec.blocks.size());
            continue;
        }
        for (long long k : pulled_back_degrees(g, mega)) {
            Block b{next_id++, (int)(p[mega] - 2 * k),
                    tensor_e_kernel(p[mega] - 2 * k, pulled_back_twist(g, mega, k)), amb};
            b.tag = ResidueTag::PulledBack;
            dec.blocks.push_back(b);
        }
        if (mega < 3) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

// The dual decomposition of the same mega-blocks on the signed family, with
// blocks in increasing order of k. The signed tensor bundle of the Poincare
// family is carried as the signed pair family twisted by Z^p.
inline Decomposition dual_pulled_back_list(long long g) {
    Decomposition dec;
    Ambient amb{true, 0};
    int next_id = 600000;
    long long p[4] = {g - 2, g - 3, g - 2, g - 1};
    for (int mega = 0; mega < 4; ++mega) {
        auto ks = pulled_back_degrees(g, mega);
        std::reverse(ks.begin(), ks.end());
        for (long long k : ks) {
            long long deg = p[mega] - 2 * k;
            PicElt tw = pulled_back_twist(g, mega, k) + deg * bundle_z(g);
            KernelExpr ker = deg == 0 ? KernelExpr::line(tw)
                                      : KernelExpr{KernelBase::TensorFbar, (int)deg, tw};
            ker.source_twist_free = deg > 0;
            dec.blocks.push_back(Block{next_id++, (int)deg, ker, amb});
        }
        if (mega < 3) dec.boundaries.push_back(dec.blocks.size());
    }
    return dec;
}

}  // namespace weaving
