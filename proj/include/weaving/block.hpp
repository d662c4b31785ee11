#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaving/kernel.hpp"
#include "weaving/vanishing.hpp"

namespace weaving {

// Ambient space tag: one of the stable-pair levels M_i, or the bundle
// moduli space N after the final stage.
struct Ambient {
    bool on_n = false;
    long long level = 0;  // i for M_i; ignored when on_n

    friend bool operator==(const Ambient& a, const Ambient& b) {
        return a.on_n == b.on_n && (a.on_n || a.level == b.level);
    }
    std::string str() const { return on_n ? "N" : "M" + std::to_string(level); }
};

enum class ResidueTag { None, PulledBack, InA, InAPrime };

inline std::string residue_tag_name(ResidueTag t) {
    switch (t) {
        case ResidueTag::None: return "none";
        case ResidueTag::PulledBack: return "pulled_back";
        case ResidueTag::InA: return "in_a";
        case ResidueTag::InAPrime: return "in_a_prime";
    }
    return "?";
}

// One strand of the weave: a stable identity, the symmetric power it is
// sourced from, its current kernel, and the ambient space.
struct Block {
    int id = 0;
    int source_degree = 0;
    KernelExpr kernel;
    Ambient ambient;
    ResidueTag tag = ResidueTag::None;
    std::vector<Certificate> tag_chain;  // justification for the residue tag
};

inline void to_json(nlohmann::json& j, const Block& b) {
    j = nlohmann::json{{"id", b.id},
                       {"k", b.source_degree},
                       {"kernel", b.kernel},
                       {"ambient", b.ambient.str()}};
    if (b.tag != ResidueTag::None) j["tag"] = residue_tag_name(b.tag);
}

// Ordered block list with explicit mega-block boundaries. Boundaries are
// strictly increasing cut positions in [0, size].
struct Decomposition {
    std::vector<Block> blocks;
    std::vector<std::size_t> boundaries;

    std::size_t size() const { return blocks.size(); }

    std::optional<std::size_t> position_of(int id) const {
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].id == id) return i;
        return std::nullopt;
    }

    const Block* find(int id) const {
        for (const auto& b : blocks)
            if (b.id == id) return &b;
        return nullptr;
    }
    Block* find(int id) {
        for (auto& b : blocks)
            if (b.id == id) return &b;
        return nullptr;
    }

    // Cuts are non-decreasing positions in [0, size]; equal cuts delimit an
    // empty mega-block (the second final family is empty at genus two).
    bool boundaries_valid() const {
        std::size_t prev = 0;
        for (std::size_t i = 0; i < boundaries.size(); ++i) {
            if (boundaries[i] > blocks.size()) return false;
            if (boundaries[i] < prev) return false;
            prev = boundaries[i];
        }
        return true;
    }

    // Mega-blocks as [begin, end) ranges induced by the boundary cuts.
    std::vector<std::pair<std::size_t, std::size_t>> mega_ranges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        std::size_t prev = 0;
        for (auto c : boundaries) {
            out.emplace_back(prev, c);
            prev = c;
        }
        out.emplace_back(prev, blocks.size());
        return out;
    }
};

inline void to_json(nlohmann::json& j, const Decomposition& d) {
    j = nlohmann::json{{"blocks", d.blocks}, {"boundaries", d.boundaries}};
}

// Kernel equivalence used by diff: exact on base, index, shift and inner,
// exact on the twist except over a projective-bundle incidence block (a
// degree-k incidence sheaf living on the level-k space), where twists that
// restrict to degree zero on the fibers are pulled back from the source and
// compare equal. The source-twist flag itself is not compared.
inline bool kernel_equivalent(const Block& a, const Block& b) {
    const KernelExpr &x = a.kernel, &y = b.kernel;
    if (x.base != y.base || x.index != y.index || x.shift != y.shift) return false;
    if (x.base == KernelBase::ZRestricted) {
        if (!x.inner || !y.inner) return false;
        Block ia{a.id, a.source_degree, *x.inner, a.ambient};
        Block ib{b.id, b.source_degree, *y.inner, b.ambient};
        if (!kernel_equivalent(ia, ib)) return false;
    }
    if (x.twist == y.twist) return true;
    if (x.base == KernelBase::DSheaf && !a.ambient.on_n && a.ambient == b.ambient &&
        a.ambient.level == x.index) {
        PicElt delta = x.twist - y.twist;
        return fiber_degree(delta, x.index) == 0;
    }
    return false;
}

struct DiffEntry {
    std::string what;
};

struct DiffReport {
    std::vector<DiffEntry> entries;
    bool empty() const { return entries.empty(); }
    std::string str() const {
        std::string s;
        for (const auto& e : entries) s += e.what + "\n";
        return s;
    }
};

// Block-by-block comparison of two decompositions, respecting the relaxed
// kernel equivalence, plus a mega-block boundary comparison.
inline DiffReport diff(const Decomposition& got, const Decomposition& expected) {
    DiffReport r;
    if (got.size() != expected.size())
        r.entries.push_back({"block count " + std::to_string(got.size()) + " != " +
                             std::to_string(expected.size())});
    std::size_t n = std::min(got.size(), expected.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!kernel_equivalent(got.blocks[i], expected.blocks[i]))
            r.entries.push_back({"position " + std::to_string(i) + ": " +
                                 got.blocks[i].kernel.str() + " != " +
                                 expected.blocks[i].kernel.str()});
    }
    if (got.boundaries != expected.boundaries) {
        std::string s = "boundaries [";
        for (auto c : got.boundaries) s += std::to_string(c) + " ";
        s += "] != [";
        for (auto c : expected.boundaries) s += std::to_string(c) + " ";
        s += "]";
        r.entries.push_back({s});
    }
    return r;
}

}  // namespace weaving
