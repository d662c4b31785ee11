#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "weaving/picard.hpp"

namespace weaving {

// Base family of a symbolic Fourier-Mukai kernel. The index is the symmetric
// power of the curve the kernel is defined over (k for incidence sheaves and
// two-term complexes, j for tensor bundles; 0 for plain line bundles).
enum class KernelBase {
    Line,         // line bundle only
    DSheaf,       // structure sheaf of the degree-k incidence locus
    DDual,        // its derived dual
    TensorE,      // symmetrized tensor bundle of the Poincare bundle
    TensorFstar,  // symmetrized tensor bundle of the dual universal pair bundle
    TensorFbar,   // signed symmetrization of the universal pair bundle
    FBullet,      // the two-term complex interpolating TensorFstar and DSheaf
    ZRestricted,  // derived restriction of an inner kernel to the divisor Z
};

inline std::string kernel_base_tag(KernelBase b, int index) {
    switch (b) {
        case KernelBase::Line: return "line";
        case KernelBase::DSheaf: return "D^" + std::to_string(index);
        case KernelBase::DDual: return "Dv^" + std::to_string(index);
        case KernelBase::TensorE: return "E@" + std::to_string(index);
        case KernelBase::TensorFstar: return "F*@" + std::to_string(index);
        case KernelBase::TensorFbar: return "Fbar@" + std::to_string(index);
        case KernelBase::FBullet: return "F.@" + std::to_string(index);
        case KernelBase::ZRestricted: return "Zres";
    }
    return "?";
}

// Symbolic Fourier-Mukai kernel: a base family, a Picard-lattice twist
// pulled back from the moduli side, a homological shift, and a flag meaning
// "equal only up to a line bundle pulled back from the symmetric power of
// the curve". Source-side twists are never tracked coordinate-wise; every
// ordering decision is invariant under them.
struct KernelExpr {
    KernelBase base = KernelBase::Line;
    int index = 0;
    PicElt twist{};
    int shift = 0;
    bool source_twist_free = false;
    std::shared_ptr<const KernelExpr> inner;  // set iff base == ZRestricted

    static KernelExpr line(PicElt t = {}) { return KernelExpr{KernelBase::Line, 0, t}; }
    static KernelExpr d_sheaf(int k, PicElt t = {}) {
        return KernelExpr{KernelBase::DSheaf, k, t};
    }
    static KernelExpr tensor_e(int j, PicElt t = {}) {
        return KernelExpr{KernelBase::TensorE, j, t};
    }
    static KernelExpr tensor_fstar(int j, PicElt t = {}) {
        return KernelExpr{KernelBase::TensorFstar, j, t};
    }
    static KernelExpr f_bullet(int k, PicElt t = {}) {
        return KernelExpr{KernelBase::FBullet, k, t};
    }
    static KernelExpr z_restricted(const KernelExpr& in) {
        KernelExpr x;
        x.base = KernelBase::ZRestricted;
        x.inner = std::make_shared<const KernelExpr>(in);
        return x;
    }

    int source_degree() const {
        if (base == KernelBase::ZRestricted) return inner ? inner->source_degree() : 0;
        if (base == KernelBase::Line) return 0;
        return index;
    }

    friend bool operator==(const KernelExpr& a, const KernelExpr& b) {
        if (a.base != b.base || a.index != b.index || a.twist != b.twist ||
            a.shift != b.shift || a.source_twist_free != b.source_twist_free)
            return false;
        if (a.base == KernelBase::ZRestricted) {
            if (!a.inner || !b.inner) return a.inner == b.inner;
            return *a.inner == *b.inner;
        }
        return true;
    }
    friend bool operator!=(const KernelExpr& a, const KernelExpr& b) { return !(a == b); }

    std::string str() const {
        std::string s = kernel_base_tag(base, index);
        if (base == KernelBase::ZRestricted && inner) s += "(" + inner->str() + ")";
        if (!twist.is_zero()) s += "*" + twist.str();
        if (shift != 0) s += "[" + std::to_string(shift) + "]";
        if (source_twist_free) s += "~";
        return s;
    }
};

inline void to_json(nlohmann::json& j, const KernelExpr& x) {
    j = nlohmann::json{{"base", kernel_base_tag(x.base, x.index)},
                       {"twist", x.twist},
                       {"shift", x.shift},
                       {"sourceTwistFree", x.source_twist_free}};
    if (x.base == KernelBase::ZRestricted && x.inner) j["inner"] = *x.inner;
}

// Change of basis from the dual-pair-bundle family to the Poincare family:
// the tensor bundle of index j rebases with a twist drop of j(Z + Lbar); the
// leftover factor lives on the source and is dropped behind the flag.
inline KernelExpr rewrite_f_to_e(const KernelExpr& x, long long g) {
    if (x.base != KernelBase::TensorFstar)
        throw std::domain_error("rewrite_f_to_e: base must be TensorFstar");
    KernelExpr y = x;
    y.base = KernelBase::TensorE;
    y.twist = y.twist - (long long)x.index * (bundle_z(g) + bundle_lbar(g));
    y.source_twist_free = true;
    return y;
}

// Kernel-level dualization. Line bundles negate their twist; the dual-pair
// family swaps to the signed family (the half-diagonal factor lives on the
// source and is dropped behind the flag); incidence sheaves swap with their
// derived duals. Shift handling is the caller's duty.
inline KernelExpr dualize(const KernelExpr& x) {
    KernelExpr y = x;
    y.twist = -x.twist;
    switch (x.base) {
        case KernelBase::Line:
            break;
        case KernelBase::TensorFstar:
            y.base = KernelBase::TensorFbar;
            y.source_twist_free = true;
            break;
        case KernelBase::TensorFbar:
            y.base = KernelBase::TensorFstar;
            y.source_twist_free = true;
            break;
        case KernelBase::TensorE:
            // (E^j)^* differs from Ebar^j by theta^{-j}; we do not carry a
            // separate Ebar tag, the signed family reuses TensorFbar naming
            // in dual lists, so keep TensorE and mark the source twist.
            y.source_twist_free = true;
            break;
        case KernelBase::DSheaf:
            y.base = KernelBase::DDual;
            break;
        case KernelBase::DDual:
            y.base = KernelBase::DSheaf;
            break;
        case KernelBase::FBullet:
        case KernelBase::ZRestricted:
            throw std::domain_error("dualize: unsupported base");
    }
    return y;
}

inline KernelExpr global_twist(const KernelExpr& x, PicElt t) {
    KernelExpr y = x;
    y.twist = y.twist + t;
    return y;
}

}  // namespace weaving
