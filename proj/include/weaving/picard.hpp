#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace weaving {

// Element of the rank-2 Picard lattice of the stable-pair moduli spaces,
// stored in the (H, E) basis: H the hyperplane class pulled back from the
// base projective space, E the exceptional class of the first contraction.
// The genus is ambient context and is never stored here.
//
// The (m, n) chart is the line-bundle chart O(m,n) = (m+n)H - nE. It is the
// canonical chart for I/O and for the restriction rule.
struct PicElt {
    long long h = 0;
    long long e = 0;

    static constexpr PicElt of_mn(long long m, long long n) { return PicElt{m + n, -n}; }

    constexpr long long m() const { return h + e; }
    constexpr long long n() const { return -e; }

    friend constexpr PicElt operator+(PicElt a, PicElt b) { return {a.h + b.h, a.e + b.e}; }
    friend constexpr PicElt operator-(PicElt a, PicElt b) { return {a.h - b.h, a.e - b.e}; }
    constexpr PicElt operator-() const { return {-h, -e}; }
    friend constexpr PicElt operator*(long long c, PicElt a) { return {c * a.h, c * a.e}; }

    friend constexpr bool operator==(PicElt a, PicElt b) { return a.h == b.h && a.e == b.e; }
    friend constexpr bool operator!=(PicElt a, PicElt b) { return !(a == b); }
    friend constexpr bool operator<(PicElt a, PicElt b) {
        return a.h != b.h ? a.h < b.h : a.e < b.e;
    }

    bool is_zero() const { return h == 0 && e == 0; }

    std::string str() const {
        return "O(" + std::to_string(m()) + "," + std::to_string(n()) + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, PicElt b) { return os << b.str(); }
};

inline void to_json(nlohmann::json& j, const PicElt& b) {
    j = nlohmann::json{{"m", b.m()}, {"n", b.n()}};
}
inline void from_json(const nlohmann::json& j, PicElt& b) {
    b = PicElt::of_mn(j.at("m").get<long long>(), j.at("n").get<long long>());
}

// Wall weight of a line bundle at the wall crossing into level i:
// for b = O(m,n) the weight is n - (i-1)m. Additive in b.
inline long long wall_weight(PicElt b, long long wall) {
    if (wall < 1) throw std::domain_error("wall_weight: wall must be >= 1");
    return b.n() - (wall - 1) * b.m();
}

// Restriction of O(m,n) to the fiber of the degree-k incidence locus,
// a smaller stable-pair space: O(m,n) |-> O(m, n - k m).
inline PicElt restrict_to_fiber(PicElt b, long long k) {
    if (k < 0) throw std::domain_error("restrict_to_fiber: k must be >= 0");
    return PicElt::of_mn(b.m(), b.n() - k * b.m());
}

// Total degree of the restriction on a bottom-level fiber (a projective
// space), where the exceptional class dies and only m + n survives.
inline long long fiber_degree(PicElt b, long long k) {
    PicElt r = restrict_to_fiber(b, k);
    return r.m() + r.n();
}

enum class NamedBundle { Z, LambdaBar, Theta, OmegaM, Omega };

// Named generators for fixed genus g:
//   Z      = O(1, g-1)      exceptional divisor of the contraction to N
//   Lbar   = O(0, -1)       determinant-twist generator
//   theta  = O(2, 2g-3)     ample generator pulled back from N
//   omega(d) = O(-3, -(d+g-4))   canonical class of the degree-d space
//   omegaM = omega(2g-1)
// These satisfy theta = Lbar + 2Z and omegaM = Z - 2 theta = -3Z - 2 Lbar.
inline PicElt named_bundle(long long g, NamedBundle s, long long d = 0) {
    if (g < 2) throw std::domain_error("named_bundle: genus must be >= 2");
    switch (s) {
        case NamedBundle::Z: return PicElt::of_mn(1, g - 1);
        case NamedBundle::LambdaBar: return PicElt::of_mn(0, -1);
        case NamedBundle::Theta: return PicElt::of_mn(2, 2 * g - 3);
        case NamedBundle::OmegaM: return PicElt::of_mn(-3, -(3 * g - 5));
        case NamedBundle::Omega:
            if (d < 1 || d > 2 * g - 1)
                throw std::domain_error("named_bundle: omega(d) needs 1 <= d <= 2g-1");
            return PicElt::of_mn(-3, -(d + g - 4));
    }
    throw std::domain_error("named_bundle: unknown symbol");
}

inline PicElt bundle_z(long long g) { return named_bundle(g, NamedBundle::Z); }
inline PicElt bundle_lbar(long long g) { return named_bundle(g, NamedBundle::LambdaBar); }
inline PicElt bundle_theta(long long g) { return named_bundle(g, NamedBundle::Theta); }
inline PicElt bundle_omega_m(long long g) { return named_bundle(g, NamedBundle::OmegaM); }

// Express b in the {Z, theta} basis (unimodular for every g). Used for
// labels in the later stages, where twists are written as Z^a theta^c.
struct ZThetaExp {
    long long z = 0;
    long long theta = 0;
};

inline ZThetaExp z_theta_exponents(long long g, PicElt b) {
    PicElt Z = bundle_z(g), T = bundle_theta(g);
    // Solve a*Z + c*T = b over the integers; det(Z, T) = 1 in the (H,E) basis.
    long long det = Z.h * T.e - Z.e * T.h;
    long long a = (b.h * T.e - b.e * T.h) / det;
    long long c = (Z.h * b.e - Z.e * b.h) / det;
    if (a * Z.h + c * T.h != b.h || a * Z.e + c * T.e != b.e)
        throw std::domain_error("z_theta_exponents: inconsistent solve");
    return {a, c};
}

}  // namespace weaving
