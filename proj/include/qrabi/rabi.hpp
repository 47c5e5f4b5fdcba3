// rabi.hpp: analytic solution branches, spectral condition functions, and Fock
// eigenstate assembly for H = a^dag a + Delta sigma_z + g sigma_x (a^dag + a),
// in units hbar = omega = 1.
//
// Working variable z runs over the open interval (-g, g); the two series
// arguments are x1 = (g-z)/2g and x2 = (g+z)/2g, both inside (0, 1).
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "heun.hpp"

namespace qrabi::rabi {

struct ModelParams {
    double delta{};  // half level splitting, > 0
    double g{};      // coupling, > 0
};

inline void check(const ModelParams& m) {
    if (!(m.delta > 0) || !std::isfinite(m.delta) || !(m.g > 0) || !std::isfinite(m.g))
        throw DomainError("ModelParams: require finite delta > 0 and g > 0");
}

inline void check_z(double z, const ModelParams& m) {
    if (!(std::abs(z) < m.g))
        throw DomainError("z outside the valid interval (-g, g)");
}

enum class ParamSet { A, B };
enum class Branch { TypeI, TypeII };
enum class Component { f1, f2 };
enum class Family { plus, minus };
enum class PairKind { symmetric, antisymmetric, asym1, asym2 };

struct BranchId {
    Branch branch{};
    Component component{};
};

// Spin-up / spin-down amplitudes over the photon-number basis.
struct FockState {
    std::vector<double> up;
    std::vector<double> down;
    int n_max = 0;
};

// The two parameter sets of the series solutions. Set A belongs to the f1-type
// equation, Set B to the f2-type one; the Type-II sets coincide with these.
inline heun::HeunParams heun_params(ParamSet set, double E, const ModelParams& m) {
    check(m);
    if (!std::isfinite(E)) throw DomainError("heun_params: E must be finite");
    const double g2 = m.g * m.g;
    const double D = m.delta;
    heun::HeunParams p;
    p.alpha = 4 * g2;
    if (set == ParamSet::A) {
        p.beta = -(E + g2 + 1);
        p.gamma = -(E + g2);
        p.delta = -2 * g2;
        p.eta = -1.5 * g2 * g2 + (1 - 2 * E) * g2 / 2 + (E * E + E - 2 * D * D + 1) / 2;
    } else {
        p.beta = -(E + g2);
        p.gamma = -(E + g2 + 1);
        p.delta = 2 * g2;
        p.eta = -1.5 * g2 * g2 - (3 + 2 * E) * g2 / 2 + (E * E + E - 2 * D * D + 1) / 2;
    }
    return p;
}

// Branch-constant ratio Delta/(E+g^2) fixing the relative normalization of the
// two components (the free overall constant is 1 on the Set-A factor).
inline double branch_ratio(double E, const ModelParams& m) {
    const double w = E + m.g * m.g;
    if (std::abs(w) < 1e-12)
        throw RatioPole("branch ratio Delta/(E+g^2) undefined: E too close to -g^2");
    return m.delta / w;
}

struct BranchEval {
    double value{}, d1{}, d2{};  // d/dz derivatives
};

// f(z) = amp * e^{se*g*z} * HC(params, (g + sx*z)/2g) with its z-derivatives.
inline BranchEval eval_branch(BranchId id, double E, double z, const ModelParams& m,
                              const heun::HcOptions& opt = {}) {
    check(m);
    check_z(z, m);
    const bool type1 = id.branch == Branch::TypeI;
    const double sx = type1 ? -1.0 : 1.0;
    const double se = type1 ? -m.g : m.g;
    const bool set_a = (id.component == Component::f1) == type1;
    const double amp = set_a ? 1.0 : branch_ratio(E, m);

    const auto p = heun_params(set_a ? ParamSet::A : ParamSet::B, E, m);
    const double x = (m.g + sx * z) / (2 * m.g);
    const auto hc = heun::hc_eval(p, x, opt);
    const double dxdz = sx / (2 * m.g);
    const double e = amp * std::exp(se * z);

    BranchEval out;
    out.value = e * hc.value;
    out.d1 = e * (se * hc.value + hc.derivative * dxdz);
    out.d2 = e * (se * se * hc.value + 2 * se * hc.derivative * dxdz
                  + hc.second * dxdz * dxdz);
    return out;
}

inline double eval_f(BranchId id, double E, double z, const ModelParams& m) {
    return eval_branch(id, E, z, m).value;
}

// Condition building blocks F_1..F_4:
//   F1 = (E+g^2) HC_A(x1) + ((g+z)/2g) HC_A'(x1)
//   F2 = HC_B(x1)
//   F3 = HC_A(x2)
//   F4 = (E-g^2-2gz) HC_B(x2) - ((g+z)/2g) HC_B'(x2)
inline double eval_F(int k, double E, double z, const ModelParams& m) {
    check(m);
    check_z(z, m);
    const double g = m.g, g2 = g * g;
    const double x1 = (g - z) / (2 * g), x2 = (g + z) / (2 * g);
    switch (k) {
        case 1: {
            const auto h = heun::hc_eval(heun_params(ParamSet::A, E, m), x1);
            return (E + g2) * h.value + x2 * h.derivative;
        }
        case 2:
            return heun::hc_eval(heun_params(ParamSet::B, E, m), x1).value;
        case 3:
            return heun::hc_eval(heun_params(ParamSet::A, E, m), x2).value;
        case 4: {
            const auto h = heun::hc_eval(heun_params(ParamSet::B, E, m), x2);
            return (E - g2 - 2 * g * z) * h.value - x2 * h.derivative;
        }
        default:
            throw DomainError("eval_F: index must be 1..4");
    }
}

// Spectral condition functions. plus family:
//   G1 = F1 + (D/w) e^{2gz} F4,  G2 = F3 + (D/w) e^{-2gz} F2,
//   G3 = F1 - D e^{2gz} F3,      G4 = F4 - D e^{-2gz} F2,
// minus family flips every second-term sign.
inline double eval_G(Family fam, int index, double E, double z, const ModelParams& m) {
    check(m);
    check_z(z, m);
    const double s = fam == Family::plus ? 1.0 : -1.0;
    const double D = m.delta, g = m.g;
    switch (index) {
        case 1:
            return eval_F(1, E, z, m)
                 + s * branch_ratio(E, m) * std::exp(2 * g * z) * eval_F(4, E, z, m);
        case 2:
            return eval_F(3, E, z, m)
                 + s * branch_ratio(E, m) * std::exp(-2 * g * z) * eval_F(2, E, z, m);
        case 3:
            return eval_F(1, E, z, m) - s * D * std::exp(2 * g * z) * eval_F(3, E, z, m);
        case 4:
            return eval_F(4, E, z, m) - s * D * std::exp(-2 * g * z) * eval_F(2, E, z, m);
        default:
            throw DomainError("eval_G: index must be 1..4");
    }
}

// K functions from the boundary matching of the combined solutions. Both
// printed representations are computed; their agreement (to 1e-10 relative to
// max(1,|F1|+|F4|)) is a hard internal check.
inline double eval_K(Family fam, double E, double z, const ModelParams& m) {
    check(m);
    check_z(z, m);
    const double D = m.delta, g = m.g;
    const double r = branch_ratio(E, m);
    const double F1 = eval_F(1, E, z, m), F2 = eval_F(2, E, z, m);
    const double F3 = eval_F(3, E, z, m), F4 = eval_F(4, E, z, m);
    const double ep = std::exp(g * z), em = std::exp(-g * z);
    const double e2p = std::exp(2 * g * z), e2m = std::exp(-2 * g * z);

    double via12, via34;
    if (fam == Family::plus) {
        via12 = em * (F1 + r * e2p * F4) - D * ep * (F3 + r * e2m * F2);
        via34 = em * (F1 - D * e2p * F3) + r * ep * (F4 - D * e2m * F2);
    } else {
        via12 = em * (F1 - r * e2p * F4) + D * ep * (F3 - r * e2m * F2);
        via34 = em * (F1 + D * e2p * F3) - r * ep * (F4 + D * e2m * F2);
    }
    const double scale = std::max(1.0, std::abs(F1) + std::abs(F4));
    if (std::abs(via12 - via34) > 1e-10 * scale)
        throw DomainError("eval_K: the two internal representations disagree");
    return via12;
}

// W1 pairs the f1 components of the two solution types, W2 the f2 components:
//   W = f'^{I} f^{II} - f^{I} f'^{II}.
inline double wronskian(int index, double E, double z, const ModelParams& m) {
    if (index != 1 && index != 2) throw DomainError("wronskian: index must be 1 or 2");
    const Component c = index == 1 ? Component::f1 : Component::f2;
    const auto a = eval_branch({Branch::TypeI, c}, E, z, m);
    const auto b = eval_branch({Branch::TypeII, c}, E, z, m);
    return a.d1 * b.value - a.value * b.d1;
}

// Residual of the second-order equation f'' + p f' + q f = 0 satisfied by the
// f1-type branches for every E:
//   p = ((1-2E-2g^2) z - g)/(z^2-g^2)
//   q = (-g^2 z^2 + g z + E^2 - g^2 - Delta^2)/(z^2-g^2)
inline double ode_residual(double E, double z, BranchId id, const ModelParams& m) {
    check(m);
    check_z(z, m);
    const double g2 = m.g * m.g, den = z * z - g2;
    const double p = ((1 - 2 * E - 2 * g2) * z - m.g) / den;
    const double q = (-g2 * z * z + m.g * z + E * E - g2 - m.delta * m.delta) / den;
    // the second-derivative series trails the value series in accuracy, so
    // evaluate tighter than the default before forming the cancellation
    heun::HcOptions opt;
    opt.tol = 1e-14;
    const auto f = eval_branch(id, E, z, m, opt);
    return f.d2 + p * f.d1 + q * f.value;
}

struct PairEval {
    double f1{}, f1d{}, f2{}, f2d{};
};

// Combined solutions: symmetric = TypeI + TypeII componentwise, antisymmetric
// = TypeI - TypeII, asym1/asym2 = a single type alone.
inline PairEval eval_pair(PairKind kind, double E, double z, const ModelParams& m) {
    check(m);
    check_z(z, m);
    const double s1 = (kind == PairKind::asym2) ? 0.0 : 1.0;
    double s2;
    switch (kind) {
        case PairKind::symmetric: s2 = 1.0; break;
        case PairKind::antisymmetric: s2 = -1.0; break;
        case PairKind::asym1: s2 = 0.0; break;
        default: s2 = 1.0; break;  // asym2: TypeII alone
    }
    PairEval out;
    if (s1 != 0) {
        const auto a1 = eval_branch({Branch::TypeI, Component::f1}, E, z, m);
        const auto a2 = eval_branch({Branch::TypeI, Component::f2}, E, z, m);
        out.f1 += s1 * a1.value; out.f1d += s1 * a1.d1;
        out.f2 += s1 * a2.value; out.f2d += s1 * a2.d1;
    }
    if (s2 != 0) {
        const auto b1 = eval_branch({Branch::TypeII, Component::f1}, E, z, m);
        const auto b2 = eval_branch({Branch::TypeII, Component::f2}, E, z, m);
        out.f1 += s2 * b1.value; out.f1d += s2 * b1.d1;
        out.f2 += s2 * b2.value; out.f2d += s2 * b2.d1;
    }
    return out;
}

// Residuals of the coupled first-order system
//   f1' = (E - gz)/(z+g) f1 - Delta/(z+g) f2
//   f2' = (E + gz)/(z-g) f2 - Delta/(z-g) f1
// for the selected combination; zero (to numerics) when the pair solves it.
inline std::array<double, 2> coupled_residuals(PairKind kind, double E, double z,
                                               const ModelParams& m) {
    const auto p = eval_pair(kind, E, z, m);
    const double r1 = p.f1d - ((E - m.g * z) * p.f1 - m.delta * p.f2) / (z + m.g);
    const double r2 = p.f2d - ((E + m.g * z) * p.f2 - m.delta * p.f1) / (z - m.g);
    return {r1, r2};
}

namespace detail {

// Taylor coefficients in z (up to degree deg) of sum_k h_k ((g + sx*z)/2g)^k,
// built by accumulating powers of (1 + sx*z/g)/2 with exact degree truncation.
inline std::vector<double> series_taylor(const std::vector<double>& h, double sx,
                                         double g, int deg) {
    std::vector<double> acc(deg + 1, 0.0), q(deg + 1, 0.0);
    q[0] = 1.0;
    acc[0] = h[0];
    for (int k = 1; k < static_cast<int>(h.size()); ++k) {
        for (int n = deg; n >= 1; --n) q[n] = 0.5 * (q[n] + sx / g * q[n - 1]);
        q[0] *= 0.5;
        if (h[k] != 0.0)
            for (int n = 0; n <= deg; ++n) acc[n] += h[k] * q[n];
    }
    return acc;
}

inline std::vector<double> hc_taylor(const heun::HeunParams& p, double sx, double g,
                                     int deg, int n_heun) {
    return series_taylor(heun::hc_coefficients(p, n_heun), sx, g, deg);
}

// poly(z) * e^{s*g*z}, truncated at the same degree.
inline std::vector<double> exp_mul(const std::vector<double>& poly, double s, double g) {
    const int deg = static_cast<int>(poly.size()) - 1;
    std::vector<double> ek(deg + 1), out(deg + 1, 0.0);
    ek[0] = 1.0;
    for (int k = 1; k <= deg; ++k) ek[k] = ek[k - 1] * s * g / k;
    for (int j = 0; j <= deg; ++j)
        for (int k = 0; k + j <= deg; ++k) out[j + k] += poly[j] * ek[k];
    return out;
}

inline double sqrt_factorial(int n) { return std::exp(0.5 * std::lgamma(n + 1.0)); }

// psi1 = (f1+f2)/2 -> spin-up, psi2 = (f1-f2)/2 -> spin-down; photon amplitude
// over |n> is the Taylor coefficient times sqrt(n!).
inline FockState assemble_state(const std::vector<double>& f1, const std::vector<double>& f2,
                                int n_max, double tail_tol) {
    FockState st;
    st.n_max = n_max;
    st.up.resize(n_max + 1);
    st.down.resize(n_max + 1);
    double norm2 = 0;
    for (int n = 0; n <= n_max; ++n) {
        const double wgt = sqrt_factorial(n);
        st.up[n] = 0.5 * (f1[n] + f2[n]) * wgt;
        st.down[n] = 0.5 * (f1[n] - f2[n]) * wgt;
        norm2 += st.up[n] * st.up[n] + st.down[n] * st.down[n];
    }
    const double norm = std::sqrt(norm2);
    const double tail = std::max(std::abs(st.up[n_max]), std::abs(st.down[n_max]));
    if (!(norm > 0) || tail > tail_tol * norm)
        throw TruncationError("state_coefficients: weighted amplitude tail at n_max "
                              "exceeds the requested tolerance");
    for (auto& a : st.up) a /= norm;
    for (auto& a : st.down) a /= norm;
    return st;
}

} // namespace detail

// Fock expansion of the combined solution of the given kind at energy E. The
// tail precondition |c_n sqrt(n!)| < tail_tol * norm at n = n_max is enforced;
// tail_tol may be loosened when E itself is only known to finite precision,
// which bounds the reachable tail from below.
inline FockState state_coefficients(PairKind kind, double E, const ModelParams& m,
                                    int n_max, double tail_tol = 1e-10,
                                    int n_heun = 400) {
    check(m);
    if (n_max < 1) throw DomainError("state_coefficients: n_max must be >= 1");
    const double g = m.g;
    const auto pA = heun_params(ParamSet::A, E, m);
    const auto pB = heun_params(ParamSet::B, E, m);
    const double r = branch_ratio(E, m);

    // Type-I parts: e^{-gz} HC(., x1); Type-II parts: e^{+gz} HC(., x2).
    const auto expand = [&](const heun::HeunParams& p, double sx, double amp,
                            double se) {
        auto poly = detail::hc_taylor(p, sx, g, n_max, n_heun);
        for (auto& c : poly) c *= amp;
        return detail::exp_mul(poly, se, g);
    };

    std::vector<double> f1(n_max + 1, 0.0), f2(n_max + 1, 0.0);
    const bool has1 = kind != PairKind::asym2;
    const bool has2 = kind != PairKind::asym1;
    const double s2 = kind == PairKind::antisymmetric ? -1.0 : 1.0;
    if (has1) {
        const auto a1 = expand(pA, -1.0, 1.0, -1.0);
        const auto a2 = expand(pB, -1.0, r, -1.0);
        for (int n = 0; n <= n_max; ++n) { f1[n] += a1[n]; f2[n] += a2[n]; }
    }
    if (has2) {
        const auto b1 = expand(pB, 1.0, r, 1.0);
        const auto b2 = expand(pA, 1.0, 1.0, 1.0);
        for (int n = 0; n <= n_max; ++n) { f1[n] += s2 * b1[n]; f2[n] += s2 * b2[n]; }
    }
    return detail::assemble_state(f1, f2, n_max, tail_tol);
}

} // namespace qrabi::rabi
