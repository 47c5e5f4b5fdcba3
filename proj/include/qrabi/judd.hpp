// judd.hpp: exceptional part of the spectrum. At E = N1 - g^2 the Set-A series
// terminates at order N1 and the Set-B series at N2 = N1 - 1, provided
// (Delta, g) satisfies the closing constraint h_{N+1} = 0; the resulting
// polynomial solutions form a doubly degenerate level crossing.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "heun.hpp"
#include "rabi.hpp"

namespace qrabi::judd {

// Energy at which the series of the given set terminates at order N.
inline double truncation_energy(rabi::ParamSet set, int N, double g) {
    if (N < 0 || !(g > 0)) throw DomainError("truncation_energy: need N >= 0, g > 0");
    return set == rabi::ParamSet::A ? N - g * g : N + 1 - g * g;
}

struct JuddPoint {
    int N1 = 0;               // Set-A truncation order
    double g = 0;
    double delta = 0;
    double energy = 0;        // N1 - g^2
    double constraint_residual = 0;
};

namespace detail {

// Normalized closing residual for one set at its truncation energy. Dividing
// by prod(1 + |A_n|) keeps magnitudes O(1) across orders.
inline double normalized_residual(rabi::ParamSet set, int N, const rabi::ModelParams& m) {
    const double E = truncation_energy(set, N, m.g);
    const auto p = rabi::heun_params(set, E, m);
    double res = heun::hc_truncation_residual(p, N);
    for (int n = 1; n <= N; ++n) res /= 1 + std::abs(heun::coeff_A(p, n));
    return res;
}

} // namespace detail

// Constraint whose zero locus in (Delta, g) is the N1-th exceptional curve:
// the Set-B closing residual at order N2 = N1 - 1 and energy N1 - g^2.
inline double constraint_value(int N1, const rabi::ModelParams& m) {
    rabi::check(m);
    if (N1 < 1) throw DomainError("constraint_value: N1 must be >= 1");
    return detail::normalized_residual(rabi::ParamSet::B, N1 - 1, m);
}

// Both set residuals at the same point; they vanish on the same curve.
struct ConstraintPair {
    double set_b = 0;  // order N1 - 1
    double set_a = 0;  // order N1
};

inline ConstraintPair constraint_pair(int N1, const rabi::ModelParams& m) {
    rabi::check(m);
    if (N1 < 1) throw DomainError("constraint_pair: N1 must be >= 1");
    return {detail::normalized_residual(rabi::ParamSet::B, N1 - 1, m),
            detail::normalized_residual(rabi::ParamSet::A, N1, m)};
}

// All Delta > 0 on the N1-th curve for fixed g, by bracketing the constraint
// in u = Delta^2 and bisecting.
inline std::vector<double> solve_judd_delta(int N1, double g, double u_max = 16.0,
                                            double u_step = 1e-3, double u_tol = 1e-12) {
    if (N1 < 1 || !(g > 0)) throw DomainError("solve_judd_delta: need N1 >= 1, g > 0");
    const auto cons = [&](double u) {
        return constraint_value(N1, {std::sqrt(u), g});
    };
    std::vector<double> roots;
    double u_prev = u_step * 1e-3;  // just off Delta = 0
    double f_prev = cons(u_prev);
    for (double u = u_step; u <= u_max + u_step / 2; u += u_step) {
        const double f = cons(u);
        if (f_prev == 0) roots.push_back(std::sqrt(u_prev));
        else if (f_prev * f < 0) {
            double lo = u_prev, hi = u, flo = f_prev;
            while (hi - lo > u_tol) {
                const double mid = (lo + hi) / 2, fm = cons(mid);
                if (flo * fm <= 0) hi = mid; else { lo = mid; flo = fm; }
            }
            roots.push_back(std::sqrt((lo + hi) / 2));
        }
        u_prev = u;
        f_prev = f;
    }
    return roots;
}

struct JuddStateReport {
    rabi::FockState state1;   // from the terminating Type-I pair
    rabi::FockState state2;   // from the terminating Type-II pair
    double wronskian_z0 = 0;  // of the two f1 components; nonzero = truly degenerate
    int multiplicity = 2;
    double energy = 0;
};

namespace detail {

// Coefficients h_0..h_N of the terminating series, running the recurrence only
// below the closing order (all A_n there are nonzero).
inline std::vector<double> truncated_coefficients(rabi::ParamSet set, int N,
                                                  const rabi::ModelParams& m) {
    const double E = truncation_energy(set, N, m.g);
    const auto p = rabi::heun_params(set, E, m);
    std::vector<double> h(N + 1);
    h[0] = 1;
    for (int n = 1; n <= N; ++n)
        h[n] = (heun::coeff_B(p, n) * h[n - 1]
                + (n >= 2 ? heun::coeff_C(p, n) * h[n - 2] : 0.0))
               / heun::coeff_A(p, n);
    return h;
}

} // namespace detail

// The two polynomial eigenstates at E = N1 - g^2 for on-curve (Delta, g).
inline JuddStateReport judd_state(int N1, const rabi::ModelParams& m, int n_max = 40,
                                  double tail_tol = 1e-10) {
    rabi::check(m);
    if (N1 < 1 || n_max < 1) throw DomainError("judd_state: need N1 >= 1, n_max >= 1");
    const double residual = constraint_value(N1, m);
    if (std::abs(residual) >= 1e-9)
        throw OffCurve("judd_state: (delta, g) off the N1=" + std::to_string(N1)
                       + " exceptional curve, residual " + std::to_string(residual));

    const double E = N1 - m.g * m.g;
    const double ratio = m.delta / (E + m.g * m.g);  // = delta/N1
    const auto hA = detail::truncated_coefficients(rabi::ParamSet::A, N1, m);
    const auto hB = detail::truncated_coefficients(rabi::ParamSet::B, N1 - 1, m);

    const auto expand = [&](const std::vector<double>& h, double sx, double amp,
                            double se) {
        auto poly = rabi::detail::series_taylor(h, sx, m.g, n_max);
        for (auto& c : poly) c *= amp;
        return rabi::detail::exp_mul(poly, se, m.g);
    };

    // state 1: f1 = e^{-gz} P_A(x1), f2 = ratio e^{-gz} P_B(x1)
    const auto s1f1 = expand(hA, -1.0, 1.0, -1.0);
    const auto s1f2 = expand(hB, -1.0, ratio, -1.0);
    // state 2: f1 = ratio e^{gz} P_B(x2), f2 = e^{gz} P_A(x2)
    const auto s2f1 = expand(hB, 1.0, ratio, 1.0);
    const auto s2f2 = expand(hA, 1.0, 1.0, 1.0);

    JuddStateReport rep;
    rep.energy = E;
    rep.state1 = rabi::detail::assemble_state(s1f1, s1f2, n_max, tail_tol);
    rep.state2 = rabi::detail::assemble_state(s2f1, s2f2, n_max, tail_tol);
    rep.wronskian_z0 = s1f1[1] * s2f1[0] - s1f1[0] * s2f1[1];
    return rep;
}

// Exceptional points of the given parameters whose energy lies in the window.
inline std::vector<JuddPoint> points_in_window(const rabi::ModelParams& m, double e_min,
                                               double e_max, double residual_tol = 1e-9,
                                               int n1_limit = 64) {
    rabi::check(m);
    std::vector<JuddPoint> out;
    for (int N1 = 1; N1 <= n1_limit; ++N1) {
        const double E = N1 - m.g * m.g;
        if (E > e_max) break;
        if (E < e_min) continue;
        const double res = constraint_value(N1, m);
        if (std::abs(res) < residual_tol)
            out.push_back({N1, m.g, m.delta, E, res});
    }
    return out;
}

} // namespace qrabi::judd
