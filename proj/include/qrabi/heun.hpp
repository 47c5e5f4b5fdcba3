// heun.hpp: confluent Heun function HC(alpha,beta,gamma,delta,eta,x) evaluated
// by forward summation of the three-term coefficient recurrence
//   A_n h_n = B_n h_{n-1} + C_n h_{n-2},  h_0 = 1, h_{-1} = 0,
// valid for |x| < 1, plus the polynomial-truncation residual machinery.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qrabi::heun {

template <class Real>
struct HeunParamsT {
    Real alpha{}, beta{}, gamma{}, delta{}, eta{};

    // mu/nu are metadata derived from the five primary parameters; evaluation
    // never reads them.
    Real mu() const { return delta + alpha * (beta + gamma + 2) / 2; }
    Real nu() const { return eta + beta / 2 + (gamma - alpha) * (beta + 1) / 2; }
};
using HeunParams = HeunParamsT<double>;

struct HcOptions {
    int n_max = 500;
    double tol = 1e-12;
};

template <class Real>
struct HeunEvalT {
    Real value{};
    Real derivative{};   // d/dx
    Real second{};       // d2/dx2, from the twice-differentiated series
    int n_terms = 0;
    bool converged = false;
    Real tail_bound{};
};
using HeunEval = HeunEvalT<double>;

// |A_n| below this counts as a recurrence pole (A_n = 1 + beta/n is O(1)).
inline constexpr double pole_tol = 1e-12;

template <class Real>
Real coeff_A(const HeunParamsT<Real>& p, int n) {
    return 1 + p.beta / Real(n);
}

template <class Real>
Real coeff_B(const HeunParamsT<Real>& p, int n) {
    const Real nn = Real(n);
    return 1 + (p.beta + p.gamma - p.alpha - 1) / nn
             + (p.eta - p.beta / 2 + (p.gamma - p.alpha) * (p.beta - 1) / 2) / (nn * nn);
}

template <class Real>
Real coeff_C(const HeunParamsT<Real>& p, int n) {
    const Real nn = Real(n);
    return (p.delta + p.alpha * (p.beta + p.gamma) / 2 + p.alpha * (nn - 1)) / (nn * nn);
}

// h_0..h_{n_max}. A pole A_n ~ 0 with nonvanishing numerator aborts: that E
// sits on an exceptional baseline and must be handled by the truncation path.
template <class Real>
std::vector<Real> hc_coefficients(const HeunParamsT<Real>& p, int n_max) {
    using std::abs;
    if (n_max < 0) throw DomainError("hc_coefficients: n_max must be >= 0");
    std::vector<Real> h(static_cast<size_t>(n_max) + 1);
    h[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        const Real num = coeff_B(p, n) * h[n - 1]
                       + (n >= 2 ? coeff_C(p, n) * h[n - 2] : Real(0));
        const Real An = coeff_A(p, n);
        if (abs(An) < Real(pole_tol)) {
            const Real scale = std::max<Real>(
                {Real(1), abs(h[n - 1]), n >= 2 ? abs(h[n - 2]) : Real(0)});
            if (abs(num) < Real(pole_tol) * scale) {
                h[n] = 0;  // exact truncation: series terminates consistently
                continue;
            }
            throw PoleError("hc_coefficients: recurrence pole A_" + std::to_string(n)
                            + " = 0 with nonzero numerator");
        }
        h[n] = num / An;
    }
    return h;
}

// Series sum with running convergence control. Stops once three consecutive
// terms fall below tol*|partial sum| and the geometric tail estimate
// |t_n| r/(1-r) (r = observed term ratio) is below tol. Hitting n_max first
// leaves converged = false; no exception (callers inspect the flag).
template <class Real>
HeunEvalT<Real> hc_eval(const HeunParamsT<Real>& p, Real x, const HcOptions& opt = {}) {
    using std::abs;
    if (!(abs(x) < 1)) throw DomainError("hc_eval: series requires |x| < 1");
    if (!(opt.tol > 0) || opt.n_max < 1) throw DomainError("hc_eval: bad options");

    HeunEvalT<Real> out;
    Real hm2 = 0, hm1 = 1;      // h_{n-2}, h_{n-1}
    Real xpow = 1;              // x^{n-1} at the top of iteration n
    Real x2pow = 1;             // x^{n-2} for n >= 2
    Real sum = 1, dsum = 0, d2sum = 0;
    Real prev_abs_term = 1;     // |h_0 x^0|
    int small_run = 0;
    out.n_terms = 1;
    out.tail_bound = std::numeric_limits<Real>::infinity();

    for (int n = 1; n <= opt.n_max; ++n) {
        const Real num = coeff_B(p, n) * hm1 + (n >= 2 ? coeff_C(p, n) * hm2 : Real(0));
        const Real An = coeff_A(p, n);
        Real hn;
        if (abs(An) < Real(pole_tol)) {
            const Real scale = std::max<Real>({Real(1), abs(hm1), abs(hm2)});
            if (abs(num) >= Real(pole_tol) * scale)
                throw PoleError("hc_eval: recurrence pole A_" + std::to_string(n)
                                + " = 0 with nonzero numerator");
            hn = 0;
        } else {
            hn = num / An;
        }

        dsum += Real(n) * hn * xpow;
        if (n >= 2) {
            d2sum += Real(n) * Real(n - 1) * hn * x2pow;
            x2pow *= x;
        }
        xpow *= x;
        const Real term = hn * xpow;
        sum += term;
        ++out.n_terms;

        const Real at = abs(term);
        if (at < Real(opt.tol) * abs(sum)) ++small_run; else small_run = 0;
        Real tail = std::numeric_limits<Real>::infinity();
        if (at == 0) {
            tail = 0;
        } else if (prev_abs_term > 0 && at < prev_abs_term) {
            const Real r = at / prev_abs_term;
            tail = at * r / (1 - r);
        }
        prev_abs_term = at;
        out.tail_bound = tail;

        if (small_run >= 3 && tail < Real(opt.tol)) {
            out.converged = true;
            break;
        }
        hm2 = hm1;
        hm1 = hn;
    }

    out.value = sum;
    out.derivative = dsum;
    out.second = d2sum;
    return out;
}

// Residual of the series-termination closing relation at order N:
//   B_{N+1} h_N + C_{N+1} h_{N-1}
// computed after verifying the termination condition on delta,
//   delta = -(N + (gamma+beta+2)/2) alpha,
// which makes C_{N+2} vanish so that h_{N+1} = 0 propagates to all higher
// coefficients. The zero locus of the returned residual in (Delta, g) is the
// exceptional-point constraint curve.
template <class Real>
Real hc_truncation_residual(const HeunParamsT<Real>& p, int N) {
    using std::abs;
    if (N < 0) throw DomainError("hc_truncation_residual: N must be >= 0");
    const Real delta_cond = p.delta + (Real(N) + (p.gamma + p.beta + 2) / 2) * p.alpha;
    const Real scale = std::max<Real>(Real(1), abs(p.alpha) * (Real(N) + 1));
    if (abs(delta_cond) > Real(1e-9) * scale)
        throw InconsistentTruncation(
            "hc_truncation_residual: termination condition not met at N=" + std::to_string(N));

    Real hm1 = 0, h = 1;  // h_{-1}, h_0
    for (int n = 1; n <= N; ++n) {
        const Real An = coeff_A(p, n);
        if (abs(An) < Real(pole_tol))
            throw PoleError("hc_truncation_residual: interior pole at n=" + std::to_string(n));
        const Real next = (coeff_B(p, n) * h + coeff_C(p, n) * hm1) / An;
        hm1 = h;
        h = next;
    }
    return coeff_B(p, N + 1) * h + coeff_C(p, N + 1) * hm1;
}

} // namespace qrabi::heun
