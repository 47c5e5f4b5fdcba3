// oracle.hpp: independent ground truth for the spectral claims. Dense
// diagonalization of H = a^dag a + Delta sigma_z + g sigma_x (a^dag + a) in
// the truncated |n> x |up/down> basis, with parity labels and a doubling-based
// convergence check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "rabi.hpp"

namespace qrabi::oracle {

// The oracle also covers the decoupled (g = 0) and degenerate (delta = 0)
// limits that the analytic branches exclude.
inline void check_relaxed(const rabi::ModelParams& m) {
    if (!(m.delta >= 0) || !std::isfinite(m.delta) || !(m.g >= 0) || !std::isfinite(m.g))
        throw DomainError("oracle: require finite delta >= 0 and g >= 0");
}

// Basis index 2n + s with s = 0 for spin-up, 1 for spin-down.
inline Eigen::MatrixXd build_hamiltonian(const rabi::ModelParams& m, int n_max) {
    check_relaxed(m);
    if (n_max < 1) throw DomainError("build_hamiltonian: n_max must be >= 1");
    const int dim = 2 * (n_max + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n <= n_max; ++n) {
        H(2 * n, 2 * n) = n + m.delta;
        H(2 * n + 1, 2 * n + 1) = n - m.delta;
        if (n + 1 <= n_max) {
            const double c = m.g * std::sqrt(n + 1.0);
            // sigma_x flips the spin while a^dag + a shifts the photon number
            H(2 * n, 2 * (n + 1) + 1) = H(2 * (n + 1) + 1, 2 * n) = c;
            H(2 * n + 1, 2 * (n + 1)) = H(2 * (n + 1), 2 * n + 1) = c;
        }
    }
    return H;
}

// Diagonal of the parity operator sigma_z (-1)^{a^dag a} in the same basis.
inline Eigen::VectorXd parity_diagonal(int n_max) {
    const int dim = 2 * (n_max + 1);
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
        const int n = i / 2;
        const double spin = (i % 2 == 0) ? 1.0 : -1.0;
        p(i) = spin * (n % 2 == 0 ? 1.0 : -1.0);
    }
    return p;
}

struct OracleSpectrum {
    std::vector<double> energies;        // ascending
    std::vector<int> parities;           // sign of the parity expectation
    std::vector<double> parity_expect;   // the expectation itself (diagnostic)
    Eigen::MatrixXd vectors;             // eigenvectors as columns
    int n_max = 0;
    int converged_count = 0;
};

inline OracleSpectrum diagonalize(const rabi::ModelParams& m, int n_max,
                                  double tol = 1e-8) {
    check_relaxed(m);
    if (n_max < 1) throw DomainError("diagonalize: n_max must be >= 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_hamiltonian(m, n_max));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(
        build_hamiltonian(m, 2 * n_max), Eigen::EigenvaluesOnly);

    OracleSpectrum out;
    out.n_max = n_max;
    const int dim = 2 * (n_max + 1);
    out.energies.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    out.vectors = solver.eigenvectors();

    while (out.converged_count < dim
           && std::abs(out.energies[out.converged_count]
                       - ref.eigenvalues()(out.converged_count)) < tol)
        ++out.converged_count;
    if (out.converged_count < 5)
        throw NonConvergence("diagonalize: fewer than 5 eigenvalues stable under "
                             "doubling the truncation");

    // Near-degenerate clusters get rotated so each column carries a sharp
    // parity; otherwise the solver returns arbitrary mixtures in the pair.
    const Eigen::VectorXd pd = parity_diagonal(n_max);
    int lo = 0;
    while (lo < dim) {
        int hi = lo + 1;
        while (hi < dim
               && std::abs(out.energies[hi] - out.energies[hi - 1])
                      < 1e-8 * std::max(1.0, std::abs(out.energies[hi])))
            ++hi;
        if (hi - lo > 1) {
            const auto block = out.vectors.middleCols(lo, hi - lo);
            const Eigen::MatrixXd psub = block.transpose() * pd.asDiagonal() * block;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rot(psub);
            out.vectors.middleCols(lo, hi - lo) = block * rot.eigenvectors();
        }
        lo = hi;
    }

    out.parities.resize(dim);
    out.parity_expect.resize(dim);
    for (int k = 0; k < dim; ++k) {
        const auto v = out.vectors.col(k);
        const double e = v.dot(pd.asDiagonal() * v);
        out.parity_expect[k] = e;
        out.parities[k] = e >= 0 ? 1 : -1;
    }
    return out;
}

// |<a|b>| after normalizing both and zero-padding the shorter state.
inline double overlap(const rabi::FockState& a, const rabi::FockState& b) {
    const int n = std::max(a.n_max, b.n_max);
    double dot = 0, na = 0, nb = 0;
    for (int k = 0; k <= n; ++k) {
        const double au = k <= a.n_max ? a.up[k] : 0.0;
        const double ad = k <= a.n_max ? a.down[k] : 0.0;
        const double bu = k <= b.n_max ? b.up[k] : 0.0;
        const double bd = k <= b.n_max ? b.down[k] : 0.0;
        dot += au * bu + ad * bd;
        na += au * au + ad * ad;
        nb += bu * bu + bd * bd;
    }
    if (!(na > 0) || !(nb > 0)) throw DomainError("overlap: zero-norm state");
    return std::abs(dot) / std::sqrt(na * nb);
}

inline rabi::FockState eigenvector_state(const OracleSpectrum& s, int k) {
    if (k < 0 || k >= static_cast<int>(s.energies.size()))
        throw DomainError("eigenvector_state: index out of range");
    rabi::FockState st;
    st.n_max = s.n_max;
    st.up.resize(s.n_max + 1);
    st.down.resize(s.n_max + 1);
    for (int n = 0; n <= s.n_max; ++n) {
        st.up[n] = s.vectors(2 * n, k);
        st.down[n] = s.vectors(2 * n + 1, k);
    }
    return st;
}

// Fidelity of a state against the span of oracle eigenvectors [lo, hi).
inline double subspace_overlap(const rabi::FockState& st, const OracleSpectrum& s,
                               int lo, int hi) {
    double acc = 0;
    for (int k = lo; k < hi; ++k) {
        const double o = overlap(st, eigenvector_state(s, k));
        acc += o * o;
    }
    return std::sqrt(acc);
}

} // namespace qrabi::oracle
