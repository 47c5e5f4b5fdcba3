// test_oracle.cpp: truncated-matrix diagonalization ground truth.
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include <qrabi/oracle.hpp>

using namespace qrabi;
using namespace qrabi::oracle;

TEST_SUITE("oracle") {

TEST_CASE("hamiltonian matrix entries at the smallest truncation") {
    const rabi::ModelParams m{0.5, 0.1};
    const auto H = build_hamiltonian(m, 1);
    REQUIRE(H.rows() == 4);
    CHECK(H(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(H(1, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(H(2, 2) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(H(3, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(H(0, 3) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(H(1, 2) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(H(3, 0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(H(0, 1) == 0.0);
    CHECK(H(0, 2) == 0.0);
    CHECK((H - H.transpose()).norm() == 0.0);
}

TEST_CASE("four-level eigenvalues in closed form") {
    // the n_max = 1 block splits into two 2x2 parity blocks with eigenvalues
    // 0.5 +- sqrt(1 + g^2) and 0.5 -+ g for delta = 0.5, g = 0.1
    const auto H = build_hamiltonian(rabi::ModelParams{0.5, 0.1}, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const auto ev = es.eigenvalues();
    CHECK(ev(0) == doctest::Approx(-0.504987562112089).epsilon(1e-12));
    CHECK(ev(1) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(ev(2) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(ev(3) == doctest::Approx(1.504987562112089).epsilon(1e-12));
}

TEST_CASE("parity operator diagonal") {
    const auto P = parity_diagonal(2);
    // index 2n + s with s = 0 spin-up: parity = spin * (-1)^n
    CHECK(P(0) == 1.0);
    CHECK(P(1) == -1.0);
    CHECK(P(2) == -1.0);
    CHECK(P(3) == 1.0);
    CHECK(P(4) == 1.0);
    CHECK(P(5) == -1.0);
}

TEST_CASE("frozen benchmark spectrum with parities") {
    const auto s = diagonalize(rabi::ModelParams{0.7, 0.8}, 160);
    REQUIRE(s.converged_count >= 16);
    const double ref[] = {-1.016598376092056, -0.666283825675838, 0.059184679777114,
                          0.605776795327462,  1.268745635335339,  1.417465967590851,
                          2.254770479788172,  2.501495402287519,  3.157557649336105,
                          3.570464569803490,  4.175624610862011,  4.516175261039152,
                          5.283332557390994,  5.421453393768165,  6.324902891681058,
                          6.402842898624218};
    const int par[] = {-1, 1, -1, 1, 1, -1, 1, -1, -1, 1, 1, -1, -1, 1, -1, 1};
    for (int k = 0; k < 16; ++k) {
        CHECK(s.energies[k] == doctest::Approx(ref[k]).epsilon(1e-9));
        CHECK(s.parities[k] == par[k]);
        CHECK(std::abs(std::abs(s.parity_expect[k]) - 1.0) < 1e-9);
    }
}

TEST_CASE("eigenvalues are stable under doubling the truncation") {
    const rabi::ModelParams m{0.7, 0.8};
    const auto a = diagonalize(m, 80);
    const auto b = diagonalize(m, 160);
    REQUIRE(a.converged_count >= 16);
    for (int k = 0; k < 16; ++k)
        CHECK(std::abs(a.energies[k] - b.energies[k]) < 1e-8);
}

TEST_CASE("insufficient truncation throws") {
    CHECK_THROWS_AS((void)diagonalize(rabi::ModelParams{0.7, 2.5}, 2),
                    ConvergenceError);
}

TEST_CASE("decoupled limit reproduces displaced-oscillator ladders") {
    // g = 0: exact eigenvalues n +- delta
    const auto s = diagonalize(rabi::ModelParams{0.3, 0.0}, 40);
    CHECK(s.energies[0] == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(s.energies[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s.energies[2] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(s.energies[3] == doctest::Approx(1.3).epsilon(1e-12));
    // delta = 0: E = m - g^2, each level twice
    const auto d = diagonalize(rabi::ModelParams{0.0, 0.6}, 120);
    for (int mlevel = 0; mlevel < 3; ++mlevel) {
        CHECK(d.energies[2 * mlevel]
              == doctest::Approx(mlevel - 0.36).epsilon(1e-10));
        CHECK(std::abs(d.energies[2 * mlevel + 1] - d.energies[2 * mlevel]) < 1e-10);
    }
}

TEST_CASE("degenerate pair is split below tolerance and parity-resolved") {
    const auto s = diagonalize(rabi::ModelParams{0.6, 0.4}, 120);
    // the doubly-degenerate level at 1 - g^2
    int k = 0;
    while (std::abs(s.energies[k] - 0.84) > 1e-6) ++k;
    CHECK(std::abs(s.energies[k] - 0.84) < 1e-7);
    CHECK(std::abs(s.energies[k + 1] - 0.84) < 1e-7);
    CHECK(s.parities[k] * s.parities[k + 1] == -1);
    CHECK(std::abs(std::abs(s.parity_expect[k]) - 1.0) < 1e-8);
    CHECK(std::abs(std::abs(s.parity_expect[k + 1]) - 1.0) < 1e-8);
}

TEST_CASE("eigenvector states are orthonormal under the overlap") {
    const auto s = diagonalize(rabi::ModelParams{0.7, 0.8}, 60);
    const auto a = eigenvector_state(s, 0);
    const auto b = eigenvector_state(s, 1);
    CHECK(overlap(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(overlap(a, b) < 1e-10);
    CHECK(subspace_overlap(a, s, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("overlap pads mismatched truncations and rejects a null state") {
    rabi::FockState a;
    a.n_max = 1;
    a.up = {1.0, 0.0};
    a.down = {0.0, 0.0};
    rabi::FockState b;
    b.n_max = 3;
    b.up = {1.0, 0.0, 0.0, 0.0};
    b.down = {0.0, 0.0, 0.0, 0.0};
    CHECK(overlap(a, b) == doctest::Approx(1.0).epsilon(1e-15));
    rabi::FockState z;
    z.n_max = 1;
    z.up = {0.0, 0.0};
    z.down = {0.0, 0.0};
    CHECK_THROWS_AS((void)overlap(a, z), DomainError);
}

}
