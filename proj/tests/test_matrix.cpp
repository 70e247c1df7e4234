#include <doctest.h>

#include <cmath>

#include "channelforge/matrix.hpp"
#include "test_support.hpp"

using namespace channelforge;
using cftest::power_iteration_op_norm;
using cftest::random_complex;
using cftest::random_density_matrix;
using cftest::random_hermitian;

TEST_CASE("svd of the identity") {
    const CMat id = CMat::Identity(2, 2);
    const SvdResult result = svd(id);
    CHECK(result.singular_values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.singular_values[1] == doctest::Approx(1.0).epsilon(1e-12));
    const CMat rebuilt = result.left * result.singular_values.asDiagonal() * result.right;
    CHECK(max_abs_diff(rebuilt, id) < 1e-12);
}

TEST_CASE("svd of a diagonal attenuation operator") {
    const double eps = 0.36;
    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = std::sqrt(1.0 - eps);
    const SvdResult result = svd(a);
    CHECK(result.singular_values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.singular_values[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("svd reconstructs random matrices") {
    Prng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const CMat m = random_complex(3, 3, rng);
        const SvdResult result = svd(m);
        CHECK(is_unitary(result.left, 1e-10));
        CHECK(is_unitary(result.right, 1e-10));
        for (Eigen::Index i = 0; i + 1 < result.singular_values.size(); ++i) {
            CHECK(result.singular_values[i] >= result.singular_values[i + 1]);
        }
        const CMat rebuilt = result.left * result.singular_values.asDiagonal() * result.right;
        CHECK(max_abs_diff(rebuilt, m) < 1e-10);
    }
}

TEST_CASE("op_norm basics") {
    CMat decay = CMat::Zero(2, 2);
    decay(0, 1) = std::sqrt(0.5);
    CHECK(op_norm(decay) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(op_norm(CMat::Zero(3, 3)) == 0.0);
}

TEST_CASE("op_norm matches power iteration") {
    Prng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 3);
        const CMat m = random_complex(n, n, rng);
        CHECK(op_norm(m) == doctest::Approx(power_iteration_op_norm(m)).epsilon(1e-8));
    }
}

TEST_CASE("op_norm is invariant under adjoint and unitary multiplication") {
    Prng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const CMat m = random_complex(3, 3, rng);
        CHECK(op_norm(m) == doctest::Approx(op_norm(m.adjoint())).epsilon(1e-9));
        const CMat u = random_unitary(3, rng);
        const CMat w = random_unitary(3, rng);
        CHECK(op_norm(u * m * w) == doctest::Approx(op_norm(m)).epsilon(1e-9));
        const RVec s_before = svd(m).singular_values;
        const RVec s_after = svd(u * m * w).singular_values;
        CHECK((s_before - s_after).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("herm_eig on diagonal input") {
    CMat h = CMat::Zero(2, 2);
    h(0, 0) = 0.3;
    h(1, 1) = 0.7;
    const EigResult eig = herm_eig(h);
    CHECK(eig.eigenvalues[0] == doctest::Approx(0.7));
    CHECK(eig.eigenvalues[1] == doctest::Approx(0.3));
}

TEST_CASE("herm_eig of the maximally entangled projector") {
    const CMat proj = cftest::bell_state_projector();
    const EigResult eig = herm_eig(proj);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i < 4; ++i) {
        CHECK(std::abs(eig.eigenvalues[i]) < 1e-12);
    }
}

TEST_CASE("herm_eig reconstruction and orthonormality") {
    Prng rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        const CMat h = random_hermitian(4, rng);
        const EigResult eig = herm_eig(h);
        CHECK(is_unitary(eig.eigenvectors, 1e-10));
        const CMat rebuilt =
            eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.adjoint();
        CHECK(max_abs_diff(rebuilt, h) < 1e-9);
        for (Eigen::Index k = 0; k < 4; ++k) {
            const CVec residual =
                h * eig.eigenvectors.col(k) - eig.eigenvalues[k] * eig.eigenvectors.col(k);
            CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(herm_eig(m), Error);
}

TEST_CASE("psd_sqrt closed forms") {
    const CMat half = CMat::Identity(2, 2) / 2.0;
    CHECK(max_abs_diff(psd_sqrt(half), CMat::Identity(2, 2) / std::sqrt(2.0)) < 1e-12);

    CMat p = CMat::Zero(2, 2);
    p(0, 0) = 4.0 / 13.0;
    p(1, 1) = 9.0 / 13.0;
    CMat expected = CMat::Zero(2, 2);
    expected(0, 0) = 2.0 / std::sqrt(13.0);
    expected(1, 1) = 3.0 / std::sqrt(13.0);
    CHECK(max_abs_diff(psd_sqrt(p), expected) < 1e-12);
}

TEST_CASE("psd_sqrt squares back to the input") {
    Prng rng(19);
    for (int trial = 0; trial < 15; ++trial) {
        const CMat rho = random_density_matrix(3, rng);
        const CMat root = psd_sqrt(rho);
        CHECK(is_psd(root, 1e-9));
        CHECK(max_abs_diff(root * root, rho) < 1e-8);
    }
}

TEST_CASE("psd_sqrt rejects indefinite matrices") {
    CMat m = CMat::Identity(2, 2);
    m(1, 1) = -0.1;
    CHECK_THROWS_AS(psd_sqrt(m), Error);
}

TEST_CASE("fidelity special values") {
    Prng rng(23);
    const CMat rho = random_density_matrix(2, rng);
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

    CMat ket0 = CMat::Zero(2, 2);
    ket0(0, 0) = 1.0;
    CMat ket1 = CMat::Zero(2, 2);
    ket1(1, 1) = 1.0;
    CHECK(fidelity(ket0, ket1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fidelity(ket0, CMat::Identity(2, 2) / 2.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("fidelity is symmetric") {
    Prng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + (trial % 2) * 2;
        const CMat rho = random_density_matrix(n, rng);
        const CMat sigma = random_density_matrix(n, rng);
        const double f_ab = fidelity(rho, sigma);
        CHECK(f_ab >= 0.0);
        CHECK(f_ab <= 1.0 + 1e-9);
        CHECK(f_ab == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-8));
    }
}

TEST_CASE("fidelity rejects mismatched or invalid inputs") {
    const CMat rho2 = CMat::Identity(2, 2) / 2.0;
    const CMat rho3 = CMat::Identity(3, 3) / 3.0;
    CHECK_THROWS_AS(fidelity(rho2, rho3), Error);
    CHECK_THROWS_AS(fidelity(rho2, CMat::Identity(2, 2)), Error);
}
