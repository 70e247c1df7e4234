#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written against first principles (power iteration,
// explicit partial traces, basis-by-basis channel comparison) so it can
// cross-check the library without reusing its code paths.

#include <cmath>
#include <vector>

#include "channelforge/channel.hpp"
#include "channelforge/matrix.hpp"
#include "channelforge/rng.hpp"

namespace cftest {

using namespace channelforge;

inline CMat random_complex(Eigen::Index rows, Eigen::Index cols, Prng& rng) {
    return random_gaussian_matrix(rows, cols, rng);
}

inline CMat random_hermitian(Eigen::Index n, Prng& rng) {
    const CMat g = random_complex(n, n, rng);
    return (g + g.adjoint()) / 2.0;
}

inline CMat random_density_matrix(Eigen::Index n, Prng& rng) {
    const CMat g = random_complex(n, n, rng);
    CMat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

inline CVec random_pure_state(Eigen::Index n, Prng& rng) {
    CVec psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        psi[i] = Complex(rng.next_gaussian(), rng.next_gaussian());
    }
    return psi / psi.norm();
}

/// Random channel with `kraus_count` operators via a Stinespring isometry:
/// columns of a Haar unitary on C^(d * kraus_count) restricted to the system.
inline KrausSet random_channel(int d, int kraus_count, Prng& rng) {
    const Eigen::Index total = static_cast<Eigen::Index>(d) * kraus_count;
    const CMat u = random_unitary(total, rng);
    KrausSet k;
    k.d = d;
    for (int a = 0; a < kraus_count; ++a) {
        CMat op(d, d);
        for (int row = 0; row < d; ++row) {
            for (int col = 0; col < d; ++col) {
                op(row, col) = u(static_cast<Eigen::Index>(a) * d + row, col);
            }
        }
        k.operators.push_back(std::move(op));
    }
    return k;
}

/// Random operator with norm at most `max_norm`.
inline CMat random_admissible_operator(int d, double max_norm, Prng& rng) {
    CMat a = random_complex(d, d, rng);
    const double norm = op_norm(a);
    const double scale = max_norm * (0.2 + 0.8 * rng.next_double()) / norm;
    return a * scale;
}

/// Power-iteration estimate of the largest singular value.
inline double power_iteration_op_norm(const CMat& m, int iterations = 2000) {
    const CMat gram = m.adjoint() * m;
    if (gram.rows() == 0) {
        return 0.0;
    }
    CVec v = CVec::Ones(gram.rows());
    v /= v.norm();
    double lambda = 0.0;
    for (int i = 0; i < iterations; ++i) {
        CVec next = gram * v;
        const double norm = next.norm();
        if (norm < 1e-300) {
            return 0.0;
        }
        next /= norm;
        lambda = norm;
        v = next;
    }
    return std::sqrt(lambda);
}

/// Channel action on the full matrix-unit basis; two channels agree iff
/// these tables agree.
inline double channel_action_distance(const KrausSet& a, const KrausSet& b) {
    double worst = 0.0;
    for (int i = 0; i < a.d; ++i) {
        for (int j = 0; j < a.d; ++j) {
            CMat basis = CMat::Zero(a.d, a.d);
            basis(i, j) = 1.0;
            worst = std::max(worst, max_abs_diff(apply_channel(a, basis), apply_channel(b, basis)));
        }
    }
    return worst;
}

inline CMat bell_state_projector() {
    CVec psi = maximally_entangled_vector(2);
    return psi * psi.adjoint();
}

}  // namespace cftest
