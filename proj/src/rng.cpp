#include "channelforge/rng.hpp"

#include <cmath>
#include <numbers>

namespace channelforge {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Prng::next_u64() {
    return splitmix64(state_);
}

double Prng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    do {
        u = next_double();
    } while (u <= 0.0);
    const double v = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t Prng::mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
    return splitmix64(state);
}

CMat random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Prng& rng) {
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
        }
    }
    return m;
}

CMat random_unitary(Eigen::Index n, Prng& rng) {
    const CMat g = random_gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex diag = r(k, k);
        const double mag = std::abs(diag);
        const Complex phase = mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
        q.col(k) *= phase;
    }
    return q;
}

}  // namespace channelforge
