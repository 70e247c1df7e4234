#pragma once

#include <cstdint>

#include "channelforge/matrix.hpp"

namespace channelforge {

/// Small splittable PRNG (splitmix64). Streams are derived by mixing a base
/// seed with a stream index, so per-shot and per-restart substreams are
/// reproducible regardless of execution order or thread count.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double next_double();

    /// Standard normal via Box-Muller.
    double next_gaussian();

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

CMat random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Prng& rng);

/// Haar-distributed unitary via QR of a Gaussian matrix with the usual
/// phase fix on the R diagonal.
CMat random_unitary(Eigen::Index n, Prng& rng);

}  // namespace channelforge
