#include "channelforge/focksim.hpp"

#include <cmath>

#include "channelforge/channel.hpp"
#include "channelforge/rng.hpp"

namespace channelforge {

namespace {

struct ShotSampler {
    const RealizationPlan* plan;
    std::vector<CMat> unitaries;          // per-branch network unitary
    std::vector<double> branch_cumulative;
    std::vector<double> input_cumulative;
    std::vector<CVec> input_vectors;
    int d = 0;
    int m = 0;
};

int sample_index(const std::vector<double>& cumulative, double u) {
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (u < cumulative[i]) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(cumulative.size()) - 1;
}

SwitchOutcome run_shot(const ShotSampler& sampler, Prng& rng) {
    SwitchOutcome outcome;
    outcome.branch_index = sample_index(sampler.branch_cumulative, rng.next_double());
    const int input = sample_index(sampler.input_cumulative, rng.next_double());

    CVec amplitudes = CVec::Zero(sampler.m);
    amplitudes.head(sampler.d) = sampler.input_vectors[static_cast<std::size_t>(input)];
    amplitudes = sampler.unitaries[static_cast<std::size_t>(outcome.branch_index)] * amplitudes;

    // Threshold detectors: sample the photon's location; any ancilla click
    // destroys the encoding, vacuum on all ancillas projects onto the
    // normalized encoding amplitudes.
    const double u = rng.next_double();
    double acc = 0.0;
    int location = sampler.m - 1;
    for (int mode = 0; mode < sampler.m; ++mode) {
        acc += std::norm(amplitudes[mode]);
        if (u < acc) {
            location = mode;
            break;
        }
    }
    if (location >= sampler.d) {
        outcome.detected_vacuum = false;
        return outcome;
    }
    outcome.detected_vacuum = true;
    const CVec logical = amplitudes.head(sampler.d);
    outcome.logical = logical / logical.norm();
    return outcome;
}

ShotSampler make_sampler(const RealizationPlan& plan, std::span<const OpticalNetwork> networks,
                         const CMat& rho_in) {
    if (networks.size() != plan.branches.size()) {
        throw Error(ErrorCode::BadArgument, "plan and compiled network count differ");
    }
    if (rho_in.rows() != plan.d || rho_in.cols() != plan.d) {
        throw Error(ErrorCode::BadArgument, "input state dimension mismatch");
    }
    if (!is_psd(rho_in, tolerances().psd) ||
        std::abs(rho_in.trace().real() - 1.0) > tolerances().trace_one) {
        throw Error(ErrorCode::BadArgument, "input must be a density matrix");
    }
    ShotSampler sampler;
    sampler.plan = &plan;
    sampler.d = plan.d;
    sampler.m = 2 * plan.d;
    double acc = 0.0;
    for (std::size_t i = 0; i < plan.branches.size(); ++i) {
        if (networks[i].m != sampler.m || networks[i].encoding != plan.d) {
            throw Error(ErrorCode::BadArgument, "network layout does not match the plan");
        }
        sampler.unitaries.push_back(network_unitary(networks[i]));
        acc += plan.branches[i].probability;
        sampler.branch_cumulative.push_back(acc);
    }
    const EigResult eig = herm_eig((rho_in + rho_in.adjoint()) / 2.0);
    acc = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        const double weight = std::max(eig.eigenvalues[k], 0.0);
        if (weight < 1e-15) {
            continue;
        }
        acc += weight;
        sampler.input_cumulative.push_back(acc);
        sampler.input_vectors.push_back(eig.eigenvectors.col(k));
    }
    return sampler;
}

}  // namespace

SinglePhotonState SinglePhotonState::basis(int m, int mode) {
    SinglePhotonState psi;
    psi.m = m;
    psi.amplitudes = CVec::Zero(m);
    psi.amplitudes[mode] = 1.0;
    return psi;
}

SinglePhotonState evolve(const OpticalNetwork& net, const SinglePhotonState& psi) {
    if (psi.m != net.m || psi.amplitudes.size() != net.m) {
        throw Error(ErrorCode::BadArgument, "state and network mode counts differ");
    }
    SinglePhotonState out;
    out.m = psi.m;
    out.amplitudes = network_unitary(net) * psi.amplitudes;
    return out;
}

PostselectResult postselect_vacuum(const SinglePhotonState& psi, int d) {
    if (psi.m < d) {
        throw Error(ErrorCode::BadArgument, "fewer modes than encoding rails");
    }
    PostselectResult result;
    result.logical = psi.amplitudes.head(d);
    result.success_prob = result.logical.squaredNorm();
    return result;
}

CMat effective_kraus(const OpticalNetwork& net, int d) {
    if (net.m < d) {
        throw Error(ErrorCode::BadArgument, "fewer modes than encoding rails");
    }
    return network_unitary(net).topLeftCorner(d, d);
}

DeterministicCheck effective_channel_choi(const RealizationPlan& plan,
                                          std::span<const OpticalNetwork> networks) {
    if (networks.size() != plan.branches.size() || plan.branches.empty()) {
        throw Error(ErrorCode::BadArgument, "plan and compiled network count differ");
    }
    const int d = plan.d;
    CMat completion = CMat::Zero(d, d);
    CMat choi = CMat::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    for (std::size_t i = 0; i < plan.branches.size(); ++i) {
        const CMat block = effective_kraus(networks[i], d);
        const double p = plan.branches[i].probability;
        completion += p * (block.adjoint() * block);
        const CVec w = vec_row_major(block);
        choi.noalias() += p * (w * w.adjoint());
    }
    const double p_succ_sim = completion.trace().real() / static_cast<double>(d);
    const CMat uniform = p_succ_sim * CMat::Identity(d, d);
    if (max_abs_diff(completion, uniform) > 1e-9) {
        throw Error(ErrorCode::PlanInconsistent,
                    "success probability depends on the input state; branch scaling is wrong");
    }
    DeterministicCheck check;
    check.p_succ_sim = p_succ_sim;
    check.choi = choi / (static_cast<double>(d) * p_succ_sim);
    return check;
}

MonteCarloReport monte_carlo(const RealizationPlan& plan,
                             std::span<const OpticalNetwork> networks,
                             const CMat& rho_in, long long shots, std::uint64_t seed) {
    if (shots < 1) {
        throw Error(ErrorCode::BadArgument, "shots must be positive");
    }
    const ShotSampler sampler = make_sampler(plan, networks, rho_in);
    const int d = plan.d;
    CMat accumulated = CMat::Zero(d, d);
    long long successes = 0;
    for (long long shot = 0; shot < shots; ++shot) {
        Prng rng(Prng::mix(seed, static_cast<std::uint64_t>(shot)));
        const SwitchOutcome outcome = run_shot(sampler, rng);
        if (outcome.detected_vacuum) {
            ++successes;
            accumulated.noalias() += outcome.logical * outcome.logical.adjoint();
        }
    }
    MonteCarloReport report;
    report.shots = shots;
    report.seed = seed;
    report.p_hat = static_cast<double>(successes) / static_cast<double>(shots);
    report.std_err =
        std::sqrt(report.p_hat * (1.0 - report.p_hat) / static_cast<double>(shots));
    report.rho_hat = successes > 0 ? CMat((accumulated / static_cast<double>(successes)).eval())
                                   : CMat::Zero(d, d);
    return report;
}

}  // namespace channelforge
