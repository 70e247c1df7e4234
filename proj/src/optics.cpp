#include "channelforge/optics.hpp"

#include <cmath>
#include <numbers>

namespace channelforge {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double phi) {
    while (phi > kPi) {
        phi -= 2.0 * kPi;
    }
    while (phi <= -kPi) {
        phi += 2.0 * kPi;
    }
    return phi;
}

}  // namespace

OpticalElement OpticalElement::beamsplitter(int a, int b, double theta, double phi) {
    OpticalElement e;
    e.kind = Kind::Beamsplitter;
    e.mode_a = a;
    e.mode_b = b;
    e.theta = theta;
    e.phi = wrap_phase(phi);
    return e;
}

OpticalElement OpticalElement::phase_shifter(int mode, double phi) {
    OpticalElement e;
    e.kind = Kind::PhaseShifter;
    e.mode_a = mode;
    e.mode_b = -1;
    e.phi = wrap_phase(phi);
    return e;
}

CMat OpticalElement::embedded(int m) const {
    if (mode_a < 0 || mode_a >= m || (kind == Kind::Beamsplitter && (mode_b < 0 || mode_b >= m))) {
        throw Error(ErrorCode::BadArgument, "optical element addresses a mode outside the network");
    }
    CMat u = CMat::Identity(m, m);
    if (kind == Kind::PhaseShifter) {
        u(mode_a, mode_a) = std::polar(1.0, phi);
        return u;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    u(mode_a, mode_a) = c;
    u(mode_a, mode_b) = -std::polar(1.0, phi) * s;
    u(mode_b, mode_a) = std::polar(1.0, -phi) * s;
    u(mode_b, mode_b) = c;
    return u;
}

CMat network_unitary(const OpticalNetwork& net) {
    CMat u = CMat::Identity(net.m, net.m);
    for (const OpticalElement& element : net.elements) {
        u = element.embedded(net.m) * u;
    }
    return u;
}

OpticalNetwork reck_decompose(const CMat& u) {
    const int m = static_cast<int>(u.rows());
    if (!is_unitary(u, 1e-9)) {
        throw Error(ErrorCode::BadArgument, "reck_decompose requires a unitary matrix");
    }
    OpticalNetwork net;
    net.m = m;
    net.encoding = m;

    // Right-multiply by beamsplitters to null the below-diagonal entries of
    // each row against its diagonal pivot, bottom row first. What remains is
    // a diagonal of pure phases, so u equals that phase layer times the
    // adjoints of the eliminations in reverse; adjoints fold back into the
    // beamsplitter form via phi -> phi + pi.
    CMat work = u;
    std::vector<OpticalElement> eliminations;
    for (int r = m - 1; r >= 1; --r) {
        for (int c = 0; c < r; ++c) {
            const Complex x = work(r, c);
            const Complex pivot = work(r, r);
            if (std::abs(x) < 1e-15) {
                continue;
            }
            const double theta = std::atan2(std::abs(x), std::abs(pivot));
            const double phi = kPi + std::arg(pivot) - std::arg(x);
            const OpticalElement bs = OpticalElement::beamsplitter(c, r, theta, phi);
            work = work * bs.embedded(m);
            eliminations.push_back(bs);
        }
    }
    for (auto it = eliminations.rbegin(); it != eliminations.rend(); ++it) {
        net.elements.push_back(
            OpticalElement::beamsplitter(it->mode_a, it->mode_b, it->theta, it->phi + kPi));
    }
    for (int j = 0; j < m; ++j) {
        const double delta = std::arg(work(j, j));
        if (std::abs(delta) > 1e-14) {
            net.elements.push_back(OpticalElement::phase_shifter(j, delta));
        }
    }
    return net;
}

OpticalNetwork compile_kraus(const CMat& a, int d) {
    if (a.rows() != d || a.cols() != d || d < 1) {
        throw Error(ErrorCode::BadArgument, "compile_kraus expects a d x d operator");
    }
    const double norm = op_norm(a);
    if (norm > 1.0 + tolerances().admissible_norm) {
        throw Error(ErrorCode::Inadmissible,
                    "operator norm exceeds 1; rescale through a realization plan first");
    }
    const SvdResult factors = svd(a);

    OpticalNetwork net;
    net.m = 2 * d;
    net.encoding = d;

    const OpticalNetwork first_mesh = reck_decompose(factors.right);
    net.elements.insert(net.elements.end(), first_mesh.elements.begin(),
                        first_mesh.elements.end());
    for (int i = 0; i < d; ++i) {
        const double s = factors.singular_values[i];
        const double theta = s >= 1.0 - 1e-10 ? 0.0 : std::acos(s);
        net.elements.push_back(OpticalElement::beamsplitter(i, d + i, theta, 0.0));
    }
    const OpticalNetwork second_mesh = reck_decompose(factors.left);
    net.elements.insert(net.elements.end(), second_mesh.elements.begin(),
                        second_mesh.elements.end());
    return net;
}

std::vector<OpticalNetwork> compile_plan(const RealizationPlan& plan) {
    std::vector<OpticalNetwork> networks;
    networks.reserve(plan.branches.size());
    for (const PlanBranch& branch : plan.branches) {
        networks.push_back(compile_kraus(branch.kraus_tilde, plan.d));
    }
    return networks;
}

}  // namespace channelforge
