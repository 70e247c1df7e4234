#pragma once

#include <vector>

#include "channelforge/matrix.hpp"
#include "channelforge/realization.hpp"

namespace channelforge {

/// One passive element. A beamsplitter on modes (a, b) acts on the pair of
/// amplitudes as
///     [ cos(theta)              -e^{i phi} sin(theta) ]
///     [ e^{-i phi} sin(theta)    cos(theta)           ]
/// and a phase shifter multiplies the amplitude of a single mode by
/// e^{i phi}.
struct OpticalElement {
    enum class Kind { Beamsplitter, PhaseShifter };
    Kind kind = Kind::PhaseShifter;
    int mode_a = 0;
    int mode_b = -1;   ///< beamsplitters only
    double theta = 0.0;
    double phi = 0.0;

    static OpticalElement beamsplitter(int a, int b, double theta, double phi);
    static OpticalElement phase_shifter(int mode, double phi);

    /// Element matrix embedded in m modes.
    CMat embedded(int m) const;
};

/// Ordered element list, applied first-to-last to the amplitude vector.
/// The first `encoding` modes carry the qudit; the rest are vacuum ancillas.
struct OpticalNetwork {
    int m = 0;
    int encoding = 0;
    std::vector<OpticalElement> elements;
};

/// Product of the embedded element matrices in application order.
CMat network_unitary(const OpticalNetwork& net);

/// Triangular mesh for an arbitrary mode unitary: at most m(m-1)/2
/// beamsplitters followed by a trailing layer of phase shifters. The element
/// product reproduces u exactly, global phase included.
OpticalNetwork reck_decompose(const CMat& u);

/// Full circuit for one admissible Kraus operator on d modes: mesh for the
/// first SVD factor, one attenuation beamsplitter per mode pairing encoding
/// mode i with ancilla d+i (cos theta_i equal to the i-th singular value),
/// then the mesh for the remaining factor. Vacuum postselection on the
/// ancillas realizes exactly A on the encoding.
OpticalNetwork compile_kraus(const CMat& a, int d);

/// compile_kraus over every branch of a plan.
std::vector<OpticalNetwork> compile_plan(const RealizationPlan& plan);

}  // namespace channelforge
