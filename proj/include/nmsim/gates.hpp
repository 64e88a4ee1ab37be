// gates.hpp
// Gate constructors for the stroboscopic system-environment circuit.
//
// Two-qubit gates act on the S-E pair in the library's fixed order (S more
// significant than E, index 2*s + e). E is the control throughout: "E = |r>"
// means e = 0 and "E = |l>" means e = 1.

#pragma once

#include <variant>

#include "nmsim/qstate.hpp"

namespace nmsim::gates {

// The conditional block of ch_anticz() equals sigma_z H = R(-pi/4) after the local
// sigma_z correction; the alternative bookkeeping uses sigma_x H = R(+pi/4).
inline constexpr double kLocalEquivalenceAngle = -0.78539816339744830962;

// Environment beam splitter: |r> -> (|r> + e^{i phi}|l>)/sqrt2, |l> -> (|r> - e^{i phi}|l>)/sqrt2.
Matrix env_beam_splitter(double phi);

// Unbalanced version: |r> -> t|r> + r e^{i phi}|l>, |l> -> r|r> - t e^{i phi}|l>.
// Requires t, r >= 0 and t^2 + r^2 = 1 within 1e-12.
Matrix env_beam_splitter_unbalanced(double t_amp, double r_amp, double phi);

// cos(phi) I - i sin(phi) sigma_y
Matrix rotation(double phi);

// Identity on S when E = |r>, R(phi) on S when E = |l>.
Matrix controlled_rotation(double phi);

// Block-controlled gate from two single-qubit blocks: |r><r| (x) block_r + |l><l| (x) block_l.
Matrix controlled_on_env(const Matrix& block_r, const Matrix& block_l);

// The experimentally realized coupling: sigma_z on S when E = |r>, Hadamard on S when E = |l>.
Matrix ch_anticz();

// Embeds single-qubit operators into the S-E space.
Matrix on_system(const Matrix& u);
Matrix on_environment(const Matrix& u);

struct BalancedSplitter {};

// Reflectivities of the environment beam splitter seen by each polarization of S.
// v_phase_offset is added to phi for the V component.
struct PolarizationDependentSplitter {
  double reflect_h = 0.5;
  double reflect_v = 0.5;
  double v_phase_offset = 0.0;
};

using SplitterModel = std::variant<BalancedSplitter, PolarizationDependentSplitter>;

// Beam splitter on E conditioned on the polarization of S (4x4 on S-E).
Matrix env_splitter_on_se(double phi, const SplitterModel& model);

// One step on the S-E pair: ch_anticz() * splitter.
Matrix step_unitary_se(double phi, const SplitterModel& model);

// One step on A-S-E: I_A (x) step_unitary_se.
Matrix step_unitary(double phi, const SplitterModel& model);

}  // namespace nmsim::gates
