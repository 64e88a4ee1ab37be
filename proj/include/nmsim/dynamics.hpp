// dynamics.hpp
// Stroboscopic A-S-E experiment engine.
//
// A and S start in |phi+> (optionally with source noise), E in
// alpha|r> + sqrt(1 - alpha^2)|l>. Each step applies
//   I_A (x) ch_anticz * splitter(phi_k)
// to the joint state. In the reset regime the environment is replaced by I/2
// before every step, so only rho_SA is carried forward.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nmsim/gates.hpp"
#include "nmsim/qstate.hpp"

namespace nmsim::dynamics {

enum class Regime { Coherent, Reset };

const char* to_string(Regime r);

// Imperfections of the optical setup. Disabled means an ideal run; the stored
// numbers are then ignored.
struct NoiseModel {
  bool enabled = false;
  // Beam-splitter reflectivities per polarization of S. BS1 serves the first step,
  // BS2 every later one.
  double bs1_reflect_h = 0.42;
  double bs1_reflect_v = 0.45;
  double bs2_reflect_h = 0.45;
  double bs2_reflect_v = 0.55;
  // Weight of |HV> and |VH> (split evenly) in the source state.
  double spurious_fraction = 0.05;
  // Weight of |phi->.
  double phase_flip_fraction = 0.015;
  // Extra splitter phase seen by the V component, every step.
  double phase_pol_offset = 0.0;

  static NoiseModel off() { return {}; }
  static NoiseModel calibrated();

  // Throws ContractViolation on out-of-range knobs.
  void validate() const;
};

struct SimConfig {
  int steps = 5;
  double alpha = 0.70710678118654752440;
  // Splitter phase per step; empty means all zero. Entries past `steps` are ignored.
  std::vector<double> phases;
  Regime regime = Regime::Coherent;
  NoiseModel noise;
  std::uint64_t seed = 0;
  bool record_tomography = false;
  // Counts per projector for recorded tomography; 0 means noiseless expected counts.
  std::uint64_t tomography_counts = 0;

  void validate() const;
  double phase(int step) const;
};

struct StepRecord {
  int step = 0;
  // Joint state after the step. In the reset regime this is the evolved state of
  // rho_SA(step - 1) (x) I/2, so rho_SA(step) is its E-trace; step 0 holds the prepared state.
  DensityMatrix rho_ase;
  double eof_sa = 0.0;
  double entropy_e = 0.0;
  double negativity_se = 0.0;
  bool ppt_se = true;
  double purity_ase = 1.0;
  // Filled when SimConfig::record_tomography is set.
  std::optional<Matrix> reconstructed_sa;
  std::optional<Matrix> reconstructed_e;
};

// Observables of a joint A-S-E state.
StepRecord observe(const DensityMatrix& rho_ase, int step);

// Source state of A and S.
DensityMatrix initial_sa(const SimConfig& cfg);
DensityMatrix initial_state(const SimConfig& cfg);

gates::SplitterModel splitter_for_step(const NoiseModel& noise, int step);
// 4x4 S-E step propagator for transition step -> step + 1.
Matrix step_propagator_se(const SimConfig& cfg, int step);

// rho_SA (x) I/2
DensityMatrix reset_environment(const DensityMatrix& rho_sa);

// steps + 1 records, the first describing the prepared state.
std::vector<StepRecord> run(const SimConfig& cfg);

// Number of strict step-to-step increases of eof_sa.
int count_revivals(const std::vector<StepRecord>& records, double tol = 0.0);

// Choi matrix J = sum_ij |i><j| (x) L(|i><j|) of a qubit channel on S (input factor
// first, trace 2 when trace preserving).
struct ChoiMatrix {
  Matrix matrix;

  Matrix apply(const Matrix& rho_s) const;
  // K_mu from the eigendecomposition of J; eigenvalues below 1e-12 are dropped.
  std::vector<Matrix> kraus() const;
  bool is_trace_preserving(double tol = 1e-9) const;
  double min_eigenvalue() const;
};

// Channel X -> Tr_E[u (X (x) rho_e) u^dagger] for a 4x4 S-E unitary.
ChoiMatrix channel_choi(const Matrix& u_se, const Matrix& rho_e);

// Coherent regime: cumulative map from step 0 to `step` with E prepared in its initial
// state. Reset regime: the single map applied at transition `step` -> `step` + 1.
ChoiMatrix effective_channel(const SimConfig& cfg, int step);

}  // namespace nmsim::dynamics
