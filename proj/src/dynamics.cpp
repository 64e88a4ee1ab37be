#include "nmsim/dynamics.hpp"

#include <cmath>
#include <random>

#include "nmsim/errors.hpp"
#include "nmsim/measures.hpp"
#include "nmsim/tomography.hpp"

namespace nmsim::dynamics {

namespace {

using enum Subsystem;

constexpr std::uint64_t kNoiselessTomographyTotal = 10000;

void require_unit_interval_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw ContractViolation(std::string(name) + " must lie in (0, 1)");
}

// Distinct, reproducible generator seed per step.
std::uint64_t step_seed(std::uint64_t seed, int step, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void record_tomography(StepRecord& rec, const SimConfig& cfg) {
  namespace tomo = tomography;
  const bool noisy = cfg.tomography_counts > 0;
  const std::uint64_t total = noisy ? cfg.tomography_counts : kNoiselessTomographyTotal;

  const auto sa_set = tomo::ProjectorSet::two_qubit();
  const auto joint_sa = tomo::joint_projectors_for_sa(sa_set);
  const auto counts_sa = tomo::simulate_counts(
      rec.rho_ase, joint_sa, total, noisy ? std::optional(step_seed(cfg.seed, rec.step, 0)) : std::nullopt);
  rec.reconstructed_sa = tomo::reconstruct_linear(tomo::marginalize_counts_for_sa(counts_sa, sa_set), sa_set);

  const auto e_set = tomo::ProjectorSet::single_qubit(tomo::Alphabet::Path);
  const auto joint_e = tomo::joint_projectors_for_e(e_set);
  const auto counts_e = tomo::simulate_counts(
      rec.rho_ase, joint_e, total, noisy ? std::optional(step_seed(cfg.seed, rec.step, 1)) : std::nullopt);
  rec.reconstructed_e = tomo::reconstruct_linear(tomo::marginalize_counts_for_e(counts_e, e_set), e_set);
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::Coherent ? "coherent" : "reset"; }

NoiseModel NoiseModel::calibrated() {
  NoiseModel n;
  n.enabled = true;
  return n;
}

void NoiseModel::validate() const {
  if (!enabled) return;
  require_unit_interval_open(bs1_reflect_h, "bs1_reflect_h");
  require_unit_interval_open(bs1_reflect_v, "bs1_reflect_v");
  require_unit_interval_open(bs2_reflect_h, "bs2_reflect_h");
  require_unit_interval_open(bs2_reflect_v, "bs2_reflect_v");
  if (!(spurious_fraction >= 0.0 && spurious_fraction < 1.0))
    throw ContractViolation("spurious_fraction must lie in [0, 1)");
  if (!(phase_flip_fraction >= 0.0 && phase_flip_fraction < 1.0))
    throw ContractViolation("phase_flip_fraction must lie in [0, 1)");
  if (!(spurious_fraction + phase_flip_fraction < 1.0))
    throw ContractViolation("spurious_fraction + phase_flip_fraction must be < 1");
  if (!std::isfinite(phase_pol_offset)) throw ContractViolation("phase_pol_offset must be finite");
}

void SimConfig::validate() const {
  if (steps < 0) throw ContractViolation("steps must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("alpha must lie in [0, 1]");
  if (!phases.empty() && phases.size() < static_cast<std::size_t>(steps))
    throw ContractViolation("phases must list at least one value per step");
  for (double p : phases)
    if (!std::isfinite(p)) throw ContractViolation("phases must be finite");
  noise.validate();
}

double SimConfig::phase(int step) const {
  return phases.empty() ? 0.0 : phases.at(static_cast<std::size_t>(step));
}

StepRecord observe(const DensityMatrix& rho_ase, int step) {
  const DensityMatrix sa = partial_trace(rho_ase, {A, S});
  const DensityMatrix se = partial_trace(rho_ase, {S, E});
  const DensityMatrix e = partial_trace(rho_ase, {E});
  return StepRecord{
      .step = step,
      .rho_ase = rho_ase,
      .eof_sa = measures::eof(sa),
      .entropy_e = measures::von_neumann_entropy(e),
      .negativity_se = measures::negativity(se, E),
      .ppt_se = measures::is_ppt(se, E),
      .purity_ase = rho_ase.purity(),
      .reconstructed_sa = std::nullopt,
      .reconstructed_e = std::nullopt,
  };
}

DensityMatrix initial_sa(const SimConfig& cfg) {
  cfg.noise.validate();
  const Matrix bell = states::phi_plus().projector();
  if (!cfg.noise.enabled) return DensityMatrix(bell, {A, S});
  const double p = cfg.noise.spurious_fraction;
  const double q = cfg.noise.phase_flip_fraction;
  Matrix m = cplx{1.0 - p - q} * bell;
  m += cplx{0.5 * p} * StateVector::basis(4, 1).projector();  // |HV>
  m += cplx{0.5 * p} * StateVector::basis(4, 2).projector();  // |VH>
  m += cplx{q} * states::phi_minus().projector();
  return DensityMatrix(std::move(m), {A, S});
}

DensityMatrix initial_state(const SimConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw ContractViolation("alpha must lie in [0, 1]");
  return tensor(initial_sa(cfg), DensityMatrix::pure(states::environment(cfg.alpha), {E}));
}

gates::SplitterModel splitter_for_step(const NoiseModel& noise, int step) {
  if (!noise.enabled) return gates::BalancedSplitter{};
  const bool first = step == 0;
  return gates::PolarizationDependentSplitter{
      .reflect_h = first ? noise.bs1_reflect_h : noise.bs2_reflect_h,
      .reflect_v = first ? noise.bs1_reflect_v : noise.bs2_reflect_v,
      .v_phase_offset = noise.phase_pol_offset,
  };
}

Matrix step_propagator_se(const SimConfig& cfg, int step) {
  return gates::step_unitary_se(cfg.phase(step), splitter_for_step(cfg.noise, step));
}

DensityMatrix reset_environment(const DensityMatrix& rho_sa) {
  if (rho_sa.labels() != SubsystemList{A, S})
    throw ContractViolation("reset_environment: expects a two-qubit A-S state");
  return tensor(rho_sa, DensityMatrix::maximally_mixed({E}));
}

std::vector<StepRecord> run(const SimConfig& cfg) {
  cfg.validate();
  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.steps) + 1);

  DensityMatrix rho = initial_state(cfg);
  records.push_back(observe(rho, 0));
  for (int k = 0; k < cfg.steps; ++k) {
    const Matrix u = tensor(pauli::I(), step_propagator_se(cfg, k));
    if (cfg.regime == Regime::Reset) rho = reset_environment(partial_trace(rho, {A, S}));
    rho = apply_unitary(rho, u);
    records.push_back(observe(rho, k + 1));
  }
  if (cfg.record_tomography)
    for (auto& rec : records) record_tomography(rec, cfg);
  return records;
}

int count_revivals(const std::vector<StepRecord>& records, double tol) {
  int n = 0;
  for (std::size_t k = 1; k < records.size(); ++k)
    if (records[k].eof_sa > records[k - 1].eof_sa + tol) ++n;
  return n;
}

// ---- channels --------------------------------------------------------------

Matrix ChoiMatrix::apply(const Matrix& rho_s) const {
  if (rho_s.rows() != 2 || rho_s.cols() != 2) throw ContractViolation("ChoiMatrix::apply: 2x2 input required");
  // L(X) = sum_ij X_ij L(|i><j|), with L(|i><j|) the (i, j) block of J.
  Matrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) out(a, b) += rho_s(i, j) * matrix(2 * i + a, 2 * j + b);
  return out;
}

std::vector<Matrix> ChoiMatrix::kraus() const {
  const EigenSystem es = eig_hermitian(matrix);
  std::vector<Matrix> ops;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    if (es.values[mu] <= 1e-12) continue;
    const double s = std::sqrt(es.values[mu]);
    Matrix k(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t a = 0; a < 2; ++a) k(a, i) = s * es.vectors(2 * i + a, mu);
    ops.push_back(std::move(k));
  }
  return ops;
}

bool ChoiMatrix::is_trace_preserving(double tol) const {
  // Tr_out J = I_in
  Matrix partial(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) partial(i, j) = matrix(2 * i, 2 * j) + matrix(2 * i + 1, 2 * j + 1);
  return max_abs_diff(partial, Matrix::identity(2)) <= tol;
}

double ChoiMatrix::min_eigenvalue() const { return eig_hermitian(matrix).values.back(); }

ChoiMatrix channel_choi(const Matrix& u_se, const Matrix& rho_e) {
  if (u_se.rows() != 4 || u_se.cols() != 4) throw ContractViolation("channel_choi: 4x4 S-E unitary required");
  if (rho_e.rows() != 2 || rho_e.cols() != 2) throw ContractViolation("channel_choi: 2x2 environment state required");
  ChoiMatrix choi{Matrix(4, 4)};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix unit(2, 2);
      unit(i, j) = 1.0;
      const Matrix evolved = u_se * tensor(unit, rho_e) * u_se.adjoint();
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          choi.matrix(2 * i + a, 2 * j + b) = evolved(2 * a, 2 * b) + evolved(2 * a + 1, 2 * b + 1);
    }
  choi.matrix = 0.5 * (choi.matrix + choi.matrix.adjoint());
  return choi;
}

ChoiMatrix effective_channel(const SimConfig& cfg, int step) {
  cfg.validate();
  if (step < 0) throw ContractViolation("effective_channel: step must be non-negative");
  if (cfg.regime == Regime::Reset) {
    if (step >= cfg.steps) throw ContractViolation("effective_channel: reset step out of range");
    return channel_choi(step_propagator_se(cfg, step), 0.5 * Matrix::identity(2));
  }
  if (step > cfg.steps) throw ContractViolation("effective_channel: coherent step out of range");
  Matrix u = Matrix::identity(4);
  for (int k = 0; k < step; ++k) u = step_propagator_se(cfg, k) * u;
  return channel_choi(u, states::environment(cfg.alpha).projector());
}

}  // namespace nmsim::dynamics
