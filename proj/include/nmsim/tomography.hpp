// tomography.hpp
// Simulated projective-measurement tomography: projector sets, count tables,
// linear-inversion reconstruction and the count-summing marginals used to get
// rho_E and rho_SA out of joint A-S-E measurements.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nmsim/qstate.hpp"

namespace nmsim::tomography {

// Letters used for the four standard single-qubit projections.
//   Polarization: H, V, D = (H+V)/sqrt2, L = (H-iV)/sqrt2
//   Path:         r, l, d = (r+l)/sqrt2, c = (r-il)/sqrt2
enum class Alphabet { Polarization, Path };

struct Projector {
  std::string label;
  StateVector state;
};

class ProjectorSet {
 public:
  // Throws ContractViolation on mixed dimensions or an empty list.
  explicit ProjectorSet(std::vector<Projector> items);

  // H, V, D, L (4 projectors, minimal complete set).
  static ProjectorSet single_qubit(Alphabet a = Alphabet::Polarization);
  // Both eigenstates of each Pauli operator (6 projectors).
  static ProjectorSet single_qubit_pauli(Alphabet a = Alphabet::Polarization);
  // The 16 products of single_qubit() on each qubit.
  static ProjectorSet two_qubit(Alphabet first = Alphabet::Polarization,
                                Alphabet second = Alphabet::Polarization);
  // Computational basis only (not informationally complete).
  static ProjectorSet computational(std::size_t n_qubits, Alphabet a = Alphabet::Polarization);
  // Every pairing of a and b; labels joined with `sep`.
  static ProjectorSet product(const ProjectorSet& a, const ProjectorSet& b, const std::string& sep = "");

  std::size_t size() const { return items_.size(); }
  std::size_t dim() const { return items_.front().state.dim(); }
  const Projector& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Projector>& items() const { return items_; }
  std::optional<std::size_t> find(const std::string& label) const;

  // Rank of the real measurement matrix over the Hermitian operator basis.
  std::size_t measurement_rank() const;
  bool informationally_complete() const { return measurement_rank() == dim() * dim(); }

 private:
  std::vector<Projector> items_;
};

struct CountTable {
  std::vector<std::string> labels;
  std::vector<double> counts;  // integers in Poisson mode, expectations otherwise
  std::uint64_t total = 0;     // nominal counts per projector for a unit-overlap outcome
  std::optional<std::uint64_t> seed;

  double at(const std::string& label) const;
};

// Expected count total * <P|rho|P> per projector; with a seed each count is an
// independent Poisson draw with that mean.
CountTable simulate_counts(const Matrix& rho, const ProjectorSet& ps, std::uint64_t total,
                           std::optional<std::uint64_t> poisson_seed = std::nullopt);
CountTable simulate_counts(const DensityMatrix& rho, const ProjectorSet& ps, std::uint64_t total,
                           std::optional<std::uint64_t> poisson_seed = std::nullopt);

// Least-squares linear inversion in the Pauli-product basis, renormalized to unit
// trace. Hermitian, but not necessarily PSD under noise. Throws ContractViolation on
// a rank-deficient set or a label mismatch.
Matrix reconstruct_linear(const CountTable& counts, const ProjectorSet& ps);

// Closest state in 2-norm: eigendecompose, zero negative eigenvalues and spread
// their weight over the rest, renormalize to unit trace.
DensityMatrix project_to_physical(const Matrix& m);
DensityMatrix project_to_physical(const Matrix& m, SubsystemList labels);

// Joint A-S-E projectors: {HH, HV, VH, VV} on A-S times each E projector,
// labelled "<AS>|<E>".
ProjectorSet joint_projectors_for_e(const ProjectorSet& e_set);
// Sums the four polarization outcomes for every E projector.
CountTable marginalize_counts_for_e(const CountTable& joint, const ProjectorSet& e_set);

// Joint A-S-E projectors: each A-S projector times {r, l}, labelled "<AS>|<E>".
ProjectorSet joint_projectors_for_sa(const ProjectorSet& sa_set);
// Sums the two path outcomes for every A-S projector.
CountTable marginalize_counts_for_sa(const CountTable& joint, const ProjectorSet& sa_set);

// Basis order phi+, phi-, psi+, psi-.
Matrix to_bell_basis(const Matrix& rho_sa);
// Sum of |off-diagonal entries| in the Bell basis.
double bell_coherence(const Matrix& rho_sa);

}  // namespace nmsim::tomography
