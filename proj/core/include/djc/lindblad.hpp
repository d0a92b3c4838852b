#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "djc/hilbert.hpp"

namespace djc {

/// Decoherence rates of the four-channel catalog.  n_th is the mean photon
/// number of the thermal reservoir, shared by both cavities.
struct NoiseRates {
  double kappa_a = 0.0, kappa_b = 0.0;          // cavity decay
  double gamma_a = 0.0, gamma_b = 0.0;          // atomic polarization decay
  double gamma_phi_a = 0.0, gamma_phi_b = 0.0;  // atomic dephasing
  double n_th = 0.0;

  void check() const;
  bool any_nonzero() const;
  /// True when a photon-creating channel is active (kappa * n_th > 0).
  bool thermal_active() const;
};

/// One decoherence channel: C = sqrt(rate) * A with A acting on one factor.
struct CollapseTerm {
  Site site;
  Matrix local_op;  // d x d on `site`
  double rate;
  Operator op;      // A embedded in the full space
  Matrix c_full;    // sqrt(rate) * op, precomputed
};

/// Channels for the given rates:
///   per cavity j: (a_j, kappa_j (1+n_th)), (a_j', kappa_j n_th)
///   per atom j:   (s-_j, gamma_j), (s3_j, gamma_phi_j)
/// Zero-rate channels are omitted.
std::vector<CollapseTerm> collapse_catalog(const NoiseRates& rates,
                                           const HilbertSpace& space);

CollapseTerm make_collapse_term(const Matrix& local_op, Site site, double rate,
                                const HilbertSpace& space);

/// Output grid and integrator tolerances.  t_end is in scaled units
/// (multiples of 2*pi/g_b, the horizontal axis of all result files).
struct TimeGrid {
  double t_end = 1.0;
  int n_samples = 201;
  double rtol = 1e-8;
  double atol = 1e-10;

  void check() const;
  double t_end_raw() const { return t_end * 2.0 * M_PI; }
  std::vector<double> sample_times() const;
};

struct EvolveOptions {
  bool check_tail = true;    // error when the truncation band gets populated
  double tail_tol = 1e-6;    // cap on the top-2 Fock-level population
  double trace_tol = 1e-7;   // allowed |tr rho - 1| at output samples
  double eig_floor = 1e-7;   // allowed negative excursion of min eigenvalue
  int exact_eig_max_dim = 64;  // full spectrum per sample up to this dim
};

struct Diagnostics {
  double max_trace_dev = 0.0;
  double min_eigenvalue = 0.0;  // exact at checked samples (see notes below)
  double max_tail = 0.0;        // worst top-2 Fock population over the run
  double max_herm_dev = 0.0;    // asymmetry before re-symmetrization
  long n_steps = 0;
  // For dims above exact_eig_max_dim the full spectrum is computed on a
  // thinned cadence; in between, positivity is certified per sample via a
  // shifted Cholesky bound at -eig_floor.
  bool pure_path = false;  // closed-system rank-1 fast path taken
};

/// One output sample handed to the observer; exactly one of rho/psi is set
/// (psi on the closed-system pure-state path).
struct Sample {
  double t;
  int index;
  const Matrix* rho;
  const Vector* psi;
};
using SampleObserver = std::function<void(const Sample&)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  Diagnostics diagnostics;
};

/// Master-equation right-hand side, straightforward dense reference:
///   drho/dt = -i[H, rho] + sum_n (C_n rho C_n' - 1/2 {C_n'C_n, rho})
Matrix rhs(const Operator& h, const std::vector<CollapseTerm>& terms,
           const Matrix& rho);

/// Adaptive evolution; calls `obs` at every grid sample.  States handed out
/// are re-symmetrized; trace, positivity, and cavity-tail checks run per
/// sample.  Throws TruncationError (tail), StiffnessError (step underflow),
/// or ValidationError (conservation beyond tolerance).
Diagnostics evolve_observe(const Operator& h,
                           const std::vector<CollapseTerm>& terms,
                           const DensityMatrix& rho0, const TimeGrid& grid,
                           const EvolveOptions& opts, const SampleObserver& obs);

/// Same, collecting the sampled states.
Trajectory evolve(const Operator& h, const std::vector<CollapseTerm>& terms,
                  const DensityMatrix& rho0, const TimeGrid& grid,
                  const EvolveOptions& opts = {});

/// rho(t) through the dense matrix exponential of the vectorized generator.
/// Verification oracle; guarded to total dimension <= 64.
DensityMatrix expm_oracle(const Operator& h,
                          const std::vector<CollapseTerm>& terms,
                          const DensityMatrix& rho0, double t);

}  // namespace djc
