#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "djc/hilbert.hpp"

namespace djc {

/// Two-qubit state in the basis order (|ee>, |el>, |le>, |ll>).
using TwoQubitState = Eigen::Matrix4cd;

/// Partial trace over both cavities of the canonical 4-factor layout.
TwoQubitState reduce_to_atoms(const Matrix& rho, const HilbertSpace& space);
TwoQubitState reduce_to_atoms(const DensityMatrix& rho);
/// Same reduction directly from a pure state vector.
TwoQubitState reduce_to_atoms(const Vector& psi, const HilbertSpace& space);

/// Wootters concurrence C = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}
/// with l_i the descending eigenvalues of rho * rho~ and
/// rho~ = (sy x sy) rho* (sy x sy).  Computed through the Hermitian form
/// sqrt(rho) rho~ sqrt(rho); result clamped to [0, 1].
double concurrence(const TwoQubitState& rho);

/// Same quantity through the general (non-Hermitian) eigenproblem of
/// rho * rho~ with negative-real clamping; kept as an independent route.
double concurrence_product_route(const TwoQubitState& rho);

/// Time series of concurrence values with provenance metadata.
struct TraceMeta {
  std::uint64_t seed = 0;
  int n_realizations = 1;
  std::string scenario_hash;
};

struct ConcurrenceTrace {
  std::vector<double> times;        // raw time, units 1/g_b
  std::vector<double> values;       // concurrence per sample
  std::vector<double> stderr_vals;  // per-sample standard error (disordered runs)
  TraceMeta meta;

  int size() const { return static_cast<int>(times.size()); }
  bool disordered() const { return !stderr_vals.empty(); }
  /// Scaled time g_b t / 2pi, the horizontal axis of all result files.
  double scaled_time(int i) const;
};

enum class EventKind { Death, Revival };

/// Threshold crossing of the concurrence with persistence, carrying the
/// one-sided slopes on either side of the crossing as evidence of the
/// derivative discontinuity.
struct EsdEvent {
  EventKind kind;
  double time;        // raw time of the first sample on the new side
  double pre_slope;   // finite difference just before the crossing
  double post_slope;  // finite difference just after the crossing
};

/// Detects sudden deaths and revivals on a uniformly sampled trace.
/// Death at sample k: value[k-1] > threshold >= value[k] and the value stays
/// <= threshold for at least `persistence` samples; revival is symmetric.
std::vector<EsdEvent> detect_events(const ConcurrenceTrace& trace,
                                    double threshold = 1e-6,
                                    int persistence = 3);

}  // namespace djc
