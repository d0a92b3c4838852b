#pragma once

#include "djc/hilbert.hpp"

namespace djc {

/// Physical parameters of the double atom-cavity system.
/// All rates and frequencies are in units of the reference coupling g_b;
/// hbar = 1 throughout.
struct ModelParams {
  double omega0 = 1.0;  // atomic transition frequency
  double omega = 1.0;   // cavity mode frequency
  double g_a = 1.0;     // coupling of pair A
  double g_b = 1.0;     // coupling of pair B (reference scale)
  int n_photon = 1;     // photons exchanged per atomic transition

  void check() const;
  bool linear_resonant(double tol = 1e-12) const;
  bool multiphoton_resonant(double tol = 1e-12) const;  // omega0 == N*omega
};

/// External pump acting on both cavities, in the pump rotating frame.
struct DriveParams {
  double epsilon = 0.0;  // drive strength (constant)
  double chi = 0.0;      // drive phase
  int m_order = 1;       // pump nonlinearity: couples via a^M
  double delta_p = 0.0;  // detuning omega - omega_P

  void check() const;
};

enum class InitialCase { NoSuddenDeath, SuddenDeath };

/// Two-atom superposition state, cavities in vacuum.
struct InitialStateSpec {
  double alpha = 0.0;
  InitialCase which = InitialCase::NoSuddenDeath;
};

/// H = w0/2 s3_A + w a'a + G_A (s+_A a + s-_A a') + (same for pair B).
/// Commutes with the total excitation operator.
Operator build_double_jc(const ModelParams& p, const HilbertSpace& space);

/// N-photon variant: interaction G (s+ a^N + s- (a^N)').  Reduces to
/// build_double_jc at N = 1.  Requires Fock cutoffs >= N+1.
Operator build_multiphoton_double_jc(const ModelParams& p,
                                     const HilbertSpace& space);

/// Pump rotating frame, per cavity j:
///   Delta_P (n_j + N s3_j / 2) + [eps e^{-i chi} a_j^M + G_j a_j^N s+_j + H.c.]
Operator build_driven_double_jc(const ModelParams& p, const DriveParams& d,
                                const HilbertSpace& space);

/// Generalized excitation operator N (s+s-_A + s+s-_B) + a'a + b'b.
Operator excitation_operator(const ModelParams& p, const HilbertSpace& space);

/// Coupling fluctuation: G_j <- G_j (1 + delta_j); other fields unchanged.
ModelParams apply_disorder(const ModelParams& p, double delta_a, double delta_b);

/// Resonant pump detuning: 0 for M < N; -+ g_b sqrt(N!)/N for M = N,
/// where `plus_branch` selects the sign convention.
double resonant_delta_p(const ModelParams& p, int m_order, bool plus_branch);

/// State vector of (sin a |l e> + cos a |e l>) x |00>  (NoSuddenDeath) or
/// (sin a |l l> + cos a |e e>) x |00>  (SuddenDeath).
Vector initial_state_vector(const InitialStateSpec& spec,
                            const HilbertSpace& space);

/// Pure-state density matrix of the above.
DensityMatrix initial_state(const InitialStateSpec& spec,
                            const HilbertSpace& space);

}  // namespace djc
