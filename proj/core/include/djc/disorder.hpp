#pragma once

#include <cstdint>
#include <random>

#include "djc/entanglement.hpp"

namespace djc {

struct ScenarioConfig;  // scenario.hpp

enum class DisorderKind { None, Gaussian, Uniform };

/// Quenched coupling disorder: per realization a fixed fluctuation delta is
/// drawn and applied as G -> G (1 + delta).
struct DisorderSpec {
  DisorderKind kind = DisorderKind::None;
  double s = 0.0;  // std dev (Gaussian) or support width (Uniform)
  int n_realizations = 1;
  std::uint64_t seed = 0;
  bool per_cavity_independent = true;

  void check() const;
  bool active() const { return kind != DisorderKind::None; }
};

/// Deterministic random stream for realization `index`.  The stream depends
/// only on (seed, index), never on scheduling, so parallel runs reproduce
/// bit-identical draws.  Double conversion and the Gaussian transform are
/// pinned here rather than taken from std distributions, whose output is
/// implementation-defined.
class RealizationStream {
 public:
  RealizationStream(std::uint64_t seed, std::uint64_t index);

  double uniform01();  // in [0, 1)
  double normal();     // standard normal (Box-Muller)

 private:
  std::mt19937_64 rng_;
};

/// One disorder draw: Gaussian with std s, or uniform on [-s/2, s/2].
double sample_delta(const DisorderSpec& spec, RealizationStream& stream);

/// Both cavities' draws for realization `index`, honoring
/// per_cavity_independent.
std::pair<double, double> sample_delta_pair(const DisorderSpec& spec,
                                            std::uint64_t index);

/// Quenched average of concurrence over independent disorder realizations:
/// concurrences are computed per realization first, then averaged sample by
/// sample.  Deterministic for a fixed seed regardless of worker count.
struct QuenchedResult {
  ConcurrenceTrace mean;  // stderr_vals populated per sample
  int n_realizations = 1;
  std::uint64_t seed = 0;
  double max_trace_dev = 0.0;   // worst diagnostics over all realizations
  double min_eigenvalue = 1.0;
  double max_tail = 0.0;
};

QuenchedResult quenched_average(const ScenarioConfig& scenario,
                                const DisorderSpec& spec, int workers = 0);

}  // namespace djc
