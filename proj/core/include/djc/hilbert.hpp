#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "djc/errors.hpp"

namespace djc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tensor-factor labels of the composite atom-cavity system.
/// Canonical order is (AtomA, CavA, AtomB, CavB).
enum class Site { AtomA = 0, CavA = 1, AtomB = 2, CavB = 3 };

const char* site_name(Site s);

struct FactorInfo {
  Site label;
  int dim;
};

/// Ordered list of tensor factors with per-factor dimensions.
/// Atom factors are two-level; cavity factors carry the Fock cutoff.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<FactorInfo> factors);

  /// Canonical 4-factor layout (AtomA, CavA, AtomB, CavB).
  static HilbertSpace double_jc(int fock_a, int fock_b);
  /// Two-factor atom+cavity space, used for single-pair checks.
  static HilbertSpace single_jc(int fock);

  const std::vector<FactorInfo>& factors() const { return factors_; }
  int n_factors() const { return static_cast<int>(factors_.size()); }
  int total_dim() const { return total_dim_; }

  int factor_index(Site s) const;        // throws LayoutError if absent
  int dim(Site s) const { return factors_[factor_index(s)].dim; }
  /// Product of dimensions strictly left / right of factor i.
  int left_dim(int i) const;
  int right_dim(int i) const;

  bool is_canonical_double_jc() const;

  bool operator==(const HilbertSpace& o) const;
  bool operator!=(const HilbertSpace& o) const { return !(*this == o); }

 private:
  std::vector<FactorInfo> factors_;
  int total_dim_ = 0;
};

/// Dense complex operator tagged with its Hilbert-space layout.
struct Operator {
  HilbertSpace space;
  Matrix mat;

  int dim() const { return static_cast<int>(mat.rows()); }
};

/// Density matrix: same storage as Operator, different physical role.
struct DensityMatrix {
  HilbertSpace space;
  Matrix mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  /// Checks hermiticity, unit trace, and (optionally) positivity.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                double eig_tol = 1e-8, bool check_eigenvalues = true) const;
};

struct QubitOps {
  Matrix plus;   // |e><l|
  Matrix minus;  // |l><e|
  Matrix z;      // |e><e| - |l><l|
};

/// Fock annihilation operator: a[n-1, n] = sqrt(n).  Requires dim >= 2.
Matrix fock_destroy(int dim);

/// Two-level raising/lowering/inversion in the basis (|e>=0, |l>=1).
QubitOps qubit_ops();

/// Kronecker product of one single-factor operator per factor of `space`,
/// in canonical factor order.
Operator tensor(const HilbertSpace& space, std::span<const Matrix> factors);

/// Embed a single-factor operator at `site`, identity elsewhere.
Operator embed(const Matrix& op, Site site, const HilbertSpace& space);

Operator identity(const HilbertSpace& space);

/// max_ij |m_ij|
double max_abs(const Matrix& m);

/// Throws ValidationError unless ||H - H^dag||_max <= tol * ||H||_max.
void require_hermitian(const Matrix& h, double rel_tol = 1e-12,
                       const char* what = "operator");

}  // namespace djc
