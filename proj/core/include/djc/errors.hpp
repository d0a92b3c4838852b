#pragma once

#include <stdexcept>
#include <string>

namespace djc {

/// Error categories, surfaced as CLI exit codes.
enum class ErrorCategory {
  Generic = 1,
  Config = 2,
  Truncation = 3,
  Stiffness = 4,
  Validation = 5,
  Dimension = 6,
  Layout = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

/// Operator or state dimension outside its allowed range.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg)
      : Error(ErrorCategory::Dimension, msg) {}
};

/// Tensor-factor layout mismatch (wrong factor count, order, or size).
class LayoutError : public Error {
 public:
  explicit LayoutError(const std::string& msg)
      : Error(ErrorCategory::Layout, msg) {}
};

/// A state or operator failed a physical-validity check.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

/// Fock-space cutoff too small: population leaked into the truncation band.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& msg, double max_tail, int suggested_cutoff)
      : Error(ErrorCategory::Truncation, msg),
        max_tail_(max_tail),
        suggested_cutoff_(suggested_cutoff) {}
  double max_tail() const { return max_tail_; }
  int suggested_cutoff() const { return suggested_cutoff_; }

 private:
  double max_tail_;
  int suggested_cutoff_;
};

/// Adaptive integrator could not make progress at the requested tolerances.
class StiffnessError : public Error {
 public:
  explicit StiffnessError(const std::string& msg)
      : Error(ErrorCategory::Stiffness, msg) {}
};

/// Configuration parse or schema failure; `where` is the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, const std::string& where = "")
      : Error(ErrorCategory::Config,
              where.empty() ? msg : msg + " (at " + where + ")"),
        where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

}  // namespace djc
