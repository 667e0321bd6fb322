#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace expsplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed definitions, certificates, unknown names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotAProjector : public Error {
 public:
  explicit NotAProjector(double residual)
      : Error("matrix is not idempotent (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ContainmentViolation : public Error {
 public:
  explicit ContainmentViolation(double residual)
      : Error("image leaves the target subspace (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Raised when some step A_k on the requested range is numerically singular.
class NotReversible : public Error {
 public:
  explicit NotReversible(std::size_t index)
      : Error("step matrix A_" + std::to_string(index) + " is not invertible"), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Range P_n != Range R_n at the given index.
class RangeMismatch : public Error {
 public:
  explicit RangeMismatch(std::size_t index)
      : Error("projections have different ranges at n = " + std::to_string(index)), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A_m^n restricted to Ker P_n -> Ker P_m is not an isomorphism.
class NotStronglyInvariant : public Error {
 public:
  NotStronglyInvariant(std::uint64_t m, std::uint64_t n, const std::string& verdict)
      : Error("projections are not strongly invariant: pair (" + std::to_string(m) + "," + std::to_string(n) +
              ") is " + verdict),
        m_(m), n_(n), verdict_(verdict) {}
  std::uint64_t m() const noexcept { return m_; }
  std::uint64_t n() const noexcept { return n_; }
  const std::string& verdict() const noexcept { return verdict_; }

 private:
  std::uint64_t m_, n_;
  std::string verdict_;
};

/// A strong-form check needs a column that the gain table does not carry.
class MissingColumn : public Error {
 public:
  using Error::Error;
};

}  // namespace expsplit
