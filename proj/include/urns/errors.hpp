#pragma once

#include <stdexcept>
#include <string>

namespace urns {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or malformed objects.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Operation called outside its domain (empty cloud, empty box, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (e.g. an unclosed group).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Generator closure exceeded the size cap.
class GroupNotFiniteError : public Error {
 public:
  using Error::Error;
};

/// Derivation values admit no extension to a cocycle on the group.
class CocycleInconsistencyError : public Error {
 public:
  CocycleInconsistencyError(std::string first, std::string second, double defect)
      : Error("cocycle law violated at pair (" + first + ", " + second +
              "), defect " + std::to_string(defect)),
        first_(std::move(first)),
        second_(std::move(second)),
        defect_(defect) {}

  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }
  double defect() const noexcept { return defect_; }

 private:
  std::string first_;
  std::string second_;
  double defect_;
};

/// A norming set is not invariant under the adjoint action of the group.
class InvarianceViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace urns
