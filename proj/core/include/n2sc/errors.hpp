#pragma once

#include <stdexcept>
#include <string>

namespace n2sc {

// Domain errors map to CLI exit code 2; the name() goes into the error JSON.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string name, const std::string& detail)
      : std::runtime_error(detail), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define N2SC_DEFINE_ERROR(Type)                                \
  class Type : public DomainError {                            \
   public:                                                     \
    explicit Type(const std::string& detail = "")              \
        : DomainError(#Type, detail) {}                        \
  }

N2SC_DEFINE_ERROR(NonInvertible);
N2SC_DEFINE_ERROR(NonNilpotent);
N2SC_DEFINE_ERROR(OddArgument);
N2SC_DEFINE_ERROR(MismatchedContext);
N2SC_DEFINE_ERROR(IncompatibleKinds);
N2SC_DEFINE_ERROR(SubstitutionDiverges);
N2SC_DEFINE_ERROR(NonTerminating);
N2SC_DEFINE_ERROR(NotInSpan);
N2SC_DEFINE_ERROR(DegenerateLeadingCoefficient);
N2SC_DEFINE_ERROR(NotSuperconformal);
N2SC_DEFINE_ERROR(FlavorMismatch);
N2SC_DEFINE_ERROR(ExtractionFailed);
N2SC_DEFINE_ERROR(ParityMismatch);
N2SC_DEFINE_ERROR(OutOfSpan);
N2SC_DEFINE_ERROR(IndexOutOfWindow);
N2SC_DEFINE_ERROR(NonInvertibleDenominator);
N2SC_DEFINE_ERROR(ExactnessUnavailable);

#undef N2SC_DEFINE_ERROR

// Malformed input (bad JSON, bad flags); CLI exit code 1.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& detail) : std::runtime_error(detail) {}
};

}  // namespace n2sc
