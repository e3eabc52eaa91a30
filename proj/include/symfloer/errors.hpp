#pragma once

#include <stdexcept>
#include <string>

namespace symfloer {

// Base of every error raised by the toolkit. Tool-level failures map to exit
// code 2 in the CLI; mathematical verdicts are never reported through these.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SYMFLOER_ERROR(Name)                                                 \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(#Name, what) {}           \
  }

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error("ParseError", what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// novikov
SYMFLOER_ERROR(ZeroInverse);
SYMFLOER_ERROR(NonSquareLeading);
SYMFLOER_ERROR(OddValuation);
SYMFLOER_ERROR(PrecisionLoss);

// quantum_algebra
SYMFLOER_ERROR(DimensionOverflow);
SYMFLOER_ERROR(ResidueNotSplit);
SYMFLOER_ERROR(NoConvergence);
SYMFLOER_ERROR(AlgebraAxiomViolation);

// potential
SYMFLOER_ERROR(ConfigError);
SYMFLOER_ERROR(NoLeadingCriticalPoint);
SYMFLOER_ERROR(IrrationalRoots);
SYMFLOER_ERROR(UnsupportedLeadingSystem);
SYMFLOER_ERROR(SingularLeadingHessian);
SYMFLOER_ERROR(ZeroDeterminant);

// flow_complex
SYMFLOER_ERROR(InvariantViolation);
SYMFLOER_ERROR(NonEquivariant);
SYMFLOER_ERROR(NotACycle);
SYMFLOER_ERROR(IncompatibleProduct);

// capped_orbits
SYMFLOER_ERROR(DifferentOrbit);
SYMFLOER_ERROR(PreconditionViolation);
SYMFLOER_ERROR(NonIntegralCZ);
SYMFLOER_ERROR(MissingTableEntry);

// quasimorphism
SYMFLOER_ERROR(NotInClosure);
SYMFLOER_ERROR(NotPerfect);
SYMFLOER_ERROR(GroupAxiomViolation);

#undef SYMFLOER_ERROR

}  // namespace symfloer
