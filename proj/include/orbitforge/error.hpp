#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orbitforge {

enum class ErrorKind {
    DegenerateQuadruple,
    DegeneratePair,
    ParabolicComposition,
    SingularMobius,
    EmptyRootList,
    ForbiddenParameter,
    CoincidentCoordinates,
    InfiniteCoordinate,
    ResultAtInfinity,
    IndeterminateStep,
    IndeterminatePoint,
    DimensionMismatch,
    UnsupportedInput,
    NearIndeterminacy,
    BranchAmbiguity,
    DegenerateRoots,
    VerificationFailed,
    PreconditionViolated,
    NotSaddle,
    ZeroCoordinate,
    NewtonDivergence,
    CoincidenceWithExtra,
    TailNotFound,
    SingularMatrix,
};

std::string_view to_string(ErrorKind kind);

// Every numerical failure in the library is reported through this type. Steps
// executed inside a schedule carry the coordinate index and substep at which
// they failed.
class NumericError : public std::runtime_error {
  public:
    NumericError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> index() const noexcept { return index_; }
    std::optional<std::size_t> substep() const noexcept { return substep_; }

    NumericError tagged(std::size_t index, std::size_t substep) const {
        NumericError copy = *this;
        copy.index_ = index;
        copy.substep_ = substep;
        return copy;
    }

  private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
    std::optional<std::size_t> substep_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw NumericError(kind, what); }

}  // namespace orbitforge
