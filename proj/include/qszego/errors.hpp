#ifndef QSZEGO_ERRORS_HPP
#define QSZEGO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qszego {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define QSZEGO_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                            \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

QSZEGO_DEFINE_ERROR(NonUnitRotor);
QSZEGO_DEFINE_ERROR(BadAlpha);
QSZEGO_DEFINE_ERROR(DimMismatch);
QSZEGO_DEFINE_ERROR(BadScale);
QSZEGO_DEFINE_ERROR(NotInDomain);
QSZEGO_DEFINE_ERROR(StepTooSmall);
QSZEGO_DEFINE_ERROR(OrderTooHigh);
QSZEGO_DEFINE_ERROR(ZeroArgument);
QSZEGO_DEFINE_ERROR(DiagonalSingularity);
QSZEGO_DEFINE_ERROR(NearZeroModulus);
QSZEGO_DEFINE_ERROR(BoundaryUncertain);
QSZEGO_DEFINE_ERROR(NoCandidateFound);
QSZEGO_DEFINE_ERROR(DepthTooShallow);
QSZEGO_DEFINE_ERROR(GramSingular);
QSZEGO_DEFINE_ERROR(TooManyNodes);
QSZEGO_DEFINE_ERROR(TailDominates);

#undef QSZEGO_DEFINE_ERROR

}  // namespace qszego

#endif
