#pragma once

#include <stdexcept>
#include <string>

namespace rftap {

// Base of every error the library raises. `kind()` is the stable name that
// the CLI prints and that tests match on.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define RFTAP_ERROR_KINDS(X)                                                             \
  X(ParseError) X(RefinementError) X(MeasureError) X(AdaptednessError) X(ShapeMismatch) \
  X(HorizonError) X(ThetaUnknown) X(ParamError) X(DomainError) X(RegionError)           \
  X(NraViolated) X(NoPricingSystem) X(UnboundedBelow)

#define RFTAP_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  };

// Input / structure errors.
RFTAP_DEFINE_ERROR(ParseError)
RFTAP_DEFINE_ERROR(RefinementError)
RFTAP_DEFINE_ERROR(MeasureError)
RFTAP_DEFINE_ERROR(AdaptednessError)
RFTAP_DEFINE_ERROR(ShapeMismatch)
RFTAP_DEFINE_ERROR(HorizonError)
RFTAP_DEFINE_ERROR(ThetaUnknown)
RFTAP_DEFINE_ERROR(ParamError)
RFTAP_DEFINE_ERROR(DomainError)
RFTAP_DEFINE_ERROR(RegionError)

// Analysis outcomes that prevent an operation from producing a result.
RFTAP_DEFINE_ERROR(NraViolated)
RFTAP_DEFINE_ERROR(NoPricingSystem)
RFTAP_DEFINE_ERROR(UnboundedBelow)

#undef RFTAP_DEFINE_ERROR

// Throws an error of the same dynamic type as `e` with `prefix` + ": "
// prepended to its message.
[[noreturn]] inline void rethrow_with_prefix(const Error& e, const std::string& prefix) {
  const std::string what = prefix + ": " + e.what();
#define RFTAP_RETHROW(Name) \
  if (e.kind() == #Name) throw Name(what);
  RFTAP_ERROR_KINDS(RFTAP_RETHROW)
#undef RFTAP_RETHROW
  throw Error(e.kind(), what);
}

// True for errors that report a negative analysis finding rather than bad
// input; the CLI maps these to exit code 2.
inline bool is_analysis_negative(const Error& e) {
  return e.kind() == "NraViolated" || e.kind() == "NoPricingSystem" ||
         e.kind() == "UnboundedBelow";
}

}  // namespace rftap
