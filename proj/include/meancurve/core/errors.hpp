#pragma once

#include <stdexcept>
#include <string>

namespace meancurve {

/// Base of every error raised by the library. Callers that only need to
/// distinguish "our" failures from programming errors can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MEANCURVE_DEFINE_ERROR(Name)            \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

// rates
MEANCURVE_DEFINE_ERROR(NonConvergent);
MEANCURVE_DEFINE_ERROR(WindowTooLarge);
MEANCURVE_DEFINE_ERROR(BistabilityViolated);
MEANCURVE_DEFINE_ERROR(NoSignChange);
// particles
MEANCURVE_DEFINE_ERROR(DeadConfiguration);
MEANCURVE_DEFINE_ERROR(OccupancyOverflow);
// pde
MEANCURVE_DEFINE_ERROR(CflViolation);
MEANCURVE_DEFINE_ERROR(StepFailure);
// sharp interface
MEANCURVE_DEFINE_ERROR(QuadratureFailure);
MEANCURVE_DEFINE_ERROR(EndpointSingularity);
MEANCURVE_DEFINE_ERROR(TailUnresolved);
MEANCURVE_DEFINE_ERROR(NoCrossing);
MEANCURVE_DEFINE_ERROR(ExtinctEarly);

#undef MEANCURVE_DEFINE_ERROR

/// Configuration document does not match the expected schema. `path` is a
/// JSON-pointer-like location of the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace meancurve
