#pragma once

#include <stdexcept>
#include <string>

namespace orcalab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ORCALAB_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

ORCALAB_DEFINE_ERROR(IndexError);
ORCALAB_DEFINE_ERROR(LevelError);
// Raised when a user has no unrecommended item left in the current inventory.
ORCALAB_DEFINE_ERROR(ExhaustedUserError);
// recommend/observe called out of order or with a mismatched pair.
ORCALAB_DEFINE_ERROR(ProtocolError);
ORCALAB_DEFINE_ERROR(ScheduleError);
ORCALAB_DEFINE_ERROR(ParameterError);
ORCALAB_DEFINE_ERROR(FormatError);
ORCALAB_DEFINE_ERROR(IoError);
ORCALAB_DEFINE_ERROR(EmptyReportError);

#undef ORCALAB_DEFINE_ERROR

// A learner repeated a (user, item) pair. This is a bug, never a recoverable state.
class NoRepetitionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace orcalab
