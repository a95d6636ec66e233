#ifndef BLOCHHOM_ERRORS_HPP
#define BLOCHHOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blochhom {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateBasis : Error { using Error::Error; };
struct EmptyTruncation : Error { using Error::Error; };
struct RankDeficientSymbol : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct SingularCellSystem : Error { using Error::Error; };
struct TruncationTooSmall : Error { using Error::Error; };
struct BracketingViolation : Error { using Error::Error; };
struct DegenerateGerm : Error { using Error::Error; };
struct RankMismatch : Error { using Error::Error; };
struct SupportOverflow : Error { using Error::Error; };
struct QuadratureUnconverged : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace blochhom

#endif
