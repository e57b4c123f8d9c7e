#pragma once

#include <stdexcept>
#include <string>

namespace gconn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KindMismatch : Error { using Error::Error; };
struct NotFinite : Error { using Error::Error; };
struct InvalidLabel : Error { using Error::Error; };

struct NotComposable : Error { using Error::Error; };
struct EndpointMismatch : Error { using Error::Error; };
struct NotSimple : Error { using Error::Error; };
struct NotIndependent : Error { using Error::Error; };

struct UnknownAtom : Error { using Error::Error; };
struct PathOutsideSubgroupoid : Error { using Error::Error; };
struct NotComparable : Error { using Error::Error; };
struct MissingTop : Error { using Error::Error; };

struct TooLargeForExact : Error { using Error::Error; };
struct NotClosed : Error { using Error::Error; };
struct AlphabetMismatch : Error { using Error::Error; };
struct NotDecomposable : Error { using Error::Error; };

/// Scenario / report I/O problems. The message names the offending field.
struct ParseError : Error { using Error::Error; };

} // namespace gconn
