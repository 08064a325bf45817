#pragma once

#include <stdexcept>

namespace quadcover {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- geometry --------------------------------------------------------------
struct NonConvexError : Error { using Error::Error; };
struct DegenerateError : Error { using Error::Error; };
struct SingularMapError : Error { using Error::Error; };
struct OutOfRangeError : Error { using Error::Error; };
struct NotAnEllipseError : Error { using Error::Error; };
struct EmptyConicError : Error { using Error::Error; };
struct NoEllipseRootError : Error { using Error::Error; };

// -- placement / channel ----------------------------------------------------
struct InvalidAxesError : Error { using Error::Error; };

// -- energy / optimizer -----------------------------------------------------
struct NonFiniteError : Error { using Error::Error; };
struct NonPositiveRateError : Error { using Error::Error; };
struct EmptyFeasibleSetError : Error { using Error::Error; };

// -- scenario / cli ----------------------------------------------------------
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct UnknownPresetError : ValidationError { using ValidationError::ValidationError; };

}  // namespace quadcover
