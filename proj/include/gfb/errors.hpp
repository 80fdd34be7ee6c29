#pragma once

#include <stdexcept>

namespace gfb {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// graph construction
struct EdgeOrderViolation : Error { using Error::Error; };
struct DuplicateEdge : Error { using Error::Error; };
struct NodeOutOfRange : Error { using Error::Error; };
struct NotConnected : Error { using Error::Error; };
struct NotASubgraph : Error { using Error::Error; };
struct InDegreeViolation : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };

// operators
struct ZeroMatrix : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// solver configuration
struct StepsizeOutOfRange : Error { using Error::Error; };
struct RelaxationOutOfRange : Error { using Error::Error; };
struct OrderTooSmall : Error { using Error::Error; };

// bench / io
struct GenerationFailure : Error { using Error::Error; };
struct EmptyTable : Error { using Error::Error; };
struct FileNotFound : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace gfb
