#pragma once

#include <stdexcept>
#include <string>

namespace dplab {

// Error taxonomy. The CLI maps these onto process exit codes:
// config/data/usage -> 2, numeric/range/resource -> 3, verification -> 1.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : error { using error::error; };
struct data_error : error { using error::error; };
struct domain_error : error { using error::error; };
struct numeric_error : error { using error::error; };
struct range_error : error { using error::error; };
struct resource_error : error { using error::error; };
struct usage_error : error { using error::error; };

// Raised when a run contradicts an identity the discretization must satisfy
// (e.g. a negative-level iterate escaping its containment region).
struct verification_error : error { using error::error; };

}  // namespace dplab
