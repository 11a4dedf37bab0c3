#pragma once

#include <stdexcept>

namespace faithlab {

// Bad arguments are reported with std::invalid_argument. PreconditionError
// is reserved for data that cannot support the requested statistic: sparse
// strata, degenerate variables, missing setting pairs, too few events.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace faithlab
