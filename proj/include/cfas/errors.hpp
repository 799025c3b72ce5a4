#pragma once

#include <stdexcept>
#include <string>

namespace cfas {

/// Thrown when an argument violates a documented precondition.
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a correlation kernel yields a covariance matrix with
/// eigenvalues below the negativity tolerance.
class model_not_psd : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a sample is unusable, e.g. an all-zero interference trace.
class degenerate_sample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by event-based estimators when no qualifying events were observed.
class no_events : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a request exceeds the configured memory budget.
class resource_limit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_parameter(what);
}

}  // namespace detail
}  // namespace cfas
