#pragma once

#include <stdexcept>
#include <string>

namespace auctionlearn {

// Base class for every error raised by the library. Callers that only care
// about "something went wrong in the auction machinery" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity outside a bid function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quadratic and discrete bids mixed where one family is required.
class FamilyMismatch : public Error {
 public:
  using Error::Error;
};

// Demand cannot be covered by the offered capacity.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// Exhaustive discrete clearing would exceed the enumeration cap.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

// Revelation probabilities violate w[k] <= r[k] <= 1 or the losing sets are
// inconsistent.
class InvalidRevelation : public Error {
 public:
  using Error::Error;
};

// Average feedback information outside [1, K].
class BadAlpha : public Error {
 public:
  using Error::Error;
};

// All MWU weights collapsed below the representable range.
class NumericalUnderflow : public Error {
 public:
  using Error::Error;
};

// Invalid market or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace auctionlearn
