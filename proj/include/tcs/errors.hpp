#pragma once

#include <stdexcept>
#include <string>

namespace tcs {

// Base class for all library errors. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define TCS_DEFINE_ERROR(Name)                              \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

TCS_DEFINE_ERROR(DisconnectedGraph);
TCS_DEFINE_ERROR(UnknownPoint);
TCS_DEFINE_ERROR(DimensionMismatch);
TCS_DEFINE_ERROR(SamePoint);
TCS_DEFINE_ERROR(OrderMismatch);
TCS_DEFINE_ERROR(TooLarge);
TCS_DEFINE_ERROR(ParameterOutOfRange);
TCS_DEFINE_ERROR(NotConnected);
TCS_DEFINE_ERROR(EmptyRadialNeighbourhood);
TCS_DEFINE_ERROR(OrderViolation);
TCS_DEFINE_ERROR(FormatError);
TCS_DEFINE_ERROR(InternalError);

#undef TCS_DEFINE_ERROR

}  // namespace tcs
