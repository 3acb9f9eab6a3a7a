#pragma once

#include <stdexcept>
#include <string>

namespace skelnav {

// Base of every error the library throws. Callers that only care about
// "something went wrong in skelnav" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SKELNAV_DECLARE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

SKELNAV_DECLARE_ERROR(GenerationFailure);
SKELNAV_DECLARE_ERROR(FormatError);
SKELNAV_DECLARE_ERROR(ValueError);
SKELNAV_DECLARE_ERROR(TopologyError);
SKELNAV_DECLARE_ERROR(OutOfBounds);
SKELNAV_DECLARE_ERROR(NoFreeSpace);
SKELNAV_DECLARE_ERROR(SizeMismatch);
SKELNAV_DECLARE_ERROR(DimensionMismatch);
SKELNAV_DECLARE_ERROR(NonFiniteValue);
SKELNAV_DECLARE_ERROR(EmptySkeleton);
SKELNAV_DECLARE_ERROR(UnconnectableStart);
SKELNAV_DECLARE_ERROR(UnconnectableGoal);
SKELNAV_DECLARE_ERROR(NoPath);
SKELNAV_DECLARE_ERROR(EmptyCorpus);
SKELNAV_DECLARE_ERROR(IoError);

#undef SKELNAV_DECLARE_ERROR

/// Raised when a tensor's shape disagrees with the architecture manifest.
class ShapeMismatch : public Error {
 public:
  ShapeMismatch(std::string name, std::string expected, std::string got)
      : Error("shape mismatch for '" + name + "': expected " + expected + ", got " + got),
        name_(std::move(name)),
        expected_(std::move(expected)),
        got_(std::move(got)) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& got() const noexcept { return got_; }

 private:
  std::string name_;
  std::string expected_;
  std::string got_;
};

}  // namespace skelnav
