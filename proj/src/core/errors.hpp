#pragma once

#include <stdexcept>
#include <string>

namespace chiralq {

// Exit-code classes: 2 = bad input, 3 = numerical/physical failure, 4 = I/O.
enum class ErrorClass { validation = 2, numerical = 3, io = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, std::string tag, const std::string& what)
      : std::runtime_error(tag + ": " + what), cls_(cls), tag_(std::move(tag)) {}
  ErrorClass error_class() const { return cls_; }
  const std::string& tag() const { return tag_; }

private:
  ErrorClass cls_;
  std::string tag_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorClass::validation, "ParseError", w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorClass::validation, "ValidationError", w) {}
};
struct DegenerateDrive : Error {
  explicit DegenerateDrive(const std::string& w) : Error(ErrorClass::validation, "DegenerateDrive", w) {}
};
struct IncommensurateQ : Error {
  explicit IncommensurateQ(const std::string& w) : Error(ErrorClass::validation, "IncommensurateQ", w) {}
};
struct StepTooLarge : Error {
  explicit StepTooLarge(const std::string& w) : Error(ErrorClass::validation, "StepTooLarge", w) {}
};
struct SelfPaired : Error {
  explicit SelfPaired(const std::string& w) : Error(ErrorClass::validation, "SelfPaired", w) {}
};

struct Unstable : Error {
  explicit Unstable(const std::string& w) : Error(ErrorClass::numerical, "Unstable", w) {}
};
struct NonPhysical : Error {
  explicit NonPhysical(const std::string& w) : Error(ErrorClass::numerical, "NonPhysical", w) {}
};
struct TruncationLeak : Error {
  explicit TruncationLeak(const std::string& w) : Error(ErrorClass::numerical, "TruncationLeak", w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorClass::numerical, "NumericalError", w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorClass::io, "IoError", w) {}
};

} // namespace chiralq
