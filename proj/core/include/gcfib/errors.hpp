#pragma once

#include <stdexcept>
#include <string>

namespace gcfib {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParams : Error {
  using Error::Error;
};
struct DegeneratePlane : Error {
  using Error::Error;
};
struct RealEigenvalues : Error {
  using Error::Error;
};
struct NotBlockForm : Error {
  using Error::Error;
};
struct DegenerateBlock : Error {
  using Error::Error;
};
struct SearchFailed : Error {
  using Error::Error;
};
struct NotAGraph : Error {
  using Error::Error;
};
struct FitFailed : Error {
  using Error::Error;
};
struct KernelDimension : Error {
  using Error::Error;
};
struct BianchiViolation : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};

}  // namespace gcfib
