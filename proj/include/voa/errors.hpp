#pragma once

#include <stdexcept>
#include <string>

namespace voa {

// Raised when a computation would leave the declared weight truncation.
// Cutoff violations are hard errors, never silent truncation: the caller must
// rebuild with a larger cutoff.
class CutoffExceeded : public std::runtime_error {
  public:
    CutoffExceeded(int needed, int have)
        : std::runtime_error("cutoff exceeded: computation needs weight " +
                             std::to_string(needed) + " but truncation holds " +
                             std::to_string(have)),
          needed_(needed), have_(have) {}

    int needed() const { return needed_; }
    int have() const { return have_; }

  private:
    int needed_, have_;
};

class GeometryError : public std::runtime_error {
  public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

class SolveError : public std::runtime_error {
  public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

// The matching window is too small to pin the solution at this truncation
// (distinct from inconsistent data, which is a genuine failure).
class SolveAmbiguous : public SolveError {
  public:
    explicit SolveAmbiguous(const std::string& what) : SolveError(what) {}
};

} // namespace voa
