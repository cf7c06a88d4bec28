#pragma once

#include <stdexcept>
#include <string>

#include "mmsde/types.hpp"

namespace mmsde {

/// A point that must lie in the closure of the operator domain does not.
class DomainViolation : public std::domain_error {
  public:
    DomainViolation(const std::string& what, double distance)
        : std::domain_error(what), distance_(distance) {}

    double distance() const noexcept { return distance_; }

  private:
    double distance_;
};

/// An iterative solver ran out of iterations. Carries the last iterate.
class NonConvergence : public std::runtime_error {
  public:
    NonConvergence(const std::string& what, Point last_iterate, double residual)
        : std::runtime_error(what),
          last_iterate_(std::move(last_iterate)),
          residual_(residual) {}

    const Point& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

  private:
    Point last_iterate_;
    double residual_;
};

/// Invalid experiment configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

}  // namespace mmsde
