#pragma once

#include <stdexcept>
#include <string>

namespace rehf {

// Base class for everything thrown by this library, so callers can catch
// rehf::error without pulling in the whole taxonomy.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// An evaluation point landed within working tolerance of a pole (or a zero
// sitting in a denominator). The message names the offending factor family.
class pole_error : public error {
 public:
  explicit pole_error(const std::string& what) : error(what) {}
};

// A series/product/grid refinement hit its term or level cap before meeting
// the accuracy target.
class convergence_error : public error {
 public:
  explicit convergence_error(const std::string& what) : error(what) {}
};

// Parameters fail a balancing constraint required by the identity in play.
class balance_error : public error {
 public:
  explicit balance_error(const std::string& what) : error(what) {}
};

// Invalid argument outside the mathematical domain (|base| >= 1, z = 0,
// out-of-range discrete index, and similar).
class domain_error : public error {
 public:
  explicit domain_error(const std::string& what) : error(what) {}
};

// Rejection sampling could not satisfy the requested constraints within the
// configured resample budget, or a transformation image left the valid domain.
class sampler_error : public error {
 public:
  explicit sampler_error(const std::string& what) : error(what) {}
};

}  // namespace rehf
