#pragma once

#include <stdexcept>
#include <string>

namespace mtl {

enum class errc {
  // cell model
  empty_inputs,
  length_mismatch,
  non_positive_memristance,
  invalid_fan_in,
  delta_too_large,
  arity_mismatch,
  rail_misconfigured,
  fan_in_too_large,
  // netlist / simulation
  combinational_cycle,
  multiple_drivers,
  dangling_input,
  width_mismatch,
  invalid_trials,
  invalid_variability,
  // generators
  unsupported_fan_in,
  invalid_width,
  not_power_of_two,
  width_too_small,
  format_mismatch,
  unsupported_sign_pattern,
  // cost
  unsupported_family,
  missing_calibration,
  too_few_reports,
  // i/o
  schema_error,
};

const char* to_string(errc code) noexcept;

/// Library-wide exception; carries a machine-checkable code plus context.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

} // namespace mtl
