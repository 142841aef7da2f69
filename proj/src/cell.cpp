#include "mtl/cell.hpp"

#include <cmath>
#include <string>

namespace mtl {

double weighted_average(std::span<const double> voltages, std::span<const double> memristances) {
  if (voltages.empty() || memristances.empty())
    raise(errc::empty_inputs, "weighted_average needs at least one input");
  if (voltages.size() != memristances.size())
    raise(errc::length_mismatch, "got " + std::to_string(voltages.size()) + " voltages vs " +
                                     std::to_string(memristances.size()) + " memristances");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < voltages.size(); ++i) {
    if (!(memristances[i] > 0.0))
      raise(errc::non_positive_memristance, "M[" + std::to_string(i) + "] = " + std::to_string(memristances[i]));
    const double g = 1.0 / memristances[i];
    num += g * voltages[i];
    den += g;
  }
  return num / den;
}

vref_window threshold_window(cell_fn kind, int fan_in, const voltage_levels& levels) {
  if (fan_in < 1)
    raise(errc::invalid_fan_in, "fan_in = " + std::to_string(fan_in));
  const double n = static_cast<double>(fan_in);
  if (kind == cell_fn::nor_fn)
    return {levels.v_low, ((n - 1.0) * levels.v_low + levels.v_high) / n};
  return {((n - 1.0) * levels.v_high + levels.v_low) / n, levels.v_high};
}

double select_vref(cell_fn kind, const vref_policy& policy, const voltage_levels& levels) {
  if (policy.n_max < 1)
    raise(errc::invalid_fan_in, "n_max = " + std::to_string(policy.n_max));
  // The N-input window has width swing/N, so one fixed reference works for
  // every fan-in up to n_max only when delta < swing/n_max.
  if (!(policy.delta > 0.0) || policy.delta >= levels.swing() / policy.n_max)
    raise(errc::delta_too_large, "delta = " + std::to_string(policy.delta) +
                                     " cannot serve fan-in up to " + std::to_string(policy.n_max));
  return kind == cell_fn::nor_fn ? levels.v_low + policy.delta : levels.v_high - policy.delta;
}

threshold_cell make_cell(cell_fn kind, int fan_in, const vref_policy& policy,
                         const voltage_levels& levels, bool has_opamp) {
  if (fan_in < 1)
    raise(errc::invalid_fan_in, "fan_in = " + std::to_string(fan_in));
  if (fan_in > policy.n_max)
    raise(errc::unsupported_fan_in, "fan_in " + std::to_string(fan_in) + " exceeds policy n_max " +
                                        std::to_string(policy.n_max));
  return threshold_cell{kind, fan_in, equal_memristances(fan_in),
                        select_vref(kind, policy, levels), has_opamp};
}

threshold_cell make_cell_at(cell_fn kind, int fan_in, double v_ref, const voltage_levels& levels,
                            bool has_opamp) {
  const vref_window window = threshold_window(kind, fan_in, levels);
  if (!window.contains(v_ref))
    raise(errc::delta_too_large, "v_ref " + std::to_string(v_ref) + " outside window (" +
                                     std::to_string(window.lo) + ", " + std::to_string(window.hi) + ")");
  return threshold_cell{kind, fan_in, equal_memristances(fan_in), v_ref, has_opamp};
}

bool evaluate(const threshold_cell& cell, std::span<const std::uint8_t> inputs,
              const voltage_levels& levels) {
  if (static_cast<int>(inputs.size()) != cell.fan_in)
    raise(errc::arity_mismatch, "cell expects " + std::to_string(cell.fan_in) + " inputs, got " +
                                    std::to_string(inputs.size()));
  std::vector<double> volts(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    volts[i] = inputs[i] ? levels.v_high : levels.v_low;
  const double v_a = weighted_average(volts, cell.memristances);
  return v_a <= cell.v_ref;
}

cell_trace analog_evaluate(const threshold_cell& cell, std::span<const double> voltages,
                           const analog_config& config, const voltage_levels& levels) {
  if (static_cast<int>(voltages.size()) != cell.fan_in)
    raise(errc::arity_mismatch, "cell expects " + std::to_string(cell.fan_in) + " inputs, got " +
                                    std::to_string(voltages.size()));
  if (cell.has_opamp) {
    if (!(-config.opamp_rail < config.v_th && config.v_th < config.opamp_rail))
      raise(errc::rail_misconfigured, "v_th " + std::to_string(config.v_th) +
                                          " outside +/-" + std::to_string(config.opamp_rail));
  } else if (!(levels.v_low < config.v_th && config.v_th < levels.v_high)) {
    raise(errc::rail_misconfigured,
          "v_th " + std::to_string(config.v_th) + " outside logic levels");
  }

  cell_trace trace;
  trace.v_a = weighted_average(voltages, cell.memristances);
  double inverter_in;
  double inverter_th;
  if (cell.has_opamp) {
    // Ideal saturating comparator; ties resolve to the low rail.
    trace.comparator_out = trace.v_a > cell.v_ref ? config.opamp_rail : -config.opamp_rail;
    inverter_in = trace.comparator_out;
    inverter_th = 0.0; // rails are symmetric about zero
  } else {
    trace.comparator_out = trace.v_a;
    inverter_in = trace.v_a;
    inverter_th = config.v_th;
  }
  trace.v_out = inverter_in <= inverter_th ? levels.v_high : levels.v_low;
  trace.logic_out = trace.v_out >= levels.midpoint();
  return trace;
}

double noise_margin(const threshold_cell& cell, const voltage_levels& levels) {
  if (cell.fan_in > 20)
    raise(errc::fan_in_too_large, "margin enumeration capped at fan-in 20, got " +
                                      std::to_string(cell.fan_in));
  const std::size_t rows = std::size_t{1} << cell.fan_in;
  std::vector<double> volts(static_cast<std::size_t>(cell.fan_in));
  double margin = levels.swing();
  for (std::size_t row = 0; row < rows; ++row) {
    for (int i = 0; i < cell.fan_in; ++i)
      volts[static_cast<std::size_t>(i)] = (row >> i) & 1 ? levels.v_high : levels.v_low;
    const double v_a = weighted_average(volts, cell.memristances);
    margin = std::min(margin, std::abs(v_a - cell.v_ref));
  }
  return margin;
}

const char* to_string(errc code) noexcept {
  switch (code) {
  case errc::empty_inputs: return "EmptyInputs";
  case errc::length_mismatch: return "LengthMismatch";
  case errc::non_positive_memristance: return "NonPositiveMemristance";
  case errc::invalid_fan_in: return "InvalidFanIn";
  case errc::delta_too_large: return "DeltaTooLarge";
  case errc::arity_mismatch: return "ArityMismatch";
  case errc::rail_misconfigured: return "RailMisconfigured";
  case errc::fan_in_too_large: return "FanInTooLarge";
  case errc::combinational_cycle: return "CombinationalCycle";
  case errc::multiple_drivers: return "MultipleDrivers";
  case errc::dangling_input: return "DanglingInput";
  case errc::width_mismatch: return "WidthMismatch";
  case errc::invalid_trials: return "InvalidTrials";
  case errc::invalid_variability: return "InvalidVariability";
  case errc::unsupported_fan_in: return "UnsupportedFanIn";
  case errc::invalid_width: return "InvalidWidth";
  case errc::not_power_of_two: return "NotPowerOfTwo";
  case errc::width_too_small: return "WidthTooSmall";
  case errc::format_mismatch: return "FormatMismatch";
  case errc::unsupported_sign_pattern: return "UnsupportedSignPattern";
  case errc::unsupported_family: return "UnsupportedFamily";
  case errc::missing_calibration: return "MissingCalibration";
  case errc::too_few_reports: return "TooFewReports";
  case errc::schema_error: return "SchemaError";
  }
  return "UnknownError";
}

} // namespace mtl
