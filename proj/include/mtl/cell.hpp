#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtl/errors.hpp"

namespace mtl {

/// Logic-0 / logic-1 rail voltages a circuit is built against.
struct voltage_levels {
  double v_low = 0.0;
  double v_high = 1.0;

  double swing() const { return v_high - v_low; }
  double midpoint() const { return 0.5 * (v_low + v_high); }
};

/// The two functions one averaging cell can realize, depending only on
/// where its reference sits.
enum class cell_fn : std::uint8_t { nor_fn, nand_fn };

/// Open interval of admissible reference voltages.
struct vref_window {
  double lo;
  double hi;

  bool contains(double v) const { return lo < v && v < hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// One memristive threshold logic cell: N memristors averaging the inputs
/// into a single node, an optional op-amp comparator against v_ref, and an
/// output inverter restoring full rails.
struct threshold_cell {
  cell_fn kind = cell_fn::nor_fn;
  int fan_in = 1;
  std::vector<double> memristances; // ohms, one per input
  double v_ref = 0.0;
  bool has_opamp = false;
};

/// Analog evaluation knobs shared by a whole simulation: the inverter trip
/// point and the op-amp saturation rails. The comparator resolves an input
/// exactly at the reference to its LOW rail.
struct analog_config {
  double v_th = 0.5;       // inverter switching threshold (no-op-amp path)
  double opamp_rail = 1.0; // comparator saturates at +/- this

  static analog_config defaults(const voltage_levels& levels) {
    return analog_config{levels.midpoint(), 1.0};
  }
};

/// Fixed-reference rule: one v_ref placed delta away from a rail serves every
/// fan-in up to n_max without retuning. Defaults keep a 2x margin inside the
/// narrowest (n_max-input) window at unit swing.
struct vref_policy {
  double delta = 0.05;
  int n_max = 10;

  static vref_policy defaults(const voltage_levels& levels) {
    return vref_policy{0.05 * levels.swing(), 10};
  }
};

/// Intermediate voltages of one cell evaluation.
struct cell_trace {
  double v_a = 0.0;            // averaged input node
  double comparator_out = 0.0; // op-amp output, or v_a when there is no op-amp
  double v_out = 0.0;          // restored inverter output
  bool logic_out = false;
};

constexpr double default_memristance_ohm = 1e6;

inline std::vector<double> equal_memristances(int fan_in, double ohms = default_memristance_ohm) {
  return std::vector<double>(static_cast<std::size_t>(fan_in), ohms);
}

/// Voltage of the averaging node for a star of memristors driven by
/// `voltages` and meeting at a high-impedance node: sum(G_i V_i) / sum(G_i)
/// with G_i = 1/M_i. Equal memristances reduce this to the arithmetic mean.
double weighted_average(std::span<const double> voltages, std::span<const double> memristances);

/// Open interval of references realizing `kind` at the given fan-in. The
/// boundaries themselves are excluded.
vref_window threshold_window(cell_fn kind, int fan_in, const voltage_levels& levels);

/// Reference per the fixed-delta rule: v_low + delta for NOR, v_high - delta
/// for NAND. Fails with delta_too_large when one reference cannot serve every
/// fan-in up to policy.n_max.
double select_vref(cell_fn kind, const vref_policy& policy, const voltage_levels& levels);

/// Checked constructor: equal memristances, reference from `policy`.
threshold_cell make_cell(cell_fn kind, int fan_in, const vref_policy& policy,
                         const voltage_levels& levels, bool has_opamp);

/// Checked constructor with an explicit reference (must sit strictly inside
/// the cell's window).
threshold_cell make_cell_at(cell_fn kind, int fan_in, double v_ref, const voltage_levels& levels,
                            bool has_opamp);

/// Boolean evaluation: inputs map to rail voltages, the node averages them,
/// and the output is HIGH exactly when v_a <= v_ref (comparator low at the
/// tie, inverter restoring HIGH).
bool evaluate(const threshold_cell& cell, std::span<const std::uint8_t> inputs,
              const voltage_levels& levels);

/// Full analog chain on arbitrary input voltages. With an op-amp the
/// comparator saturates to +/- opamp_rail and the inverter trips at 0; without
/// one the averaged node feeds the inverter directly and trips at config.v_th.
cell_trace analog_evaluate(const threshold_cell& cell, std::span<const double> voltages,
                           const analog_config& config, const voltage_levels& levels);

/// Smallest distance from any of the 2^N nominal input rows' averaged node to
/// the reference. Any per-input perturbation below this margin cannot flip a
/// row, because the averaging node moves at most as far as its worst input.
double noise_margin(const threshold_cell& cell, const voltage_levels& levels);

} // namespace mtl
