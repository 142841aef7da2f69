#pragma once

#include <cstdint>
#include <vector>

#include "mtl/cell.hpp"
#include "mtl/delay.hpp"
#include "mtl/netlist.hpp"

namespace mtl {

using bit_row = std::vector<std::uint8_t>;
using bit_rows = std::vector<bit_row>;
using volt_row = std::vector<double>;
using volt_rows = std::vector<volt_row>;

/// Variability injected into analog simulation. All randomness expands
/// deterministically from (seed, trial index): memristance multipliers and
/// threshold shifts are drawn once per trial walking the instance list in
/// order (one multiplier per memristor, then one shift per instance), and
/// input noise is drawn per (trial, vector) walking the primary inputs.
struct variability_spec {
  double input_noise = 0.0;   // fraction of swing, uniform per input per vector
  double mem_tolerance = 0.0; // fraction, uniform per device, fixed per trial
  double vth_shift = 0.0;     // volts, uniform per instance, fixed per trial
  std::uint64_t seed = 0;
};

/// Boolean simulation of all vectors; rows of primary-input bits map to rows
/// of primary-output bits. Parallel over vectors, identical results for any
/// thread count.
bit_rows simulate(const netlist& nl, const bit_rows& vectors, const voltage_levels& levels = {});

/// Serial reference for the same contract: fixpoint sweep that calls the
/// single-cell evaluate() per instance. Kept for differential tests and the
/// benchmark; do not use on hot paths.
bit_rows simulate_reference(const netlist& nl, const bit_rows& vectors,
                            const voltage_levels& levels = {});

/// Per-net boolean trace across all vectors.
struct waveform {
  std::vector<std::string> nets;
  std::vector<std::vector<std::uint8_t>> values; // [net][vector]
};
waveform simulate_waveform(const netlist& nl, const bit_rows& vectors,
                           const voltage_levels& levels = {});

struct analog_result {
  volt_rows volts;  // restored output voltage per vector, per primary output
  bit_rows logic;   // v >= midpoint of the rails
  std::vector<std::vector<cell_trace>> traces; // [vector][instance], only when requested
};

/// Analog propagation level by level: each cell averages its input voltages,
/// compares, and hands the restored rail voltage downstream. Cells with an
/// op-amp trip at 0 between the +/-rail comparator outputs, so their logic is
/// immune to threshold shifts inside the rails; cells without one trip at
/// their own reference (their inverter is the threshold element and is tuned
/// to the cell's v_ref); bare restore inverters trip at config.v_th.
/// `trial` selects the variability draw; noise is added to the given voltages
/// at primary inputs only.
analog_result simulate_analog(const netlist& nl, const volt_rows& vectors,
                              const variability_spec& spec, const analog_config& config,
                              const voltage_levels& levels = {}, bool collect_traces = false,
                              std::uint64_t trial = 0);

/// Serial reference implementation of the analog contract.
analog_result simulate_analog_reference(const netlist& nl, const volt_rows& vectors,
                                        const variability_spec& spec, const analog_config& config,
                                        const voltage_levels& levels = {},
                                        bool collect_traces = false, std::uint64_t trial = 0);

struct monte_carlo_result {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double error_rate = 0.0;
};

/// Runs `trials` independent analog trials over all reference vectors and
/// counts trials whose logic outputs differ anywhere from the boolean
/// simulation. Trials parallelize; the error count is a plain sum, so the
/// result does not depend on scheduling.
monte_carlo_result monte_carlo(const netlist& nl, const variability_spec& spec,
                               std::uint64_t trials, const bit_rows& reference_vectors,
                               const analog_config& config, const voltage_levels& levels = {});

/// Serial trial loop with the same contract.
monte_carlo_result monte_carlo_reference(const netlist& nl, const variability_spec& spec,
                                         std::uint64_t trials, const bit_rows& reference_vectors,
                                         const analog_config& config,
                                         const voltage_levels& levels = {});

/// Combinational depth times the single-cell delay at the corner.
double critical_delay(const netlist& nl, corner c, const delay_model& model = {});

/// All 2^n input rows in ascending binary order (bit i of the row index is
/// primary input i). Guarded to n <= 20.
bit_rows exhaustive_vectors(std::size_t n_inputs);

} // namespace mtl
