#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtl/delay.hpp"
#include "mtl/netlist.hpp"
#include "mtl/synth.hpp"

namespace mtl::cost {

enum class family {
  cmos,
  mtl_no_opamp,
  mtl_opamp,
  rtl_no_opamp,
  rtl_opamp,
  eemtl,
  rtlg,
};

const char* family_key(family f);
family family_from_key(const std::string& key); // raises unsupported_family

/// Measured per-cell constants for a 2-input cell of one family. Fields a
/// source table never reported stay empty and trip missing_calibration only
/// when actually needed.
struct cell_calibration {
  std::optional<double> area_um2;
  std::optional<double> power_w;
  std::optional<double> leakage_w;
  std::optional<double> energy_j;
  std::string source; // TableI | TableIII | TableIV | user
};

struct calibration_table {
  std::map<family, cell_calibration> cells;
  std::map<family, cell_calibration> alternates; // e.g. the Table I op-amp power
  double memristor_area_um2 = 1e-4;              // 10nm x 10nm device
  int opamp_transistors = 8;
  int inverter_transistors = 2;

  /// Constants from the measurement tables. The op-amp cell power defaults to
  /// the value from the table that also provides area/leakage/energy; the
  /// other reading is kept under alternates.
  static calibration_table defaults();

  /// Same table with the alternate op-amp power swapped in.
  calibration_table with_alternate_opamp_power() const;
};

struct cell_cost_breakdown {
  double area_um2 = 0;
  double power_w = 0;
  double leakage_w = 0;
  double energy_j = 0;
};

/// Per-cell cost at a given fan-in. Memristive variants keep their table area
/// and add one memristor pad per input beyond the calibrated two; CMOS area
/// scales linearly at two transistors per input. Power, leakage and energy
/// are per-cell constants.
cell_cost_breakdown cell_cost(family f, int fan_in, const calibration_table& calib);

/// Transistors needed for one gate in each published family.
int transistor_count(family f, synth::gate_kind kind, int fan_in);

/// Whole-netlist costing backend: the same graph priced as MTL cells or as a
/// static CMOS implementation of the same gates.
enum class logic_family { mtl, cmos };
logic_family logic_family_from_key(const std::string& key);
const char* logic_family_key(logic_family f);

struct cost_report {
  double area_um2 = 0;
  double power_w = 0;
  double leakage_w = 0;
  double energy_j = 0;
  long long transistor_count = 0;
  long long memristor_count = 0;
  long long cell_count = 0;
  std::size_t depth = 0;
  double delay_ns_ss = 0;
  double delay_ns_ff = 0;
  double delay_ns_sf = 0;
  double delay_ns_fs = 0;

  double delay_ns(corner c) const {
    switch (c) {
    case corner::ss: return delay_ns_ss;
    case corner::ff: return delay_ns_ff;
    case corner::sf: return delay_ns_sf;
    case corner::fs: return delay_ns_fs;
    }
    return 0;
  }
};

/// Sums cell costs over all instances (MTL: variant per instance op-amp flag;
/// restore inverters price as half a CMOS 2-input cell either way) and
/// attaches depth * d1 delays.
cost_report report(const netlist& nl, logic_family fam,
                   const calibration_table& calib = calibration_table::defaults(),
                   const delay_model& delays = {});

struct metric_ranking {
  std::string metric;
  std::vector<std::pair<std::string, double>> ascending; // (name, value)
  std::vector<double> ratio_to_first;                    // in input order
};

struct comparison {
  std::vector<metric_ranking> metrics;
};

/// Per-metric orderings and ratios against the first-listed report.
comparison compare(const std::vector<std::pair<std::string, cost_report>>& reports);

struct temperature_model {
  double reference_temp_c = 25.0;
  double slope_w_per_c = 0.0; // no published value; linear-trend knob only
};

/// Linear temperature trend, floored at zero.
double power_at_temperature(const cost_report& rep, double temp_c, const temperature_model& model);

/// "3.00u" -> 3.00e-6 exactly (the suffix becomes a decimal exponent before a
/// single strtod, so parsing matches the equivalent literal bit for bit).
/// Plain numbers pass through. Suffixes: z a f p n u m.
double parse_si(const std::string& text);

/// Engineering formatting with two decimals: 3.0e-6 -> "3.00u".
std::string format_si(double value);

calibration_table calibration_from_json(const std::string& text);
std::string calibration_to_json(const calibration_table& calib);

} // namespace mtl::cost
