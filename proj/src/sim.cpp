#include "mtl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mtl/rng.hpp"

namespace mtl {
namespace {

// Flattened evaluation schedule. Conductances are precomputed in input order
// so the averaged node voltage is the same floating-point expression as
// weighted_average().
struct compiled {
  const netlist* nl;
  level_schedule sched;

  struct op {
    std::uint32_t inst;     // index into nl->instances
    std::uint32_t in_off;   // into in_nets
    std::uint32_t g_off;    // into g_nominal (cells only)
    std::uint16_t fan_in;
    bool is_inverter;
    bool has_opamp;
    double v_ref;
    net_id out;
  };
  std::vector<op> ops; // in topological order
  std::vector<net_id> in_nets;
  std::vector<double> g_nominal;
  std::vector<double> g_sum_nominal; // per op

  explicit compiled(const netlist& netl) : nl(&netl), sched(validate_and_levelize(netl)) {
    ops.reserve(sched.order.size());
    for (std::uint32_t idx : sched.order) {
      const cell_instance& inst = netl.instances[idx];
      op o{};
      o.inst = idx;
      o.in_off = static_cast<std::uint32_t>(in_nets.size());
      o.fan_in = static_cast<std::uint16_t>(inst.inputs.size());
      o.is_inverter = inst.kind == instance_kind::inverter;
      o.out = inst.output;
      for (net_id in : inst.inputs)
        in_nets.push_back(in);
      if (!o.is_inverter) {
        o.has_opamp = inst.cell.has_opamp;
        o.v_ref = inst.cell.v_ref;
        o.g_off = static_cast<std::uint32_t>(g_nominal.size());
        double g_sum = 0.0;
        for (double m : inst.cell.memristances) {
          if (!(m > 0.0))
            raise(errc::non_positive_memristance, "instance '" + inst.id + "'");
          const double g = 1.0 / m;
          g_nominal.push_back(g);
          g_sum += g;
        }
        g_sum_nominal.push_back(g_sum);
      } else {
        g_sum_nominal.push_back(0.0);
      }
      ops.push_back(o);
    }
  }
};

void check_width(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    raise(errc::width_mismatch, std::string(what) + ": row has " + std::to_string(got) +
                                    " entries, netlist has " + std::to_string(want));
}

void check_spec(const variability_spec& spec) {
  if (!(spec.input_noise >= 0.0))
    raise(errc::invalid_variability, "input_noise must be nonnegative");
  if (!(spec.mem_tolerance >= 0.0 && spec.mem_tolerance < 1.0))
    raise(errc::invalid_variability, "mem_tolerance must lie in [0, 1)");
  if (!(spec.vth_shift >= 0.0))
    raise(errc::invalid_variability, "vth_shift must be nonnegative");
}

void boolean_pass(const compiled& c, const bit_row& in, const voltage_levels& levels,
                  std::vector<std::uint8_t>& vals) {
  const netlist& nl = *c.nl;
  vals[netlist::low_net] = 0;
  vals[netlist::high_net] = 1;
  for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
    vals[nl.primary_inputs[i]] = in[i] ? 1 : 0;
  for (std::size_t k = 0; k < c.ops.size(); ++k) {
    const compiled::op& o = c.ops[k];
    if (o.is_inverter) {
      vals[o.out] = vals[c.in_nets[o.in_off]] ? 0 : 1;
      continue;
    }
    double num = 0.0;
    for (std::uint16_t i = 0; i < o.fan_in; ++i) {
      const double v = vals[c.in_nets[o.in_off + i]] ? levels.v_high : levels.v_low;
      num += c.g_nominal[o.g_off + i] * v;
    }
    const double v_a = num / c.g_sum_nominal[k];
    vals[o.out] = v_a <= o.v_ref ? 1 : 0;
  }
}

// Per-trial device variation, indexed like the nominal arrays.
struct trial_devices {
  std::vector<double> g;        // effective conductances, in g_nominal layout
  std::vector<double> g_sum;    // per op
  std::vector<double> th_shift; // per op
};

trial_devices sample_trial(const compiled& c, const variability_spec& spec, std::uint64_t trial) {
  trial_devices dev;
  dev.th_shift.assign(c.ops.size(), 0.0);
  const bool vary_mem = spec.mem_tolerance != 0.0;
  const bool vary_th = spec.vth_shift != 0.0;
  if (!vary_mem && !vary_th) {
    dev.g = c.g_nominal;
    dev.g_sum = c.g_sum_nominal;
    return dev;
  }
  dev.g.resize(c.g_nominal.size());
  dev.g_sum.assign(c.ops.size(), 0.0);
  rng_stream rng = derive_stream(spec.seed, trial, 0);
  // Draw in instance-list order so the stream layout does not depend on the
  // levelization; ops are in schedule order, so draw via a per-instance map.
  std::vector<double> shift_by_inst(c.nl->instances.size(), 0.0);
  std::vector<std::vector<double>> mult_by_inst(c.nl->instances.size());
  for (std::size_t i = 0; i < c.nl->instances.size(); ++i) {
    const cell_instance& inst = c.nl->instances[i];
    if (inst.kind == instance_kind::cell) {
      auto& m = mult_by_inst[i];
      m.resize(inst.cell.memristances.size());
      for (double& x : m)
        x = 1.0 + spec.mem_tolerance * rng.next_symmetric();
    }
    shift_by_inst[i] = spec.vth_shift * rng.next_symmetric();
  }
  for (std::size_t k = 0; k < c.ops.size(); ++k) {
    const compiled::op& o = c.ops[k];
    dev.th_shift[k] = shift_by_inst[o.inst];
    if (o.is_inverter)
      continue;
    const cell_instance& inst = c.nl->instances[o.inst];
    double g_sum = 0.0;
    for (std::uint16_t i = 0; i < o.fan_in; ++i) {
      const double g = 1.0 / (inst.cell.memristances[i] * mult_by_inst[o.inst][i]);
      dev.g[o.g_off + i] = g;
      g_sum += g;
    }
    dev.g_sum[k] = g_sum;
  }
  return dev;
}

void analog_pass(const compiled& c, const trial_devices& dev, const volt_row& in_volts,
                 const variability_spec& spec, std::uint64_t trial, std::uint64_t vector_index,
                 const analog_config& config, const voltage_levels& levels,
                 std::vector<double>& vals, std::vector<cell_trace>* traces) {
  const netlist& nl = *c.nl;
  vals[netlist::low_net] = levels.v_low;
  vals[netlist::high_net] = levels.v_high;
  if (spec.input_noise != 0.0) {
    rng_stream noise = derive_stream(spec.seed, trial, 1, vector_index);
    for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
      vals[nl.primary_inputs[i]] =
          in_volts[i] + spec.input_noise * levels.swing() * noise.next_symmetric();
  } else {
    for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
      vals[nl.primary_inputs[i]] = in_volts[i];
  }
  for (std::size_t k = 0; k < c.ops.size(); ++k) {
    const compiled::op& o = c.ops[k];
    cell_trace trace;
    if (o.is_inverter) {
      const double v = vals[c.in_nets[o.in_off]];
      trace.v_a = v;
      trace.comparator_out = v;
      trace.v_out = v <= config.v_th + dev.th_shift[k] ? levels.v_high : levels.v_low;
    } else {
      double num = 0.0;
      for (std::uint16_t i = 0; i < o.fan_in; ++i)
        num += dev.g[o.g_off + i] * vals[c.in_nets[o.in_off + i]];
      trace.v_a = num / dev.g_sum[k];
      double inverter_in, inverter_th;
      if (o.has_opamp) {
        trace.comparator_out = trace.v_a > o.v_ref ? config.opamp_rail : -config.opamp_rail;
        inverter_in = trace.comparator_out;
        inverter_th = dev.th_shift[k]; // trips at 0 between the rails
      } else {
        trace.comparator_out = trace.v_a;
        inverter_in = trace.v_a;
        inverter_th = o.v_ref + dev.th_shift[k];
      }
      trace.v_out = inverter_in <= inverter_th ? levels.v_high : levels.v_low;
    }
    trace.logic_out = trace.v_out >= levels.midpoint();
    vals[o.out] = trace.v_out;
    if (traces)
      (*traces)[o.inst] = trace;
  }
}

void check_analog_config(const compiled& c, const analog_config& config,
                         const voltage_levels& levels) {
  if (!(levels.v_low < config.v_th && config.v_th < levels.v_high))
    raise(errc::rail_misconfigured, "v_th outside logic levels");
  for (const cell_instance& inst : c.nl->instances)
    if (inst.kind == instance_kind::cell && inst.cell.has_opamp) {
      if (!(-config.opamp_rail < config.v_th && config.v_th < config.opamp_rail))
        raise(errc::rail_misconfigured, "v_th outside op-amp rails");
      break;
    }
}

} // namespace

bit_rows simulate(const netlist& nl, const bit_rows& vectors, const voltage_levels& levels) {
  const compiled c(nl);
  for (const bit_row& row : vectors)
    check_width(row.size(), nl.primary_inputs.size(), "simulate");
  bit_rows out(vectors.size(), bit_row(nl.primary_outputs.size()));
  const std::int64_t n = static_cast<std::int64_t>(vectors.size());
#pragma omp parallel
  {
    std::vector<std::uint8_t> vals(nl.nets.size(), 0);
#pragma omp for schedule(static)
    for (std::int64_t v = 0; v < n; ++v) {
      boolean_pass(c, vectors[static_cast<std::size_t>(v)], levels, vals);
      bit_row& row = out[static_cast<std::size_t>(v)];
      for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i)
        row[i] = vals[nl.primary_outputs[i]];
    }
  }
  return out;
}

bit_rows simulate_reference(const netlist& nl, const bit_rows& vectors,
                            const voltage_levels& levels) {
  // Fixpoint sweep over the instance list, evaluating each instance through
  // the public single-cell op once all of its inputs settle. Quadratic.
  validate_and_levelize(nl);
  bit_rows out;
  out.reserve(vectors.size());
  for (const bit_row& row : vectors) {
    check_width(row.size(), nl.primary_inputs.size(), "simulate");
    std::vector<int> vals(nl.nets.size(), -1);
    vals[netlist::low_net] = 0;
    vals[netlist::high_net] = 1;
    for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
      vals[nl.primary_inputs[i]] = row[i] ? 1 : 0;
    std::vector<bool> done(nl.instances.size(), false);
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t k = 0; k < nl.instances.size(); ++k) {
        if (done[k])
          continue;
        const cell_instance& inst = nl.instances[k];
        bool ready = true;
        for (net_id in : inst.inputs)
          ready = ready && vals[in] >= 0;
        if (!ready)
          continue;
        if (inst.kind == instance_kind::inverter) {
          vals[inst.output] = vals[inst.inputs[0]] ? 0 : 1;
        } else {
          bit_row bits(inst.inputs.size());
          for (std::size_t i = 0; i < inst.inputs.size(); ++i)
            bits[i] = static_cast<std::uint8_t>(vals[inst.inputs[i]]);
          vals[inst.output] = evaluate(inst.cell, bits, levels) ? 1 : 0;
        }
        done[k] = true;
        progress = true;
      }
    }
    bit_row orow(nl.primary_outputs.size());
    for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i)
      orow[i] = static_cast<std::uint8_t>(vals[nl.primary_outputs[i]]);
    out.push_back(std::move(orow));
  }
  return out;
}

waveform simulate_waveform(const netlist& nl, const bit_rows& vectors,
                           const voltage_levels& levels) {
  const compiled c(nl);
  waveform wf;
  wf.nets.reserve(nl.nets.size());
  for (const net& n : nl.nets)
    wf.nets.push_back(n.name);
  wf.values.assign(nl.nets.size(), std::vector<std::uint8_t>(vectors.size()));
  std::vector<std::uint8_t> vals(nl.nets.size(), 0);
  for (std::size_t v = 0; v < vectors.size(); ++v) {
    check_width(vectors[v].size(), nl.primary_inputs.size(), "simulate");
    boolean_pass(c, vectors[v], levels, vals);
    for (std::size_t n = 0; n < nl.nets.size(); ++n)
      wf.values[n][v] = vals[n];
  }
  return wf;
}

static analog_result run_analog(const netlist& nl, const volt_rows& vectors,
                                const variability_spec& spec, const analog_config& config,
                                const voltage_levels& levels, bool collect_traces,
                                std::uint64_t trial, bool parallel) {
  const compiled c(nl);
  check_spec(spec);
  check_analog_config(c, config, levels);
  for (const volt_row& row : vectors)
    check_width(row.size(), nl.primary_inputs.size(), "simulate_analog");
  const trial_devices dev = sample_trial(c, spec, trial);

  analog_result res;
  res.volts.assign(vectors.size(), volt_row(nl.primary_outputs.size()));
  res.logic.assign(vectors.size(), bit_row(nl.primary_outputs.size()));
  if (collect_traces)
    res.traces.assign(vectors.size(), std::vector<cell_trace>(nl.instances.size()));

  const std::int64_t n = static_cast<std::int64_t>(vectors.size());
  const double mid = levels.midpoint();
#pragma omp parallel if (parallel)
  {
    std::vector<double> vals(nl.nets.size(), 0.0);
#pragma omp for schedule(static)
    for (std::int64_t v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      analog_pass(c, dev, vectors[vi], spec, trial, static_cast<std::uint64_t>(v), config, levels,
                  vals, collect_traces ? &res.traces[vi] : nullptr);
      for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i) {
        const double volt = vals[nl.primary_outputs[i]];
        res.volts[vi][i] = volt;
        res.logic[vi][i] = volt >= mid ? 1 : 0;
      }
    }
  }
  return res;
}

analog_result simulate_analog(const netlist& nl, const volt_rows& vectors,
                              const variability_spec& spec, const analog_config& config,
                              const voltage_levels& levels, bool collect_traces,
                              std::uint64_t trial) {
  return run_analog(nl, vectors, spec, config, levels, collect_traces, trial, true);
}

analog_result simulate_analog_reference(const netlist& nl, const volt_rows& vectors,
                                        const variability_spec& spec, const analog_config& config,
                                        const voltage_levels& levels, bool collect_traces,
                                        std::uint64_t trial) {
  return run_analog(nl, vectors, spec, config, levels, collect_traces, trial, false);
}

static monte_carlo_result run_monte_carlo(const netlist& nl, const variability_spec& spec,
                                          std::uint64_t trials, const bit_rows& reference_vectors,
                                          const analog_config& config, const voltage_levels& levels,
                                          bool parallel) {
  if (trials < 1)
    raise(errc::invalid_trials, "trials = " + std::to_string(trials));
  const compiled c(nl);
  check_spec(spec);
  check_analog_config(c, config, levels);
  for (const bit_row& row : reference_vectors)
    check_width(row.size(), nl.primary_inputs.size(), "monte_carlo");

  // Golden outputs from the boolean simulation, shared by all trials.
  const bit_rows golden = simulate(nl, reference_vectors, levels);
  volt_rows nominal(reference_vectors.size(), volt_row(nl.primary_inputs.size()));
  for (std::size_t v = 0; v < reference_vectors.size(); ++v)
    for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
      nominal[v][i] = reference_vectors[v][i] ? levels.v_high : levels.v_low;

  const double mid = levels.midpoint();
  const std::int64_t n_trials = static_cast<std::int64_t>(trials);
  std::uint64_t errors = 0;
#pragma omp parallel if (parallel) reduction(+ : errors)
  {
    std::vector<double> vals(nl.nets.size(), 0.0);
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < n_trials; ++t) {
      const trial_devices dev = sample_trial(c, spec, static_cast<std::uint64_t>(t));
      bool mismatch = false;
      for (std::size_t v = 0; v < nominal.size() && !mismatch; ++v) {
        analog_pass(c, dev, nominal[v], spec, static_cast<std::uint64_t>(t),
                    static_cast<std::uint64_t>(v), config, levels, vals, nullptr);
        for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i) {
          const std::uint8_t bit = vals[nl.primary_outputs[i]] >= mid ? 1 : 0;
          if (bit != golden[v][i]) {
            mismatch = true;
            break;
          }
        }
      }
      errors += mismatch ? 1 : 0;
    }
  }
  monte_carlo_result res;
  res.trials = trials;
  res.errors = errors;
  res.error_rate = static_cast<double>(errors) / static_cast<double>(trials);
  return res;
}

monte_carlo_result monte_carlo(const netlist& nl, const variability_spec& spec,
                               std::uint64_t trials, const bit_rows& reference_vectors,
                               const analog_config& config, const voltage_levels& levels) {
  return run_monte_carlo(nl, spec, trials, reference_vectors, config, levels, true);
}

monte_carlo_result monte_carlo_reference(const netlist& nl, const variability_spec& spec,
                                         std::uint64_t trials, const bit_rows& reference_vectors,
                                         const analog_config& config,
                                         const voltage_levels& levels) {
  return run_monte_carlo(nl, spec, trials, reference_vectors, config, levels, false);
}

double critical_delay(const netlist& nl, corner c, const delay_model& model) {
  const level_schedule sched = validate_and_levelize(nl);
  return static_cast<double>(sched.depth()) * model.d1(c);
}

bit_rows exhaustive_vectors(std::size_t n_inputs) {
  if (n_inputs > 20)
    raise(errc::fan_in_too_large, "exhaustive enumeration capped at 20 inputs");
  const std::size_t rows = std::size_t{1} << n_inputs;
  bit_rows out(rows, bit_row(n_inputs));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < n_inputs; ++i)
      out[r][i] = (r >> i) & 1;
  return out;
}

} // namespace mtl
