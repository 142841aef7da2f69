// mtl: generate, simulate and cost memristive threshold logic circuits.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mtl/cost.hpp"
#include "mtl/fftgen.hpp"
#include "mtl/netlist_json.hpp"
#include "mtl/rng.hpp"
#include "mtl/sim.hpp"
#include "mtl/synth.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_invalid = 2;
constexpr int exit_mismatch = 3;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    mtl::raise(mtl::errc::schema_error, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    mtl::raise(mtl::errc::schema_error, "cannot write '" + path + "'");
  out << content;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Display-only rounding for tables; CSV/JSON keep full precision.
std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct csv_table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

csv_table parse_csv(const std::string& text) {
  csv_table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ','))
      fields.push_back(field);
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

// Column order of the CSV mapped onto primary inputs (every input must be
// covered exactly once).
std::vector<std::size_t> map_columns(const csv_table& csv, const mtl::netlist& nl) {
  std::vector<std::size_t> pi_to_col(nl.primary_inputs.size(), SIZE_MAX);
  for (std::size_t col = 0; col < csv.header.size(); ++col) {
    bool known = false;
    for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
      if (nl.net_name(nl.primary_inputs[i]) == csv.header[col]) {
        pi_to_col[i] = col;
        known = true;
      }
    if (!known)
      mtl::raise(mtl::errc::schema_error, "CSV column '" + csv.header[col] + "' is not an input");
  }
  for (std::size_t i = 0; i < pi_to_col.size(); ++i)
    if (pi_to_col[i] == SIZE_MAX)
      mtl::raise(mtl::errc::schema_error,
                 "CSV misses input '" + nl.net_name(nl.primary_inputs[i]) + "'");
  return pi_to_col;
}

mtl::bit_rows csv_to_bits(const csv_table& csv, const mtl::netlist& nl) {
  const auto cols = map_columns(csv, nl);
  mtl::bit_rows rows;
  rows.reserve(csv.rows.size());
  for (const auto& r : csv.rows) {
    mtl::bit_row row(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string& f = r.at(cols[i]);
      if (f != "0" && f != "1")
        mtl::raise(mtl::errc::schema_error, "bit field '" + f + "'");
      row[i] = f == "1";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

mtl::volt_rows csv_to_volts(const csv_table& csv, const mtl::netlist& nl) {
  const auto cols = map_columns(csv, nl);
  mtl::volt_rows rows;
  rows.reserve(csv.rows.size());
  for (const auto& r : csv.rows) {
    mtl::volt_row row(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
      row[i] = std::stod(r.at(cols[i]));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// target grammar: gate:<kind>:<n> | cla:<w> | vedic:<w> | dft4:<w> |
//                 fft8:<w>[:fracbits]

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep))
    parts.push_back(part);
  return parts;
}

int parse_int(const std::string& s) {
  int value = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw usage_error("'" + s + "' is not an integer");
  return value;
}

struct synth_options {
  double delta = 0.05;
  int n_max = 10;
  bool midwindow = false;
  bool opamp = false;
};

mtl::netlist build_target(const std::string& target, const synth_options& opt) {
  const mtl::voltage_levels levels{};
  const mtl::vref_policy policy{opt.delta, opt.n_max};
  const auto parts = split(target, ':');
  if (parts.empty())
    throw usage_error("empty target");
  const std::string& head = parts[0];

  if (head == "gate") {
    if (parts.size() != 3)
      throw usage_error("expected gate:<kind>:<n>");
    const int n = parse_int(parts[2]);
    using mtl::synth::gate_kind;
    gate_kind kind;
    if (parts[1] == "not") kind = gate_kind::not_g;
    else if (parts[1] == "nor") kind = gate_kind::nor_g;
    else if (parts[1] == "nand") kind = gate_kind::nand_g;
    else if (parts[1] == "or") kind = gate_kind::or_g;
    else if (parts[1] == "and") kind = gate_kind::and_g;
    else if (parts[1] == "xor") kind = gate_kind::xor_g;
    else throw usage_error("unknown gate kind '" + parts[1] + "'");
    if (opt.midwindow || opt.opamp) {
      if (kind != gate_kind::nor_g && kind != gate_kind::nand_g)
        throw usage_error("--midwindow/--opamp only apply to gate:nor / gate:nand");
      const mtl::cell_fn fn =
          kind == gate_kind::nor_g ? mtl::cell_fn::nor_fn : mtl::cell_fn::nand_fn;
      const double v_ref = opt.midwindow ? mtl::threshold_window(fn, n, levels).mid()
                                         : mtl::select_vref(fn, policy, levels);
      return mtl::synth::single_cell(mtl::make_cell_at(fn, n, v_ref, levels, opt.opamp),
                                     parts[1] + parts[2]);
    }
    return mtl::synth::gate(kind, n, policy, levels);
  }
  if (opt.midwindow || opt.opamp)
    throw usage_error("--midwindow/--opamp only apply to gate targets");
  if (head == "cla") {
    if (parts.size() != 2)
      throw usage_error("expected cla:<width>");
    return mtl::synth::cla(parse_int(parts[1]), policy, levels);
  }
  if (head == "vedic") {
    if (parts.size() != 2)
      throw usage_error("expected vedic:<width>");
    return mtl::synth::vedic(parse_int(parts[1]), policy, levels);
  }
  if (head == "dft4") {
    if (parts.size() != 2)
      throw usage_error("expected dft4:<width>");
    return mtl::fft::dft4(parse_int(parts[1]), policy, levels);
  }
  if (head == "fft8") {
    if (parts.size() != 2 && parts.size() != 3)
      throw usage_error("expected fft8:<width>[:fracbits]");
    const int w = parse_int(parts[1]);
    mtl::fft::fixed_point_format fmt = mtl::fft::fixed_point_format::defaults(w);
    if (parts.size() == 3)
      fmt.frac_bits = parse_int(parts[2]);
    return mtl::fft::fft8(w, fmt, policy, levels);
  }
  throw usage_error("unknown target '" + target + "'");
}

// ---------------------------------------------------------------------------
// verify oracles

struct port_group {
  std::vector<std::size_t> bits; // positions in primary_inputs / primary_outputs
};

std::optional<port_group> find_group(const mtl::netlist& nl, const std::string& stem, int width,
                                     bool outputs) {
  const auto& nets = outputs ? nl.primary_outputs : nl.primary_inputs;
  port_group g;
  for (int b = 0; b < width; ++b) {
    const std::string want = stem + std::to_string(b);
    bool found = false;
    for (std::size_t i = 0; i < nets.size(); ++i)
      if (nl.net_name(nets[i]) == want) {
        g.bits.push_back(i);
        found = true;
        break;
      }
    if (!found)
      return std::nullopt;
  }
  return g;
}

port_group need_group(const mtl::netlist& nl, const std::string& stem, int width, bool outputs) {
  auto g = find_group(nl, stem, width, outputs);
  if (!g)
    mtl::raise(mtl::errc::schema_error,
               std::string(outputs ? "output" : "input") + " port group '" + stem + "0..'" +
                   " of width " + std::to_string(width) + " not found");
  return *g;
}

void set_word(mtl::bit_row& row, const port_group& g, std::uint64_t value) {
  for (std::size_t b = 0; b < g.bits.size(); ++b)
    row[g.bits[b]] = (value >> b) & 1;
}

std::uint64_t get_word(const mtl::bit_row& row, const port_group& g) {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < g.bits.size(); ++b)
    v |= static_cast<std::uint64_t>(row[g.bits[b]] & 1) << b;
  return v;
}

struct verify_stats {
  std::uint64_t cases = 0;
  bool failed = false;
  std::string counterexample;
};

// Runs vectors in batches and compares against the expected-word callback.
template <typename MakeRow, typename Check>
verify_stats run_cases(const mtl::netlist& nl, std::uint64_t total, MakeRow make_row,
                       Check check) {
  verify_stats st;
  constexpr std::uint64_t batch = 1 << 14;
  for (std::uint64_t start = 0; start < total && !st.failed; start += batch) {
    const std::uint64_t n = std::min(batch, total - start);
    mtl::bit_rows rows;
    rows.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k)
      rows.push_back(make_row(start + k));
    const mtl::bit_rows out = mtl::simulate(nl, rows);
    for (std::uint64_t k = 0; k < n && !st.failed; ++k) {
      ++st.cases;
      std::string why;
      if (!check(start + k, out[k], why)) {
        st.failed = true;
        st.counterexample = why;
      }
    }
  }
  return st;
}

} // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"memristive threshold logic toolkit"};
  app.require_subcommand(1);

  // synth ---------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "generate a netlist");
  std::string synth_target, synth_out;
  synth_options sopt;
  synth_cmd->add_option("target", synth_target,
                        "gate:<kind>:<n> | cla:<w> | vedic:<w> | dft4:<w> | fft8:<w>[:f]")
      ->required();
  synth_cmd->add_option("-o,--out", synth_out, "output file (default stdout)");
  synth_cmd->add_option("--delta", sopt.delta, "reference offset from the rail");
  synth_cmd->add_option("--nmax", sopt.n_max, "largest fan-in the fixed reference serves");
  synth_cmd->add_flag("--midwindow", sopt.midwindow, "center the reference in its window");
  synth_cmd->add_flag("--opamp", sopt.opamp, "force the op-amp comparator stage");

  // sim -----------------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("sim", "boolean simulation");
  std::string sim_netlist, sim_vectors, sim_out;
  bool sim_exhaustive = false;
  sim_cmd->add_option("netlist", sim_netlist)->required();
  sim_cmd->add_option("--vectors", sim_vectors, "CSV of input bits");
  sim_cmd->add_flag("--exhaustive", sim_exhaustive, "all 2^n input rows");
  sim_cmd->add_option("-o,--out", sim_out);

  // analog ----------------------------------------------------------------
  auto* analog_cmd = app.add_subcommand("analog", "analog simulation with variability");
  std::string an_netlist, an_vectors, an_out;
  double an_noise = 0, an_tol = 0, an_shift = 0, an_vth = 0.5, an_rail = 1.0;
  std::uint64_t an_trial = 0;
  std::optional<std::uint64_t> an_seed;
  analog_cmd->add_option("netlist", an_netlist)->required();
  analog_cmd->add_option("--vectors", an_vectors, "CSV of input voltages")->required();
  analog_cmd->add_option("--noise", an_noise, "input noise, fraction of swing");
  analog_cmd->add_option("--mem-tol", an_tol, "memristance tolerance, fraction");
  analog_cmd->add_option("--vth-shift", an_shift, "threshold shift bound, volts");
  analog_cmd->add_option("--seed", an_seed, "random seed");
  analog_cmd->add_option("--trial", an_trial, "trial index for the variability draw");
  analog_cmd->add_option("--vth", an_vth, "restore inverter threshold");
  analog_cmd->add_option("--rail", an_rail, "op-amp saturation magnitude");
  analog_cmd->add_option("-o,--out", an_out);

  // mc ------------------------------------------------------------------
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo error-rate estimate");
  std::string mc_netlist, mc_vectors, mc_out;
  double mc_noise = 0, mc_tol = 0, mc_shift = 0;
  std::uint64_t mc_trials = 0, mc_seed = 0;
  mc_cmd->add_option("netlist", mc_netlist)->required();
  mc_cmd->add_option("--noise", mc_noise, "input noise, fraction of swing");
  mc_cmd->add_option("--mem-tol", mc_tol, "memristance tolerance, fraction");
  mc_cmd->add_option("--vth-shift", mc_shift, "threshold shift bound, volts");
  mc_cmd->add_option("--trials", mc_trials)->required();
  mc_cmd->add_option("--seed", mc_seed)->required();
  mc_cmd->add_option("--vectors", mc_vectors, "CSV of reference bit rows (default exhaustive)");
  mc_cmd->add_option("-o,--out", mc_out);

  // verify ----------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "check a netlist against an oracle");
  std::string vf_netlist, vf_oracle, vf_mode = "exhaustive";
  std::optional<std::uint64_t> vf_seed;
  verify_cmd->add_option("netlist", vf_netlist)->required();
  verify_cmd->add_option("--oracle", vf_oracle, "add:<w> | mul:<w> | dft4:<w> | fft8:<w>[:f]")
      ->required();
  verify_cmd->add_option("--mode", vf_mode, "exhaustive | random:<count>");
  verify_cmd->add_option("--seed", vf_seed, "seed for random mode");

  // sweep -----------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep a cell's reference voltage");
  std::string sw_gate, sw_out;
  double sw_from = 0, sw_to = 0, sw_step = 0;
  sweep_cmd->add_option("--gate", sw_gate, "<nor|nand>:<n>")->required();
  sweep_cmd->add_option("--from", sw_from)->required();
  sweep_cmd->add_option("--to", sw_to)->required();
  sweep_cmd->add_option("--step", sw_step)->required();
  sweep_cmd->add_option("-o,--out", sw_out);

  // cost ------------------------------------------------------------------
  auto* cost_cmd = app.add_subcommand("cost", "area/power/delay report");
  std::string co_netlist, co_calib, co_corner = "ss", co_format = "table", co_out;
  std::string co_opamp_power = "table3";
  std::vector<std::string> co_families;
  cost_cmd->add_option("netlist", co_netlist)->required();
  cost_cmd->add_option("--family", co_families, "mtl | cmos (repeatable)");
  cost_cmd->add_option("--calib", co_calib, "calibration JSON file");
  cost_cmd->add_option("--corner", co_corner)->check(CLI::IsMember({"ss", "ff", "sf", "fs"}));
  cost_cmd->add_option("--format", co_format)->check(CLI::IsMember({"table", "json"}));
  cost_cmd->add_option("--opamp-power", co_opamp_power, "table3 | table1")
      ->check(CLI::IsMember({"table3", "table1"}));
  cost_cmd->add_option("-o,--out", co_out);

  // export ----------------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "re-emit as JSON or DOT");
  std::string ex_netlist, ex_format, ex_out;
  export_cmd->add_option("netlist", ex_netlist)->required();
  export_cmd->add_option("--format", ex_format)->required()->check(CLI::IsMember({"json", "dot"}));
  export_cmd->add_option("-o,--out", ex_out);

  // calib-dump --------------------------------------------------------------
  auto* calib_cmd = app.add_subcommand("calib-dump", "print the built-in calibration");
  std::string cd_out;
  calib_cmd->add_option("-o,--out", cd_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    // ---- synth ----
    if (synth_cmd->parsed()) {
      const mtl::netlist nl = build_target(synth_target, sopt);
      const std::string json = mtl::netlist_to_json(nl);
      const auto sched = mtl::validate_and_levelize(nl);
      const auto rep = mtl::cost::report(nl, mtl::cost::logic_family::mtl);
      std::ostringstream summary;
      summary << nl.name << ": " << nl.instances.size() << " cells, depth " << sched.depth()
              << ", " << rep.transistor_count << " transistors, " << rep.memristor_count
              << " memristors; ports";
      for (mtl::net_id pi : nl.primary_inputs)
        summary << " " << nl.net_name(pi);
      summary << " ->";
      for (mtl::net_id po : nl.primary_outputs)
        summary << " " << nl.net_name(po);
      summary << "\n";
      if (synth_out.empty()) {
        std::cout << json;
        std::cerr << summary.str();
      } else {
        write_output(synth_out, json);
        std::cout << summary.str();
      }
      return exit_ok;
    }

    // ---- sim ----
    if (sim_cmd->parsed()) {
      const mtl::netlist nl = mtl::netlist_from_json(read_file(sim_netlist));
      mtl::bit_rows rows;
      if (sim_exhaustive)
        rows = mtl::exhaustive_vectors(nl.primary_inputs.size());
      else if (!sim_vectors.empty())
        rows = csv_to_bits(parse_csv(read_file(sim_vectors)), nl);
      else
        throw usage_error("sim needs --vectors or --exhaustive");
      const mtl::bit_rows out = mtl::simulate(nl, rows);
      std::ostringstream os;
      for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i)
        os << (i ? "," : "") << nl.net_name(nl.primary_outputs[i]);
      os << "\n";
      for (const auto& row : out) {
        for (std::size_t i = 0; i < row.size(); ++i)
          os << (i ? "," : "") << int(row[i]);
        os << "\n";
      }
      write_output(sim_out, os.str());
      return exit_ok;
    }

    // ---- analog ----
    if (analog_cmd->parsed()) {
      if ((an_noise != 0 || an_tol != 0 || an_shift != 0) && !an_seed)
        throw usage_error("--seed is required when variability is nonzero");
      const mtl::netlist nl = mtl::netlist_from_json(read_file(an_netlist));
      const mtl::volt_rows rows = csv_to_volts(parse_csv(read_file(an_vectors)), nl);
      mtl::variability_spec spec{an_noise, an_tol, an_shift, an_seed.value_or(0)};
      const mtl::analog_config config{an_vth, an_rail};
      const mtl::analog_result res =
          mtl::simulate_analog(nl, rows, spec, config, {}, false, an_trial);
      std::ostringstream os;
      for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i)
        os << (i ? "," : "") << nl.net_name(nl.primary_outputs[i]) << "_volts";
      for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i)
        os << "," << nl.net_name(nl.primary_outputs[i]) << "_bit";
      os << "\n";
      for (std::size_t v = 0; v < res.volts.size(); ++v) {
        for (std::size_t i = 0; i < res.volts[v].size(); ++i)
          os << (i ? "," : "") << format_double(res.volts[v][i]);
        for (std::size_t i = 0; i < res.logic[v].size(); ++i)
          os << "," << int(res.logic[v][i]);
        os << "\n";
      }
      write_output(an_out, os.str());
      return exit_ok;
    }

    // ---- mc ----
    if (mc_cmd->parsed()) {
      if (mc_trials < 1)
        throw usage_error("--trials must be at least 1");
      const mtl::netlist nl = mtl::netlist_from_json(read_file(mc_netlist));
      mtl::bit_rows refs;
      if (!mc_vectors.empty()) {
        refs = csv_to_bits(parse_csv(read_file(mc_vectors)), nl);
      } else {
        if (nl.primary_inputs.size() > 16)
          throw usage_error("netlist has more than 16 inputs; provide --vectors");
        refs = mtl::exhaustive_vectors(nl.primary_inputs.size());
      }
      const mtl::variability_spec spec{mc_noise, mc_tol, mc_shift, mc_seed};
      const mtl::monte_carlo_result res =
          mtl::monte_carlo(nl, spec, mc_trials, refs, mtl::analog_config{});
      nlohmann::ordered_json j;
      j["trials"] = res.trials;
      j["errors"] = res.errors;
      j["error_rate"] = res.error_rate;
      write_output(mc_out, j.dump(2) + "\n");
      return exit_ok;
    }

    // ---- verify ----
    if (verify_cmd->parsed()) {
      const mtl::netlist nl = mtl::netlist_from_json(read_file(vf_netlist));
      const auto oracle = split(vf_oracle, ':');
      const auto mode = split(vf_mode, ':');
      const bool exhaustive = mode.size() == 1 && mode[0] == "exhaustive";
      std::uint64_t random_count = 0;
      if (!exhaustive) {
        if (mode.size() != 2 || mode[0] != "random")
          throw usage_error("--mode must be exhaustive or random:<count>");
        random_count = static_cast<std::uint64_t>(parse_int(mode[1]));
        if (random_count < 1)
          throw usage_error("random count must be positive");
        if (!vf_seed)
          throw usage_error("--seed is required in random mode");
      }
      if (oracle.size() < 2)
        throw usage_error("--oracle must be add:<w>, mul:<w>, dft4:<w> or fft8:<w>[:f]");
      const int w = parse_int(oracle[1]);
      if (w < 1 || w > 16)
        throw usage_error("oracle width out of range");
      const std::uint64_t mask = (1ULL << w) - 1;
      verify_stats st;

      if (oracle[0] == "add") {
        const port_group a = need_group(nl, "A", w, false);
        const port_group b = need_group(nl, "B", w, false);
        port_group cin;
        cin.bits.push_back([&] {
          for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i)
            if (nl.net_name(nl.primary_inputs[i]) == "C0")
              return i;
          mtl::raise(mtl::errc::schema_error, "input port 'C0' not found");
        }());
        const port_group s = need_group(nl, "S", w, true);
        port_group cout;
        cout.bits.push_back([&] {
          for (std::size_t i = 0; i < nl.primary_outputs.size(); ++i)
            if (nl.net_name(nl.primary_outputs[i]) == "Cout")
              return i;
          mtl::raise(mtl::errc::schema_error, "output port 'Cout' not found");
        }());
        if (exhaustive && 2 * w + 1 > 24)
          throw usage_error("operand space too large; use random:<count>");
        const std::uint64_t total = exhaustive ? (1ULL << (2 * w + 1)) : random_count;
        mtl::rng_stream rng = mtl::derive_stream(vf_seed.value_or(0), 0, 2);
        std::vector<std::uint64_t> cases(total);
        for (std::uint64_t k = 0; k < total; ++k)
          cases[k] = exhaustive ? k : rng.next_u64();
        st = run_cases(
            nl, total,
            [&](std::uint64_t k) {
              mtl::bit_row row(nl.primary_inputs.size(), 0);
              const std::uint64_t av = cases[k] & mask;
              const std::uint64_t bv = (cases[k] >> w) & mask;
              const std::uint64_t cv = (cases[k] >> (2 * w)) & 1;
              set_word(row, a, av);
              set_word(row, b, bv);
              row[cin.bits[0]] = static_cast<std::uint8_t>(cv);
              return row;
            },
            [&](std::uint64_t k, const mtl::bit_row& out, std::string& why) {
              const std::uint64_t av = cases[k] & mask;
              const std::uint64_t bv = (cases[k] >> w) & mask;
              const std::uint64_t cv = (cases[k] >> (2 * w)) & 1;
              const std::uint64_t total_sum = av + bv + cv;
              const std::uint64_t want_s = total_sum & mask;
              const std::uint64_t want_c = (total_sum >> w) & 1;
              const std::uint64_t got_s = get_word(out, s);
              const std::uint64_t got_c = out[cout.bits[0]];
              if (got_s == want_s && got_c == want_c)
                return true;
              why = "A=" + std::to_string(av) + " B=" + std::to_string(bv) +
                    " C0=" + std::to_string(cv) + ": expected S=" + std::to_string(want_s) +
                    " Cout=" + std::to_string(want_c) + ", got S=" + std::to_string(got_s) +
                    " Cout=" + std::to_string(got_c);
              return false;
            });
      } else if (oracle[0] == "mul") {
        const port_group a = need_group(nl, "A", w, false);
        const port_group b = need_group(nl, "B", w, false);
        auto p = find_group(nl, "P", 2 * w, true);
        if (!p)
          p = find_group(nl, "S", 2 * w, true);
        if (!p)
          mtl::raise(mtl::errc::schema_error, "product port group P*/S* not found");
        if (exhaustive && 2 * w > 24)
          throw usage_error("operand space too large; use random:<count>");
        const std::uint64_t total = exhaustive ? (1ULL << (2 * w)) : random_count;
        mtl::rng_stream rng = mtl::derive_stream(vf_seed.value_or(0), 0, 2);
        std::vector<std::uint64_t> cases(total);
        for (std::uint64_t k = 0; k < total; ++k)
          cases[k] = exhaustive ? k : rng.next_u64();
        st = run_cases(
            nl, total,
            [&](std::uint64_t k) {
              mtl::bit_row row(nl.primary_inputs.size(), 0);
              set_word(row, a, cases[k] & mask);
              set_word(row, b, (cases[k] >> w) & mask);
              return row;
            },
            [&](std::uint64_t k, const mtl::bit_row& out, std::string& why) {
              const std::uint64_t av = cases[k] & mask;
              const std::uint64_t bv = (cases[k] >> w) & mask;
              const std::uint64_t want = av * bv;
              const std::uint64_t got = get_word(out, *p);
              if (want == got)
                return true;
              why = "A=" + std::to_string(av) + " B=" + std::to_string(bv) + ": expected " +
                    std::to_string(want) + ", got " + std::to_string(got);
              return false;
            });
      } else if (oracle[0] == "dft4" || oracle[0] == "fft8") {
        const int points = oracle[0] == "dft4" ? 4 : 8;
        mtl::fft::fixed_point_format fmt = mtl::fft::fixed_point_format::defaults(w);
        if (oracle.size() == 3)
          fmt.frac_bits = parse_int(oracle[2]);
        std::vector<port_group> in_re(points), in_im(points), out_re(points), out_im(points);
        for (int n = 0; n < points; ++n) {
          in_re[n] = need_group(nl, "x" + std::to_string(n) + "_re_", w, false);
          in_im[n] = need_group(nl, "x" + std::to_string(n) + "_im_", w, false);
          out_re[n] = need_group(nl, "X" + std::to_string(n) + "_re_", w, true);
          out_im[n] = need_group(nl, "X" + std::to_string(n) + "_im_", w, true);
        }
        if (exhaustive)
          throw usage_error("dft4/fft8 oracles support random:<count> mode only");
        const std::uint64_t total = random_count;
        std::vector<std::vector<mtl::fft::complex_word>> cases(total);
        mtl::rng_stream rng = mtl::derive_stream(*vf_seed, 0, 2);
        for (auto& c : cases) {
          c.resize(points);
          for (auto& x : c)
            x = {rng.next_u64() & mask, rng.next_u64() & mask};
        }
        st = run_cases(
            nl, total,
            [&](std::uint64_t k) {
              mtl::bit_row row(nl.primary_inputs.size(), 0);
              for (int n = 0; n < points; ++n) {
                set_word(row, in_re[n], cases[k][n].re);
                set_word(row, in_im[n], cases[k][n].im);
              }
              return row;
            },
            [&](std::uint64_t k, const mtl::bit_row& out, std::string& why) {
              const std::vector<mtl::fft::complex_word> want =
                  points == 4 ? mtl::fft::reference_dft(cases[k], w)
                              : mtl::fft::reference_dft(cases[k], w, fmt);
              for (int n = 0; n < points; ++n) {
                const std::uint64_t gr = get_word(out, out_re[n]);
                const std::uint64_t gi = get_word(out, out_im[n]);
                if (gr != want[n].re || gi != want[n].im) {
                  std::ostringstream os;
                  os << "case " << k << " X" << n << ": expected (" << want[n].re << ","
                     << want[n].im << "), got (" << gr << "," << gi << ")";
                  why = os.str();
                  return false;
                }
              }
              return true;
            });
      } else {
        throw usage_error("unknown oracle '" + oracle[0] + "'");
      }

      if (st.failed) {
        std::cerr << "mismatch after " << st.cases << " cases: " << st.counterexample << "\n";
        return exit_mismatch;
      }
      std::cout << "verified " << st.cases << " cases\n";
      return exit_ok;
    }

    // ---- sweep ----
    if (sweep_cmd->parsed()) {
      if (sw_step <= 0)
        throw usage_error("--step must be positive");
      if (sw_to < sw_from)
        throw usage_error("empty range");
      const auto parts = split(sw_gate, ':');
      if (parts.size() != 2 || (parts[0] != "nor" && parts[0] != "nand"))
        throw usage_error("--gate must be nor:<n> or nand:<n>");
      const int n = parse_int(parts[1]);
      if (n < 1 || n > 16)
        throw usage_error("gate fan-in out of range");
      const mtl::cell_fn fn = parts[0] == "nor" ? mtl::cell_fn::nor_fn : mtl::cell_fn::nand_fn;
      const mtl::voltage_levels levels{};
      const mtl::vref_window window = mtl::threshold_window(fn, n, levels);
      const std::size_t rows = std::size_t{1} << n;
      const mtl::bit_rows inputs = mtl::exhaustive_vectors(static_cast<std::size_t>(n));

      std::ostringstream os;
      os << "v_ref";
      for (std::size_t r = 0; r < rows; ++r)
        os << ",row" << r;
      os << ",noise_margin,in_window\n";
      const auto samples = static_cast<std::uint64_t>((sw_to - sw_from) / sw_step + 1e-9) + 1;
      for (std::uint64_t i = 0; i < samples; ++i) {
        const double v_ref = sw_from + static_cast<double>(i) * sw_step;
        mtl::threshold_cell cell{fn, n, mtl::equal_memristances(n), v_ref, false};
        os << format_double(v_ref);
        for (std::size_t r = 0; r < rows; ++r)
          os << "," << int(mtl::evaluate(cell, inputs[r], levels));
        os << "," << format_double(mtl::noise_margin(cell, levels));
        os << "," << int(window.contains(v_ref));
        os << "\n";
      }
      write_output(sw_out, os.str());
      return exit_ok;
    }

    // ---- cost ----
    if (cost_cmd->parsed()) {
      const mtl::netlist nl = mtl::netlist_from_json(read_file(co_netlist));
      mtl::cost::calibration_table calib = co_calib.empty()
                                               ? mtl::cost::calibration_table::defaults()
                                               : mtl::cost::calibration_from_json(read_file(co_calib));
      if (co_opamp_power == "table1")
        calib = calib.with_alternate_opamp_power();
      if (co_families.empty())
        co_families = {"mtl"};
      const mtl::corner sel = co_corner == "ss"   ? mtl::corner::ss
                              : co_corner == "ff" ? mtl::corner::ff
                              : co_corner == "sf" ? mtl::corner::sf
                                                  : mtl::corner::fs;
      std::vector<std::pair<std::string, mtl::cost::cost_report>> reports;
      for (const std::string& fam : co_families)
        reports.emplace_back(fam,
                             mtl::cost::report(nl, mtl::cost::logic_family_from_key(fam), calib));

      std::ostringstream os;
      if (co_format == "json") {
        nlohmann::ordered_json j;
        for (const auto& [fam, rep] : reports) {
          nlohmann::ordered_json r;
          r["area_um2"] = rep.area_um2;
          r["power_w"] = rep.power_w;
          r["power"] = mtl::cost::format_si(rep.power_w);
          r["leakage_w"] = rep.leakage_w;
          r["leakage"] = mtl::cost::format_si(rep.leakage_w);
          r["energy_j"] = rep.energy_j;
          r["energy"] = mtl::cost::format_si(rep.energy_j);
          r["transistors"] = rep.transistor_count;
          r["memristors"] = rep.memristor_count;
          r["cells"] = rep.cell_count;
          r["depth"] = rep.depth;
          r["delay_ns"] = {{"ss", rep.delay_ns_ss},
                           {"ff", rep.delay_ns_ff},
                           {"sf", rep.delay_ns_sf},
                           {"fs", rep.delay_ns_fs}};
          j[fam] = std::move(r);
        }
        if (reports.size() >= 2) {
          const mtl::cost::comparison cmp = mtl::cost::compare(reports);
          nlohmann::ordered_json jc;
          for (const auto& m : cmp.metrics) {
            nlohmann::ordered_json row;
            for (const auto& [rname, value] : m.ascending)
              row["ranking"].push_back(rname);
            for (std::size_t i = 0; i < m.ratio_to_first.size(); ++i)
              row["ratio_to_" + reports.front().first].push_back(m.ratio_to_first[i]);
            jc[m.metric] = std::move(row);
          }
          j["comparison"] = std::move(jc);
        }
        os << j.dump(2) << "\n";
      } else {
        for (const auto& [fam, rep] : reports) {
          os << nl.name << " [" << fam << "]\n";
          os << "  cells        " << rep.cell_count << "\n";
          os << "  transistors  " << rep.transistor_count << "\n";
          os << "  memristors   " << rep.memristor_count << "\n";
          os << "  area_um2     " << format_short(rep.area_um2) << "\n";
          os << "  power        " << mtl::cost::format_si(rep.power_w) << "W\n";
          os << "  leakage      " << mtl::cost::format_si(rep.leakage_w) << "W\n";
          os << "  energy       " << mtl::cost::format_si(rep.energy_j) << "J\n";
          os << "  depth        " << rep.depth << "\n";
          os << "  delay[" << co_corner << "]    " << format_short(rep.delay_ns(sel)) << " ns\n";
        }
        if (reports.size() >= 2) {
          const mtl::cost::comparison cmp = mtl::cost::compare(reports);
          os << "comparison (ratio vs " << reports.front().first << ")\n";
          for (const auto& m : cmp.metrics) {
            os << "  " << m.metric << ": ";
            for (std::size_t i = 0; i < m.ascending.size(); ++i)
              os << (i ? " < " : "") << m.ascending[i].first << "="
                 << format_short(m.ascending[i].second);
            os << "  ratios";
            for (double r : m.ratio_to_first)
              os << " " << format_short(r);
            os << "\n";
          }
        }
      }
      write_output(co_out, os.str());
      return exit_ok;
    }

    // ---- export ----
    if (export_cmd->parsed()) {
      const mtl::netlist nl = mtl::netlist_from_json(read_file(ex_netlist));
      write_output(ex_out, ex_format == "json" ? mtl::netlist_to_json(nl)
                                               : mtl::netlist_to_dot(nl));
      return exit_ok;
    }

    // ---- calib-dump ----
    if (calib_cmd->parsed()) {
      write_output(cd_out, mtl::cost::calibration_to_json(mtl::cost::calibration_table::defaults()));
      return exit_ok;
    }
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const mtl::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  }
  return exit_usage;
}
