#include "doctest.h"

#include <set>

#include "mtl/netlist.hpp"
#include "mtl/netlist_json.hpp"
#include "mtl/sim.hpp"
#include "mtl/synth.hpp"

#include "helpers.hpp"

using namespace mtl;

namespace {

const voltage_levels lv{};

netlist single_nor(double v_ref = 0.25, bool opamp = false) {
  return synth::single_cell(make_cell_at(cell_fn::nor_fn, 2, v_ref, lv, opamp), "nor2");
}

netlist inverter_chain(int length) {
  netlist nl("chain" + std::to_string(length));
  net_id cur = nl.add_input("I");
  for (int i = 0; i < length; ++i) {
    const net_id out = nl.add_net("n" + std::to_string(i));
    nl.instances.push_back({"u" + std::to_string(i), instance_kind::cell,
                            make_cell_at(cell_fn::nor_fn, 1, 0.5, lv, false), {cur}, out});
    cur = out;
  }
  nl.mark_output(cur);
  return nl;
}

} // namespace

TEST_CASE("levelize simple shapes") {
  CHECK(validate_and_levelize(single_nor()).depth() == 1);
  CHECK(validate_and_levelize(inverter_chain(6)).depth() == 6);

  netlist empty("pass");
  empty.mark_output(empty.add_input("A"));
  CHECK(validate_and_levelize(empty).depth() == 0);
}

TEST_CASE("levelize rejects bad graphs") {
  netlist loop("loop");
  const net_id n = loop.add_net("n");
  loop.instances.push_back({"u0", instance_kind::cell,
                            make_cell_at(cell_fn::nor_fn, 1, 0.5, lv, false), {n}, n});
  loop.mark_output(n);
  CHECK_RAISES(errc::combinational_cycle, validate_and_levelize(loop));

  netlist cyc("cycle2");
  const net_id a = cyc.add_net("a");
  const net_id b = cyc.add_net("b");
  cyc.instances.push_back({"u0", instance_kind::inverter,
                           make_cell_at(cell_fn::nor_fn, 1, 0.5, lv, false), {a}, b});
  cyc.instances.push_back({"u1", instance_kind::inverter,
                           make_cell_at(cell_fn::nor_fn, 1, 0.5, lv, false), {b}, a});
  cyc.mark_output(b);
  CHECK_RAISES(errc::combinational_cycle, validate_and_levelize(cyc));

  netlist dup("dup");
  const net_id in = dup.add_input("I");
  const net_id out = dup.add_net("n");
  dup.instances.push_back({"u0", instance_kind::inverter,
                           make_cell_at(cell_fn::nor_fn, 1, 0.5, lv, false), {in}, out});
  dup.instances.push_back({"u1", instance_kind::inverter,
                           make_cell_at(cell_fn::nor_fn, 1, 0.5, lv, false), {in}, out});
  dup.mark_output(out);
  CHECK_RAISES(errc::multiple_drivers, validate_and_levelize(dup));

  netlist dangling("dangling");
  const net_id i0 = dangling.add_input("I");
  const net_id ghost = dangling.add_net("ghost");
  const net_id y = dangling.add_net("y");
  dangling.instances.push_back({"u0", instance_kind::cell,
                                make_cell_at(cell_fn::nor_fn, 2, 0.25, lv, false), {i0, ghost}, y});
  dangling.mark_output(y);
  CHECK_RAISES(errc::dangling_input, validate_and_levelize(dangling));
}

TEST_CASE("levelization puts every instance after its drivers") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const netlist nl = test_util::random_netlist(seed, 4, 16);
    const level_schedule sched = validate_and_levelize(nl);
    REQUIRE(sched.order.size() == nl.instances.size());

    // Brute-force oracle: longest driver chain per instance.
    std::vector<int> level_of_net(nl.nets.size(), 0);
    std::vector<int> want_level(nl.instances.size(), -1);
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t k = 0; k < nl.instances.size(); ++k) {
        int deepest = 0;
        for (net_id in : nl.instances[k].inputs)
          deepest = std::max(deepest, level_of_net[in]);
        if (want_level[k] != deepest + 1) {
          want_level[k] = deepest + 1;
          level_of_net[nl.instances[k].output] = deepest + 1;
          progress = true;
        }
      }
    }
    for (std::size_t lvl = 0; lvl < sched.levels.size(); ++lvl)
      for (std::uint32_t idx : sched.levels[lvl])
        CHECK(want_level[idx] == static_cast<int>(lvl) + 1);
    CHECK(sched.depth() ==
          static_cast<std::size_t>(*std::max_element(want_level.begin(), want_level.end())));
  }
}

TEST_CASE("simulate single cell reproduces the truth table") {
  const bit_rows out = simulate(single_nor(), exhaustive_vectors(2), lv);
  REQUIRE(out.size() == 4);
  CHECK(out[0][0] == 1); // (L,L)
  CHECK(out[1][0] == 0);
  CHECK(out[2][0] == 0);
  CHECK(out[3][0] == 0);

  CHECK(simulate(single_nor(), {}, lv).empty());
  CHECK_RAISES(errc::width_mismatch, simulate(single_nor(), {bit_row{1}}, lv));
}

TEST_CASE("parallel simulation equals the serial reference") {
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    const netlist nl = test_util::random_netlist(seed, 5, 20);
    const bit_rows vectors = exhaustive_vectors(5);
    CHECK(simulate(nl, vectors, lv) == simulate_reference(nl, vectors, lv));
  }
}

TEST_CASE("waveform covers every net") {
  const netlist nl = synth::vedic2();
  const bit_rows vectors = exhaustive_vectors(4);
  const waveform wf = simulate_waveform(nl, vectors, lv);
  CHECK(wf.nets.size() == nl.nets.size());
  for (const auto& trace : wf.values)
    CHECK(trace.size() == vectors.size());
}

TEST_CASE("zero-variability analog equals boolean") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const netlist nl = test_util::random_netlist(seed, 4, 14);
    const bit_rows vectors = exhaustive_vectors(4);
    volt_rows volts(vectors.size(), volt_row(4));
    for (std::size_t v = 0; v < vectors.size(); ++v)
      for (std::size_t i = 0; i < 4; ++i)
        volts[v][i] = vectors[v][i] ? lv.v_high : lv.v_low;
    const analog_result res = simulate_analog(nl, volts, {}, analog_config::defaults(lv), lv);
    CHECK(res.logic == simulate(nl, vectors, lv));
  }
}

TEST_CASE("zero-variability analog equals boolean exhaustively at 16 inputs") {
  const netlist nl = synth::vedic(8);
  const std::size_t n = nl.primary_inputs.size();
  REQUIRE(n == 16);
  const bit_rows vectors = exhaustive_vectors(n);
  volt_rows volts(vectors.size(), volt_row(n));
  for (std::size_t v = 0; v < vectors.size(); ++v)
    for (std::size_t i = 0; i < n; ++i)
      volts[v][i] = vectors[v][i] ? lv.v_high : lv.v_low;
  const analog_result res = simulate_analog(nl, volts, {}, analog_config::defaults(lv), lv);
  CHECK(res.logic == simulate(nl, vectors, lv));
}

TEST_CASE("analog matches the single-cell chain example") {
  const netlist nl = single_nor(0.25, true);
  const analog_result res =
      simulate_analog(nl, {volt_row{0.10, 0.05}}, {}, analog_config::defaults(lv), lv, true);
  CHECK(res.volts[0][0] == doctest::Approx(1.0));
  CHECK(res.logic[0][0] == 1);
  REQUIRE(res.traces.size() == 1);
  CHECK(res.traces[0][0].v_a == doctest::Approx(0.075));
  CHECK(res.traces[0][0].comparator_out == doctest::Approx(-1.0));
}

TEST_CASE("20 percent input noise never flips a midwindow 2-input cell") {
  const netlist nl = single_nor(0.25, true);
  const bit_rows refs = exhaustive_vectors(2);
  volt_rows nominal(refs.size(), volt_row(2));
  for (std::size_t v = 0; v < refs.size(); ++v)
    for (std::size_t i = 0; i < 2; ++i)
      nominal[v][i] = refs[v][i] ? 1.0 : 0.0;
  const bit_rows golden = simulate(nl, refs, lv);
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    variability_spec spec{0.2, 0.0, 0.0, 99};
    const analog_result res =
        simulate_analog(nl, nominal, spec, analog_config::defaults(lv), lv, false, trial);
    CHECK(res.logic == golden);
  }
}

TEST_CASE("monte carlo midwindow robustness and overdrive") {
  const netlist nl = single_nor(0.25, true);
  const bit_rows refs = exhaustive_vectors(2);
  const analog_config cfg = analog_config::defaults(lv);

  const monte_carlo_result ok = monte_carlo(nl, {0.2, 0.1, 0.0, 11}, 4000, refs, cfg, lv);
  CHECK(ok.errors == 0);
  CHECK(ok.error_rate == 0.0);

  const monte_carlo_result bad = monte_carlo(nl, {0.6, 0.1, 0.0, 11}, 4000, refs, cfg, lv);
  CHECK(bad.errors > 0);
  CHECK(bad.error_rate > 0.0);

  CHECK_RAISES(errc::invalid_trials, monte_carlo(nl, {0.2, 0.1, 0.0, 11}, 0, refs, cfg, lv));
  CHECK_RAISES(errc::invalid_variability, monte_carlo(nl, {-0.1, 0.0, 0.0, 11}, 10, refs, cfg, lv));
  CHECK_RAISES(errc::invalid_variability, monte_carlo(nl, {0.1, 1.0, 0.0, 11}, 10, refs, cfg, lv));
}

TEST_CASE("monte carlo is deterministic and thread-shape independent") {
  const netlist nl = single_nor(0.3, true);
  const bit_rows refs = exhaustive_vectors(2);
  const variability_spec spec{0.45, 0.2, 0.1, 1234};
  const monte_carlo_result a = monte_carlo(nl, spec, 3000, refs, {}, lv);
  const monte_carlo_result b = monte_carlo(nl, spec, 3000, refs, {}, lv);
  const monte_carlo_result c = monte_carlo_reference(nl, spec, 3000, refs, {}, lv);
  CHECK(a.errors == b.errors);
  CHECK(a.errors == c.errors);
  CHECK(a.error_rate == doctest::Approx(static_cast<double>(a.errors) / 3000.0));
}

TEST_CASE("noise below the enumerated margin is error free") {
  rng_stream rng(5);
  for (int it = 0; it < 10; ++it) {
    const cell_fn fn = it % 2 ? cell_fn::nor_fn : cell_fn::nand_fn;
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const vref_window win = threshold_window(fn, n, lv);
    const double v_ref = win.lo + (0.2 + 0.6 * rng.next_unit()) * win.width();
    const threshold_cell cell = make_cell_at(fn, n, v_ref, lv, true);
    const netlist nl = synth::single_cell(cell, "cell");
    const double margin = noise_margin(cell, lv);
    const double eps = 0.9 * margin / lv.swing();
    const monte_carlo_result res =
        monte_carlo(nl, {eps, 0.0, 0.0, 77}, 500, exhaustive_vectors(n), {}, lv);
    CHECK(res.errors == 0);
  }
}

TEST_CASE("critical delay is depth times the corner constant") {
  const netlist chain = inverter_chain(6);
  CHECK(critical_delay(chain, corner::ss) == doctest::Approx(5.34));
  CHECK(critical_delay(chain, corner::ff) == doctest::Approx(1.38));
  CHECK(critical_delay(single_nor(), corner::ff) == doctest::Approx(0.23));

  netlist empty("pass");
  empty.mark_output(empty.add_input("A"));
  CHECK(critical_delay(empty, corner::ss) == 0.0);

  // Linear in chain length, and composing in series adds depths.
  for (int k = 1; k <= 10; ++k)
    CHECK(critical_delay(inverter_chain(k), corner::ss) == doctest::Approx(0.89 * k));
}

TEST_CASE("series composition adds depth") {
  const netlist ha = synth::half_adder();
  netlist nl("series");
  const net_id a = nl.add_input("a");
  const net_id b = nl.add_input("b");
  const auto first = instantiate(nl, ha, "h0", "half_adder", {a, b});
  const auto second = instantiate(nl, ha, "h1", "half_adder", {first[0], first[1]});
  nl.mark_output(second[0]);
  nl.mark_output(second[1]);
  CHECK(validate_and_levelize(nl).depth() ==
        2 * validate_and_levelize(ha).depth());
}

TEST_CASE("json round trip is byte identical and simulation equivalent") {
  const netlist nl = synth::vedic2();
  const std::string json = netlist_to_json(nl);
  const netlist back = netlist_from_json(json);
  CHECK(netlist_to_json(back) == json);

  const bit_rows vectors = exhaustive_vectors(4);
  CHECK(simulate(nl, vectors, lv) == simulate(back, vectors, lv));

  // Port order survives.
  REQUIRE(back.primary_inputs.size() == 4);
  CHECK(back.net_name(back.primary_inputs[0]) == "A0");
  CHECK(back.net_name(back.primary_outputs[3]) == "S3");
}

TEST_CASE("large generated netlists round trip through json") {
  for (const netlist& nl : {synth::cla(8), synth::vedic(8)}) {
    const std::string json = netlist_to_json(nl);
    const netlist back = netlist_from_json(json);
    CHECK(netlist_to_json(back) == json);
  }
}

TEST_CASE("generated net names are unique") {
  for (const netlist& nl : {synth::vedic(8), synth::cla(8)}) {
    std::set<std::string> names;
    for (const net& n : nl.nets)
      CHECK(names.insert(n.name).second);
  }
}

TEST_CASE("json loader rejects malformed inputs") {
  CHECK_RAISES(errc::schema_error, netlist_from_json("not json"));
  CHECK_RAISES(errc::schema_error, netlist_from_json(R"({"name":"x","inputs":[],"outputs":[]})"));
  CHECK_RAISES(errc::schema_error, netlist_from_json(
      R"({"name":"x","inputs":["A"],"outputs":["Y"],
          "cells":[{"id":"u0","kind":"maj","fan_in":1,"v_ref":0.5,"has_opamp":false,
                    "inputs":["A"],"output":"Y"}]})"));
  // Undriven output net.
  CHECK_RAISES(errc::schema_error, netlist_from_json(
      R"({"name":"x","inputs":["A"],"outputs":["Z"],
          "cells":[{"id":"u0","kind":"inv","fan_in":1,"v_ref":0.5,"has_opamp":false,
                    "inputs":["A"],"output":"Y"}]})"));
}

TEST_CASE("constants are addressable from json") {
  const netlist nl = netlist_from_json(
      R"({"name":"tie","inputs":["A"],"outputs":["Y"],
          "cells":[{"id":"u0","kind":"nand","fan_in":2,"v_ref":0.75,"has_opamp":false,
                    "inputs":["A","$high"],"output":"Y"}]})");
  const bit_rows out = simulate(nl, {{0}, {1}}, lv);
  CHECK(out[0][0] == 1); // nand(A=0, 1)
  CHECK(out[1][0] == 0); // nand(A=1, 1)
}

TEST_CASE("dot export names every instance") {
  const netlist nl = synth::vedic2();
  const std::string dot = netlist_to_dot(nl);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.back() == '\n');
  for (const cell_instance& inst : nl.instances)
    CHECK(dot.find('"' + inst.id + '"') != std::string::npos);
}
