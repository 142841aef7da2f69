#pragma once

#include <cstdint>
#include <vector>

#include "doctest.h"

#include "mtl/errors.hpp"
#include "mtl/netlist.hpp"
#include "mtl/rng.hpp"

#define CHECK_RAISES(code_, ...)                                                                   \
  do {                                                                                             \
    bool caught_ = false;                                                                          \
    try {                                                                                          \
      __VA_ARGS__;                                                                                 \
    } catch (const mtl::error& e_) {                                                               \
      caught_ = true;                                                                              \
      CHECK(e_.code() == (code_));                                                                 \
    }                                                                                              \
    CHECK_MESSAGE(caught_, "expected " << mtl::to_string(code_));                                  \
  } while (0)

namespace test_util {

/// Random DAG of threshold cells and inverters over a handful of inputs.
/// References stay strictly inside their windows so the netlist is also a
/// valid boolean circuit.
inline mtl::netlist random_netlist(std::uint64_t seed, int n_inputs = 4, int n_cells = 12) {
  mtl::rng_stream rng(mtl::mix_u64(seed));
  mtl::netlist nl("random" + std::to_string(seed));
  std::vector<mtl::net_id> pool;
  for (int i = 0; i < n_inputs; ++i)
    pool.push_back(nl.add_input("I" + std::to_string(i)));
  pool.push_back(mtl::netlist::low_net);
  pool.push_back(mtl::netlist::high_net);
  const mtl::voltage_levels levels{};
  for (int k = 0; k < n_cells; ++k) {
    const mtl::net_id out = nl.add_net("n" + std::to_string(k));
    if (rng.next_u64() % 4 == 0) {
      const mtl::net_id in = pool[rng.next_u64() % pool.size()];
      mtl::threshold_cell c{mtl::cell_fn::nor_fn, 1, mtl::equal_memristances(1),
                            levels.midpoint(), false};
      nl.instances.push_back({"u" + std::to_string(k), mtl::instance_kind::inverter, c, {in}, out});
    } else {
      const int fan_in = 1 + static_cast<int>(rng.next_u64() % 3);
      std::vector<mtl::net_id> ins;
      for (int i = 0; i < fan_in; ++i)
        ins.push_back(pool[rng.next_u64() % pool.size()]);
      const mtl::cell_fn fn =
          rng.next_u64() % 2 ? mtl::cell_fn::nor_fn : mtl::cell_fn::nand_fn;
      const mtl::vref_window win = mtl::threshold_window(fn, fan_in, levels);
      const double v_ref = win.lo + (0.2 + 0.6 * rng.next_unit()) * win.width();
      mtl::threshold_cell c{fn, fan_in, mtl::equal_memristances(fan_in), v_ref,
                            rng.next_u64() % 2 == 0};
      nl.instances.push_back({"u" + std::to_string(k), mtl::instance_kind::cell, c, ins, out});
    }
    pool.push_back(out);
  }
  // Last few nets become the observable outputs.
  for (std::size_t i = pool.size() - 3; i < pool.size(); ++i)
    nl.mark_output(pool[i]);
  return nl;
}

} // namespace test_util
