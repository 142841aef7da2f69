#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mtl/cell.hpp"

namespace mtl {

using net_id = std::uint32_t;

struct net {
  std::string name;
};

enum class instance_kind : std::uint8_t {
  cell,    // averaging threshold cell (nor/nand function of its reference)
  inverter // bare restore inverter, no memristors, no reference
};

struct cell_instance {
  std::string id;
  instance_kind kind = instance_kind::cell;
  threshold_cell cell;          // meaningful when kind == cell
  std::vector<net_id> inputs;   // |inputs| == fan_in (1 for inverters)
  net_id output = 0;
};

/// One structural sub-block a generator composed into a netlist, with its own
/// children. Metadata only; flattened instances carry the actual circuit.
struct block {
  std::string tag; // e.g. "cla:8", "vedic:4", "fft_unit:8", "half_adder"
  std::vector<block> children;
};

/// Count of direct children whose tag matches exactly.
std::size_t count_blocks(const std::vector<block>& blocks, std::string_view tag);
/// Count over the whole subtree.
std::size_t count_blocks_recursive(const std::vector<block>& blocks, std::string_view tag);

/// Directed acyclic graph of cell instances over named nets. Nets 0 and 1 are
/// the predefined constants "$low" and "$high"; everything else is created by
/// builders or loaded from JSON. Immutable once built, so simulation may read
/// it from any number of threads.
struct netlist {
  std::string name;
  std::vector<net> nets; // index is the net id; [0] = $low, [1] = $high
  std::vector<net_id> primary_inputs;
  std::vector<net_id> primary_outputs;
  std::vector<cell_instance> instances;
  std::vector<block> blocks;

  static constexpr net_id low_net = 0;
  static constexpr net_id high_net = 1;

  netlist() : netlist("") {}
  explicit netlist(std::string name_) : name(std::move(name_)) {
    nets.push_back({"$low"});
    nets.push_back({"$high"});
  }

  net_id add_net(std::string net_name) {
    nets.push_back({std::move(net_name)});
    return static_cast<net_id>(nets.size() - 1);
  }
  net_id add_input(std::string net_name) {
    const net_id id = add_net(std::move(net_name));
    primary_inputs.push_back(id);
    return id;
  }
  void mark_output(net_id id) { primary_outputs.push_back(id); }

  const std::string& net_name(net_id id) const { return nets[id].name; }
  /// Returns the net with the given name, or npos_net.
  net_id find_net(std::string_view net_name) const;

  static constexpr net_id npos_net = static_cast<net_id>(-1);
};

/// Topological order of instance indices grouped into levels; the level count
/// is the combinational depth. Rejects cycles, nets with several drivers and
/// instance inputs no primary input or constant can reach.
struct level_schedule {
  std::vector<std::vector<std::uint32_t>> levels;
  std::vector<std::uint32_t> order; // flattened levels

  std::size_t depth() const { return levels.size(); }
};

level_schedule validate_and_levelize(const netlist& nl);

/// Copies `sub` into `parent`, wiring sub's primary inputs to `inputs`
/// (matched by position) and returning the parent nets now carrying sub's
/// primary outputs. Internal nets and instance ids are prefixed with
/// "<inst_name>." to stay unique; sub's block tree is recorded under `tag`.
std::vector<net_id> instantiate(netlist& parent, const netlist& sub, std::string_view inst_name,
                                std::string_view tag, const std::vector<net_id>& inputs);

} // namespace mtl
