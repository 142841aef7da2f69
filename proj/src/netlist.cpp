#include "mtl/netlist.hpp"

#include <unordered_map>

namespace mtl {

std::size_t count_blocks(const std::vector<block>& blocks, std::string_view tag) {
  std::size_t n = 0;
  for (const block& b : blocks)
    if (b.tag == tag)
      ++n;
  return n;
}

std::size_t count_blocks_recursive(const std::vector<block>& blocks, std::string_view tag) {
  std::size_t n = 0;
  for (const block& b : blocks)
    n += (b.tag == tag ? 1 : 0) + count_blocks_recursive(b.children, tag);
  return n;
}

net_id netlist::find_net(std::string_view net_name) const {
  for (net_id i = 0; i < nets.size(); ++i)
    if (nets[i].name == net_name)
      return i;
  return npos_net;
}

level_schedule validate_and_levelize(const netlist& nl) {
  const std::size_t n_nets = nl.nets.size();
  const std::size_t n_inst = nl.instances.size();
  constexpr std::uint32_t no_driver = static_cast<std::uint32_t>(-1);
  constexpr std::uint32_t source_driver = static_cast<std::uint32_t>(-2);

  // Driver map: constants and primary inputs are sources; each remaining net
  // must be driven by exactly one instance output.
  std::vector<std::uint32_t> driver(n_nets, no_driver);
  driver[netlist::low_net] = source_driver;
  driver[netlist::high_net] = source_driver;
  for (net_id pi : nl.primary_inputs) {
    if (driver[pi] != no_driver)
      raise(errc::multiple_drivers, "primary input net '" + nl.net_name(pi) + "' already driven");
    driver[pi] = source_driver;
  }
  for (std::uint32_t i = 0; i < n_inst; ++i) {
    const cell_instance& inst = nl.instances[i];
    if (inst.kind == instance_kind::cell &&
        static_cast<int>(inst.inputs.size()) != inst.cell.fan_in)
      raise(errc::arity_mismatch, "instance '" + inst.id + "' fan-in mismatch");
    if (inst.kind == instance_kind::inverter && inst.inputs.size() != 1)
      raise(errc::arity_mismatch, "inverter '" + inst.id + "' must have one input");
    if (driver[inst.output] != no_driver)
      raise(errc::multiple_drivers, "net '" + nl.net_name(inst.output) + "' driven by '" +
                                        inst.id + "' and another source");
    driver[inst.output] = i;
    for (net_id in : inst.inputs)
      if (in == inst.output)
        raise(errc::combinational_cycle, "instance '" + inst.id + "' feeds its own input");
  }
  for (std::uint32_t i = 0; i < n_inst; ++i)
    for (net_id in : nl.instances[i].inputs)
      if (driver[in] == no_driver)
        raise(errc::dangling_input, "net '" + nl.net_name(in) + "' into '" +
                                        nl.instances[i].id + "' has no driver");
  for (net_id out : nl.primary_outputs)
    if (driver[out] == no_driver)
      raise(errc::dangling_input, "primary output net '" + nl.net_name(out) + "' has no driver");

  // Kahn levelization over instance -> instance edges.
  std::vector<std::uint32_t> pending(n_inst, 0);
  std::vector<std::vector<std::uint32_t>> consumers(n_inst);
  for (std::uint32_t i = 0; i < n_inst; ++i) {
    for (net_id in : nl.instances[i].inputs) {
      const std::uint32_t d = driver[in];
      if (d != source_driver) {
        ++pending[i];
        consumers[d].push_back(i);
      }
    }
  }

  level_schedule sched;
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t i = 0; i < n_inst; ++i)
    if (pending[i] == 0)
      frontier.push_back(i);
  std::size_t placed = 0;
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t i : frontier) {
      sched.order.push_back(i);
      ++placed;
      for (std::uint32_t c : consumers[i])
        if (--pending[c] == 0)
          next.push_back(c);
    }
    sched.levels.push_back(std::move(frontier));
    frontier = std::move(next);
  }
  if (placed != n_inst) {
    for (std::uint32_t i = 0; i < n_inst; ++i)
      if (pending[i] != 0)
        raise(errc::combinational_cycle, "instance '" + nl.instances[i].id + "' sits on a cycle");
  }
  return sched;
}

std::vector<net_id> instantiate(netlist& parent, const netlist& sub, std::string_view inst_name,
                                std::string_view tag, const std::vector<net_id>& inputs) {
  if (inputs.size() != sub.primary_inputs.size())
    raise(errc::width_mismatch, std::string(inst_name) + ": expected " +
                                    std::to_string(sub.primary_inputs.size()) + " inputs, got " +
                                    std::to_string(inputs.size()));
  const std::string prefix = std::string(inst_name) + ".";
  std::unordered_map<net_id, net_id> remap;
  remap[netlist::low_net] = netlist::low_net;
  remap[netlist::high_net] = netlist::high_net;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    remap[sub.primary_inputs[i]] = inputs[i];

  auto mapped = [&](net_id id) {
    auto it = remap.find(id);
    if (it != remap.end())
      return it->second;
    const net_id fresh = parent.add_net(prefix + sub.net_name(id));
    remap.emplace(id, fresh);
    return fresh;
  };

  for (const cell_instance& inst : sub.instances) {
    cell_instance copy = inst;
    copy.id = prefix + inst.id;
    for (net_id& in : copy.inputs)
      in = mapped(in);
    copy.output = mapped(copy.output);
    parent.instances.push_back(std::move(copy));
  }
  std::vector<net_id> outputs;
  outputs.reserve(sub.primary_outputs.size());
  for (net_id out : sub.primary_outputs)
    outputs.push_back(mapped(out));
  parent.blocks.push_back(block{std::string(tag), sub.blocks});
  return outputs;
}

} // namespace mtl
