#include "mtl/netlist_json.hpp"

#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace mtl {

namespace {

const char* kind_string(const cell_instance& inst) {
  if (inst.kind == instance_kind::inverter)
    return "inv";
  return inst.cell.kind == cell_fn::nor_fn ? "nor" : "nand";
}

} // namespace

std::string netlist_to_json(const netlist& nl) {
  nlohmann::ordered_json j;
  j["name"] = nl.name;
  auto names = [&](const std::vector<net_id>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (net_id id : ids)
      out.push_back(nl.net_name(id));
    return out;
  };
  j["inputs"] = names(nl.primary_inputs);
  j["outputs"] = names(nl.primary_outputs);
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const cell_instance& inst : nl.instances) {
    nlohmann::ordered_json c;
    c["id"] = inst.id;
    c["kind"] = kind_string(inst);
    c["fan_in"] = inst.kind == instance_kind::inverter ? 1 : inst.cell.fan_in;
    c["v_ref"] = inst.cell.v_ref;
    c["has_opamp"] = inst.kind == instance_kind::inverter ? false : inst.cell.has_opamp;
    c["inputs"] = names(inst.inputs);
    c["output"] = nl.net_name(inst.output);
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

netlist netlist_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::schema_error, e.what());
  }
  try {
    if (!j.is_object() || !j.contains("inputs") || !j.contains("outputs") || !j.contains("cells"))
      raise(errc::schema_error, "netlist object needs inputs, outputs and cells");

    netlist nl(j.value("name", std::string{}));
    std::unordered_map<std::string, net_id> by_name{{"$low", netlist::low_net},
                                                    {"$high", netlist::high_net}};
    auto lookup = [&](const std::string& name, bool create) {
      auto it = by_name.find(name);
      if (it != by_name.end())
        return it->second;
      if (!create)
        raise(errc::schema_error, "unknown net '" + name + "'");
      const net_id id = nl.add_net(name);
      by_name.emplace(name, id);
      return id;
    };

    for (const auto& name : j.at("inputs")) {
      const std::string n = name.get<std::string>();
      if (by_name.count(n))
        raise(errc::schema_error, "duplicate input net '" + n + "'");
      const net_id id = nl.add_input(n);
      by_name.emplace(n, id);
    }
    for (const auto& cj : j.at("cells")) {
      cell_instance inst;
      inst.id = cj.at("id").get<std::string>();
      const std::string kind = cj.at("kind").get<std::string>();
      const int fan_in = cj.at("fan_in").get<int>();
      if (fan_in < 1)
        raise(errc::schema_error, "cell '" + inst.id + "' fan_in " + std::to_string(fan_in));
      inst.cell.fan_in = fan_in;
      inst.cell.v_ref = cj.at("v_ref").get<double>();
      inst.cell.has_opamp = cj.at("has_opamp").get<bool>();
      inst.cell.memristances = equal_memristances(fan_in);
      if (kind == "inv") {
        inst.kind = instance_kind::inverter;
        inst.cell.kind = cell_fn::nor_fn;
        inst.cell.has_opamp = false;
        if (fan_in != 1)
          raise(errc::schema_error, "inverter '" + inst.id + "' must have fan_in 1");
      } else if (kind == "nor" || kind == "nand") {
        inst.kind = instance_kind::cell;
        inst.cell.kind = kind == "nor" ? cell_fn::nor_fn : cell_fn::nand_fn;
      } else {
        raise(errc::schema_error, "cell '" + inst.id + "' has unknown kind '" + kind + "'");
      }
      const auto& ins = cj.at("inputs");
      if (static_cast<int>(ins.size()) != fan_in)
        raise(errc::schema_error, "cell '" + inst.id + "' lists " + std::to_string(ins.size()) +
                                      " inputs for fan_in " + std::to_string(fan_in));
      for (const auto& name : ins)
        inst.inputs.push_back(lookup(name.get<std::string>(), true));
      inst.output = lookup(cj.at("output").get<std::string>(), true);
      nl.instances.push_back(std::move(inst));
    }
    for (const auto& name : j.at("outputs"))
      nl.mark_output(lookup(name.get<std::string>(), false));

    validate_and_levelize(nl);
    return nl;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::schema_error, e.what());
  }
}

std::string netlist_to_dot(const netlist& nl) {
  std::ostringstream os;
  os << "digraph \"" << (nl.name.empty() ? "netlist" : nl.name) << "\" {\n";
  os << "  rankdir=LR;\n";
  for (net_id pi : nl.primary_inputs)
    os << "  \"" << nl.net_name(pi) << "\" [shape=triangle];\n";

  // Net -> producing node name ($low/$high and inputs are their own nodes).
  std::vector<std::string> producer(nl.nets.size());
  producer[netlist::low_net] = "$low";
  producer[netlist::high_net] = "$high";
  for (net_id pi : nl.primary_inputs)
    producer[pi] = nl.net_name(pi);
  for (const cell_instance& inst : nl.instances)
    producer[inst.output] = inst.id;

  bool low_used = false, high_used = false;
  for (const cell_instance& inst : nl.instances) {
    std::string label = inst.kind == instance_kind::inverter
                            ? "inv"
                            : std::string(inst.cell.kind == cell_fn::nor_fn ? "nor" : "nand") +
                                  std::to_string(inst.cell.fan_in) +
                                  (inst.cell.has_opamp ? "*" : "");
    os << "  \"" << inst.id << "\" [shape=box label=\"" << inst.id << "\\n" << label << "\"];\n";
    for (net_id in : inst.inputs) {
      low_used = low_used || in == netlist::low_net;
      high_used = high_used || in == netlist::high_net;
      os << "  \"" << producer[in] << "\" -> \"" << inst.id << "\" [label=\""
         << nl.net_name(in) << "\"];\n";
    }
  }
  if (low_used)
    os << "  \"$low\" [shape=point];\n";
  if (high_used)
    os << "  \"$high\" [shape=point];\n";
  for (net_id po : nl.primary_outputs) {
    os << "  \"out:" << nl.net_name(po) << "\" [shape=doublecircle label=\"" << nl.net_name(po)
       << "\"];\n";
    os << "  \"" << producer[po] << "\" -> \"out:" << nl.net_name(po) << "\";\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace mtl
