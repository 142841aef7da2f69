#include "mtl/synth.hpp"

#include <bit>

namespace mtl::synth {

const char* to_string(gate_kind k) {
  switch (k) {
  case gate_kind::not_g: return "not";
  case gate_kind::nor_g: return "nor";
  case gate_kind::nand_g: return "nand";
  case gate_kind::or_g: return "or";
  case gate_kind::and_g: return "and";
  case gate_kind::xor_g: return "xor";
  }
  return "?";
}

std::vector<net_id> builder::input_bus(const std::string& stem, int width) {
  std::vector<net_id> bus;
  bus.reserve(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i)
    bus.push_back(input(stem + std::to_string(i)));
  return bus;
}

void builder::expose(net_id id, std::string port) {
  if (id == netlist::low_net || id == netlist::high_net) {
    // Constants keep their names; route through a net the port can own.
    const net_id alias = inv(inv(id));
    nl_.nets[alias].name = std::move(port);
    nl_.mark_output(alias);
    return;
  }
  nl_.nets[id].name = std::move(port);
  nl_.mark_output(id);
}

void builder::expose_bus(const std::vector<net_id>& ids, const std::string& stem) {
  for (std::size_t i = 0; i < ids.size(); ++i)
    expose(ids[i], stem + std::to_string(i));
}

net_id builder::fresh() { return nl_.add_net("n" + std::to_string(next_net_++)); }

net_id builder::cell(cell_fn fn, const std::vector<net_id>& ins) {
  const int fan_in = static_cast<int>(ins.size());
  // Only gates above two inputs get the op-amp; at two and below the inverter
  // alone holds the threshold.
  const bool opamp = fan_in > 2;
  threshold_cell c = make_cell(fn, fan_in, policy_, levels_, opamp);
  const net_id out = fresh();
  nl_.instances.push_back(
      cell_instance{"u" + std::to_string(next_inst_++), instance_kind::cell, std::move(c), ins, out});
  return out;
}

net_id builder::nor_cell(const std::vector<net_id>& ins) { return cell(cell_fn::nor_fn, ins); }
net_id builder::nand_cell(const std::vector<net_id>& ins) { return cell(cell_fn::nand_fn, ins); }
net_id builder::not_cell(net_id in) { return cell(cell_fn::nor_fn, {in}); }

net_id builder::inv(net_id in) {
  threshold_cell c;
  c.kind = cell_fn::nor_fn;
  c.fan_in = 1;
  c.v_ref = levels_.midpoint();
  c.has_opamp = false;
  const net_id out = fresh();
  nl_.instances.push_back(cell_instance{"u" + std::to_string(next_inst_++),
                                        instance_kind::inverter, std::move(c), {in}, out});
  return out;
}

net_id builder::xor_gate(net_id a, net_id b) {
  const net_id neither = nor_cell({a, b});
  const net_id both = and_gate({a, b});
  return nor_cell({neither, both});
}

netlist gate(gate_kind kind, int fan_in, const vref_policy& policy, const voltage_levels& levels) {
  if (fan_in < 1 || fan_in > policy.n_max || (kind == gate_kind::xor_g && fan_in != 2) ||
      (kind == gate_kind::not_g && fan_in != 1))
    raise(errc::unsupported_fan_in,
          std::string(to_string(kind)) + " at fan-in " + std::to_string(fan_in));
  builder b(std::string(to_string(kind)) + std::to_string(fan_in), policy, levels);
  std::vector<net_id> ins;
  for (int i = 0; i < fan_in; ++i)
    ins.push_back(b.input("I" + std::to_string(i)));
  net_id out = 0;
  switch (kind) {
  case gate_kind::not_g: out = b.not_cell(ins[0]); break;
  case gate_kind::nor_g: out = b.nor_cell(ins); break;
  case gate_kind::nand_g: out = b.nand_cell(ins); break;
  case gate_kind::or_g: out = b.or_gate(ins); break;
  case gate_kind::and_g: out = b.and_gate(ins); break;
  case gate_kind::xor_g: out = b.xor_gate(ins[0], ins[1]); break;
  }
  b.expose(out, "Y");
  return b.take();
}

netlist single_cell(const threshold_cell& cell, const std::string& name) {
  netlist nl(name);
  std::vector<net_id> ins;
  for (int i = 0; i < cell.fan_in; ++i)
    ins.push_back(nl.add_input("I" + std::to_string(i)));
  const net_id out = nl.add_net("Y");
  nl.instances.push_back(cell_instance{"u0", instance_kind::cell, cell, std::move(ins), out});
  nl.mark_output(out);
  return nl;
}

netlist half_adder(const vref_policy& policy, const voltage_levels& levels) {
  builder b("half_adder", policy, levels);
  const net_id a = b.input("a");
  const net_id c = b.input("b");
  b.expose(b.xor_gate(a, c), "sum");
  b.expose(b.and_gate({a, c}), "carry");
  return b.take();
}

netlist full_adder(const vref_policy& policy, const voltage_levels& levels) {
  builder b("full_adder", policy, levels);
  const net_id a = b.input("a");
  const net_id c = b.input("b");
  const net_id cin = b.input("cin");
  const net_id x = b.xor_gate(a, c);
  b.expose(b.xor_gate(x, cin), "sum");
  b.expose(b.or_gate({b.and_gate({a, c}), b.and_gate({x, cin})}), "cout");
  return b.take();
}

netlist cla(int width, const vref_policy& policy, const voltage_levels& levels) {
  if (width < 1)
    raise(errc::invalid_width, "cla width " + std::to_string(width));
  builder b("cla" + std::to_string(width), policy, levels);
  const std::vector<net_id> a = b.input_bus("A", width);
  const std::vector<net_id> bb = b.input_bus("B", width);
  const net_id c0 = b.input("C0");

  std::vector<net_id> gen(static_cast<std::size_t>(width));
  std::vector<net_id> prop(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) {
    gen[i] = b.and_gate({a[i], bb[i]});
    prop[i] = b.xor_gate(a[i], bb[i]);
  }

  // carry[i] enters bit i; lookahead within 4-bit groups, groups chained.
  std::vector<net_id> carry(static_cast<std::size_t>(width) + 1);
  carry[0] = c0;
  for (int base = 0; base < width; base += 4) {
    const int m = std::min(4, width - base);
    const net_id group_cin = carry[base];
    for (int j = 1; j <= m; ++j) {
      std::vector<net_id> terms;
      terms.push_back(gen[base + j - 1]);
      for (int t = 1; t < j; ++t) {
        std::vector<net_id> factors;
        for (int k = 0; k < t; ++k)
          factors.push_back(prop[base + j - 1 - k]);
        factors.push_back(gen[base + j - 1 - t]);
        terms.push_back(b.and_gate(factors));
      }
      std::vector<net_id> full;
      for (int k = base + j - 1; k >= base; --k)
        full.push_back(prop[k]);
      full.push_back(group_cin);
      terms.push_back(b.and_gate(full));
      carry[base + j] = b.or_gate(terms);
    }
  }

  std::vector<net_id> sum(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i)
    sum[i] = b.xor_gate(prop[i], carry[i]);
  b.expose_bus(sum, "S");
  b.expose(carry[width], "Cout");
  return b.take();
}

netlist complement_unit(int width, const vref_policy& policy, const voltage_levels& levels) {
  if (width < 1)
    raise(errc::invalid_width, "complement width " + std::to_string(width));
  builder b("complement" + std::to_string(width), policy, levels);
  const std::vector<net_id> a = b.input_bus("A", width);
  std::vector<net_id> y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    y[i] = b.not_cell(a[i]);
  b.expose_bus(y, "Y");
  return b.take();
}

netlist vedic2(const vref_policy& policy, const voltage_levels& levels) {
  builder b("vedic2", policy, levels);
  const std::vector<net_id> a = b.input_bus("A", 2);
  const std::vector<net_id> bb = b.input_bus("B", 2);
  const netlist ha = half_adder(policy, levels);

  const net_id s0 = b.and_gate({a[0], bb[0]});
  const net_id p_a1b0 = b.and_gate({a[1], bb[0]});
  const net_id p_a0b1 = b.and_gate({a[0], bb[1]});
  const net_id p_a1b1 = b.and_gate({a[1], bb[1]});
  const std::vector<net_id> ha1 = b.instantiate_sub(ha, "ha1", "half_adder", {p_a1b0, p_a0b1});
  const std::vector<net_id> ha2 = b.instantiate_sub(ha, "ha2", "half_adder", {p_a1b1, ha1[1]});

  b.expose(s0, "S0");
  b.expose(ha1[0], "S1");
  b.expose(ha2[0], "S2");
  b.expose(ha2[1], "S3");
  return b.take();
}

netlist vedic(int width, const vref_policy& policy, const voltage_levels& levels) {
  if (width < 2)
    raise(errc::width_too_small, "vedic width " + std::to_string(width));
  if (!std::has_single_bit(static_cast<unsigned>(width)))
    raise(errc::not_power_of_two, "vedic width " + std::to_string(width));
  if (width == 2)
    return vedic2(policy, levels);

  const int h = width / 2;
  const netlist sub = vedic(h, policy, levels);
  const netlist adder_w = cla(width, policy, levels);
  const netlist adder_h = cla(h, policy, levels);
  const netlist ha = half_adder(policy, levels);
  const std::string sub_tag = "vedic:" + std::to_string(h);
  const std::string cla_w_tag = "cla:" + std::to_string(width);
  const std::string cla_h_tag = "cla:" + std::to_string(h);

  builder b("vedic" + std::to_string(width), policy, levels);
  const std::vector<net_id> a = b.input_bus("A", width);
  const std::vector<net_id> bbus = b.input_bus("B", width);
  auto slice = [](const std::vector<net_id>& v, int from, int count) {
    return std::vector<net_id>(v.begin() + from, v.begin() + from + count);
  };
  auto concat = [](std::vector<net_id> lhs, const std::vector<net_id>& rhs) {
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    return lhs;
  };

  const std::vector<net_id> a_lo = slice(a, 0, h), a_hi = slice(a, h, h);
  const std::vector<net_id> b_lo = slice(bbus, 0, h), b_hi = slice(bbus, h, h);

  // Four independent partial products, each 2h = width bits wide.
  const std::vector<net_id> ll = b.instantiate_sub(sub, "ll", sub_tag, concat(a_lo, b_lo));
  const std::vector<net_id> hl = b.instantiate_sub(sub, "hl", sub_tag, concat(a_hi, b_lo));
  const std::vector<net_id> lh = b.instantiate_sub(sub, "lh", sub_tag, concat(a_lo, b_hi));
  const std::vector<net_id> hh = b.instantiate_sub(sub, "hh", sub_tag, concat(a_hi, b_hi));

  // CLA#1: HL + LH.
  std::vector<net_id> cla1_in = concat(concat(slice(hl, 0, width), slice(lh, 0, width)), {b.low()});
  const std::vector<net_id> t_sum = b.instantiate_sub(adder_w, "mid", cla_w_tag, cla1_in);
  const std::vector<net_id> t_bits = slice(t_sum, 0, width);
  const net_id t_carry = t_sum[static_cast<std::size_t>(width)];

  // CLA#2: T + (HH.lo || LL.hi), aligned at bit h of the product.
  const std::vector<net_id> shifted = concat(slice(ll, h, h), slice(hh, 0, h));
  std::vector<net_id> cla2_in = concat(concat(t_bits, shifted), {b.low()});
  const std::vector<net_id> u_sum = b.instantiate_sub(adder_w, "acc", cla_w_tag, cla2_in);
  const std::vector<net_id> u_bits = slice(u_sum, 0, width);
  const net_id u_carry = u_sum[static_cast<std::size_t>(width)];

  // Half adder folds the two carries; CLA#3 lifts them into HH.hi. The
  // product bound keeps HH.hi + t + u inside h bits, so its carry out is dead.
  const std::vector<net_id> tc = b.instantiate_sub(ha, "carries", "half_adder", {t_carry, u_carry});
  std::vector<net_id> top_addend = {tc[0], tc[1]};
  while (static_cast<int>(top_addend.size()) < h)
    top_addend.push_back(b.low());
  std::vector<net_id> cla3_in = concat(concat(slice(hh, h, h), top_addend), {b.low()});
  const std::vector<net_id> top = b.instantiate_sub(adder_h, "top", cla_h_tag, cla3_in);

  std::vector<net_id> product;
  product.reserve(static_cast<std::size_t>(2 * width));
  for (int i = 0; i < h; ++i)
    product.push_back(ll[i]);
  for (int i = 0; i < width; ++i)
    product.push_back(u_bits[i]);
  for (int i = 0; i < h; ++i)
    product.push_back(top[i]);
  b.expose_bus(product, "P");
  return b.take();
}

} // namespace mtl::synth
