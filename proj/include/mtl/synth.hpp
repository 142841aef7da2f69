#pragma once

#include <string>
#include <vector>

#include "mtl/netlist.hpp"

namespace mtl::synth {

enum class gate_kind { not_g, nor_g, nand_g, or_g, and_g, xor_g };

const char* to_string(gate_kind k);

/// Single composite gate with the truth table of the named boolean function.
/// NOR/NAND map to one cell with the fixed-delta reference; OR/AND add a
/// restore inverter; XOR(a,b) = NOR(NOR(a,b), AND(a,b)) using four cells.
/// Generated cells take an op-amp exactly when fan-in exceeds 2.
netlist gate(gate_kind kind, int fan_in, const vref_policy& policy = {},
             const voltage_levels& levels = {});

/// Wraps one explicit cell as a netlist (ports I0..In-1 -> Y).
netlist single_cell(const threshold_cell& cell, const std::string& name = "cell");

/// a, b -> sum, carry.
netlist half_adder(const vref_policy& policy = {}, const voltage_levels& levels = {});

/// a, b, cin -> sum, cout.
netlist full_adder(const vref_policy& policy = {}, const voltage_levels& levels = {});

/// Carry-lookahead adder, A[width] + B[width] + C0 -> S[width], Cout.
/// Carries come from generate/propagate terms inside 4-bit groups with the
/// group carries chained, keeping every cell at fan-in 5 or below.
netlist cla(int width, const vref_policy& policy = {}, const voltage_levels& levels = {});

/// Bitwise NOT via width one-input cells, A[width] -> Y[width].
netlist complement_unit(int width, const vref_policy& policy = {},
                        const voltage_levels& levels = {});

/// 2x2 multiplier, A[2] x B[2] -> S[4]: one AND for the low bit plus two
/// half adders combining the cross partial products.
netlist vedic2(const vref_policy& policy = {}, const voltage_levels& levels = {});

/// N-bit vertical-and-crosswise multiplier, A[width] x B[width] -> P[2*width]
/// (S[4] for the 2-bit base). Recursively four width/2 multipliers, two
/// width-bit CLAs, one width/2-bit CLA and a half adder:
///
///   P       = LL + 2^h (HL + LH) + 2^{2h} HH               (h = width/2)
///   CLA#1   : HL + LH                    -> T, carry t
///   CLA#2   : T + (HH.lo || LL.hi)       -> mid bits of P, carry u
///   half add: t + u                      -> s, c
///   CLA#3   : HH.hi + (c||s)             -> top bits of P
///
/// The low half of LL passes straight through to P.
netlist vedic(int width, const vref_policy& policy = {}, const voltage_levels& levels = {});

/// Instance-construction helper shared by the generators in this and the fft
/// header. Appends gates to a netlist under construction and returns the
/// driven nets.
class builder {
public:
  builder(std::string name, const vref_policy& policy, const voltage_levels& levels)
      : nl_(std::move(name)), policy_(policy), levels_(levels) {}

  net_id input(std::string port) { return nl_.add_input(std::move(port)); }
  std::vector<net_id> input_bus(const std::string& stem, int width);

  /// Renames the net to the port name and marks it as a primary output.
  void expose(net_id id, std::string port);
  void expose_bus(const std::vector<net_id>& ids, const std::string& stem);

  net_id nor_cell(const std::vector<net_id>& ins);
  net_id nand_cell(const std::vector<net_id>& ins);
  net_id inv(net_id in); // restore inverter, not a threshold cell
  net_id not_cell(net_id in);
  net_id or_gate(const std::vector<net_id>& ins) { return inv(nor_cell(ins)); }
  net_id and_gate(const std::vector<net_id>& ins) { return inv(nand_cell(ins)); }
  net_id xor_gate(net_id a, net_id b);

  std::vector<net_id> instantiate_sub(const netlist& sub, std::string_view inst_name,
                                      std::string_view tag, const std::vector<net_id>& inputs) {
    return mtl::instantiate(nl_, sub, inst_name, tag, inputs);
  }

  net_id low() const { return netlist::low_net; }
  net_id high() const { return netlist::high_net; }
  const voltage_levels& levels() const { return levels_; }
  const vref_policy& policy() const { return policy_; }

  netlist take() { return std::move(nl_); }

private:
  net_id fresh();
  net_id cell(cell_fn fn, const std::vector<net_id>& ins);

  netlist nl_;
  vref_policy policy_;
  voltage_levels levels_;
  int next_net_ = 0;
  int next_inst_ = 0;
};

} // namespace mtl::synth
