#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mtl/netlist.hpp"
#include "mtl/synth.hpp"

namespace mtl::fft {

/// Signs of the four operands an FFT unit combines.
struct sign_pattern {
  std::array<bool, 4> negate{}; // true = subtract this operand

  int negations() const {
    int n = 0;
    for (bool b : negate)
      n += b ? 1 : 0;
    return n;
  }
};

/// Two's-complement complex sample; both components live mod 2^width.
struct complex_word {
  std::uint64_t re = 0;
  std::uint64_t im = 0;

  bool operator==(const complex_word&) const = default;
};

struct fixed_point_format {
  int total_bits = 8;
  int frac_bits = 7;

  static fixed_point_format defaults(int width) { return {width, width - 1}; }
};

/// Twiddle magnitude round(2^frac_bits / sqrt(2)) used for the nontrivial
/// eighth roots of unity.
std::uint64_t twiddle_coefficient(const fixed_point_format& fmt);

/// (+/-a +/-b +/-c +/-d) mod 2^width out of three carry-lookahead adders:
/// positive operands fill CLA#1, complemented negative ones fill CLA#2, and
/// CLA#3 merges the partial sums. Two's-complement correction rides in on the
/// carry pins, one injected '1' per negated operand (CLA#2 first, then CLA#1,
/// then CLA#3), so two negations tie both input adders' C0 high.
/// Ports: in0_*..in3_*, S*, Cout.
netlist fft_unit(int width, const sign_pattern& signs, const vref_policy& policy = {},
                 const voltage_levels& levels = {});

/// 4-point DFT over two's-complement words; every twiddle is +/-1 or +/-j, so
/// the eight output components are eight fft_units fed by sign/component
/// routing. Ports x{n}_re_{b} / x{n}_im_{b} -> X{k}_re_{b} / X{k}_im_{b}.
netlist dft4(int width, const vref_policy& policy = {}, const voltage_levels& levels = {});

/// 8-point FFT, radix-2 decimation in time: dft4 blocks over the even and odd
/// samples, a twiddle stage, and butterfly combines. W8^0 and W8^2 are
/// sign/swap routing; W8^1 and W8^3 multiply by twiddle_coefficient(fmt) with
/// unsigned vedic cores wrapped in sign logic, then shift right by
/// fmt.frac_bits (truncating toward negative infinity, i.e. an arithmetic
/// shift of the two's-complement product).
netlist fft8(int width, const fixed_point_format& fmt, const vref_policy& policy = {},
             const voltage_levels& levels = {});

/// Direct-summation DFT oracle in exact trivial-twiddle arithmetic.
/// Supports 4 points (larger sizes need quantization).
std::vector<complex_word> reference_dft(std::span<const complex_word> inputs, int width);

/// Quantized oracle mirroring fft8's dataflow bit for bit: exact 4-point
/// sub-DFTs, the same coefficient, the same floor shift, the same modular
/// wrap. For 4 points quantization never fires and this equals exact mode.
std::vector<complex_word> reference_dft(std::span<const complex_word> inputs, int width,
                                        const fixed_point_format& fmt);

/// Helpers shared with tests: two's-complement interpretation mod 2^width.
std::int64_t to_signed(std::uint64_t value, int width);
std::uint64_t to_word(std::int64_t value, int width);

} // namespace mtl::fft
