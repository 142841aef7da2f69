#include "mtl/fftgen.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace mtl::fft {

using synth::builder;

std::uint64_t twiddle_coefficient(const fixed_point_format& fmt) {
  return static_cast<std::uint64_t>(
      std::llround(std::ldexp(1.0, fmt.frac_bits) / std::sqrt(2.0)));
}

std::int64_t to_signed(std::uint64_t value, int width) {
  const std::uint64_t mask = width >= 64 ? ~0ULL : (1ULL << width) - 1;
  value &= mask;
  if (width < 64 && (value >> (width - 1)) & 1)
    return static_cast<std::int64_t>(value) - static_cast<std::int64_t>(1ULL << width);
  return static_cast<std::int64_t>(value);
}

std::uint64_t to_word(std::int64_t value, int width) {
  const std::uint64_t mask = width >= 64 ? ~0ULL : (1ULL << width) - 1;
  return static_cast<std::uint64_t>(value) & mask;
}

netlist fft_unit(int width, const sign_pattern& signs, const vref_policy& policy,
                 const voltage_levels& levels) {
  if (width < 1)
    raise(errc::invalid_width, "fft_unit width " + std::to_string(width));
  const int n_neg = signs.negations();
  if (n_neg > 3)
    raise(errc::unsupported_sign_pattern, "cannot inject four carries through three C0 pins");

  const netlist adder = synth::cla(width, policy, levels);
  const netlist compl_unit = synth::complement_unit(width, policy, levels);
  const std::string cla_tag = "cla:" + std::to_string(width);

  builder b("fft_unit" + std::to_string(width), policy, levels);
  std::vector<std::vector<net_id>> ins;
  for (int k = 0; k < 4; ++k)
    ins.push_back(b.input_bus("in" + std::to_string(k) + "_", width));

  // Positive operands first, complemented negative operands after them; the
  // (pos, pos | neg, neg) split across CLA#1/CLA#2 falls out of the ordering.
  std::vector<std::vector<net_id>> operands;
  for (int k = 0; k < 4; ++k)
    if (!signs.negate[k])
      operands.push_back(ins[k]);
  int n_compl = 0;
  for (int k = 0; k < 4; ++k)
    if (signs.negate[k])
      operands.push_back(b.instantiate_sub(compl_unit, "neg" + std::to_string(n_compl++),
                                           "complement", ins[k]));

  // One '1' per negated operand, spent on C0 pins in the order CLA#2, CLA#1,
  // CLA#3 (two negations therefore tie both input adders' C0 high).
  const net_id c0_cla2 = n_neg >= 1 ? b.high() : b.low();
  const net_id c0_cla1 = n_neg >= 2 ? b.high() : b.low();
  const net_id c0_cla3 = n_neg >= 3 ? b.high() : b.low();

  auto concat = [](std::vector<net_id> lhs, const std::vector<net_id>& rhs) {
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    return lhs;
  };
  std::vector<net_id> cla1_in = concat(concat(operands[0], operands[1]), {c0_cla1});
  const std::vector<net_id> sum1 = b.instantiate_sub(adder, "add1", cla_tag, cla1_in);
  std::vector<net_id> cla2_in = concat(concat(operands[2], operands[3]), {c0_cla2});
  const std::vector<net_id> sum2 = b.instantiate_sub(adder, "add2", cla_tag, cla2_in);

  std::vector<net_id> cla3_in;
  cla3_in.insert(cla3_in.end(), sum1.begin(), sum1.end() - 1);
  cla3_in.insert(cla3_in.end(), sum2.begin(), sum2.end() - 1);
  cla3_in.push_back(c0_cla3);
  const std::vector<net_id> total = b.instantiate_sub(adder, "add3", cla_tag, cla3_in);

  for (int i = 0; i < width; ++i)
    b.expose(total[static_cast<std::size_t>(i)], "S" + std::to_string(i));
  b.expose(total[static_cast<std::size_t>(width)], "Cout");
  return b.take();
}

namespace {

struct unit_plan {
  // Operand source: sample index, real or imaginary component, sign.
  struct tap {
    int n;
    bool imag;
    bool negate;
  };
  std::array<tap, 4> taps;
};

// Output component k_re/k_im as sums of input components, from
// X(k) = sum_n x(n) (-j)^{nk}.
unit_plan plan_for(int k, bool imag_part) {
  unit_plan plan{};
  for (int n = 0; n < 4; ++n) {
    switch ((n * k) % 4) {
    case 0: // * 1
      plan.taps[n] = {n, imag_part, false};
      break;
    case 1: // * (-j): re' = im, im' = -re
      plan.taps[n] = imag_part ? unit_plan::tap{n, false, true} : unit_plan::tap{n, true, false};
      break;
    case 2: // * (-1)
      plan.taps[n] = {n, imag_part, true};
      break;
    case 3: // * (+j): re' = -im, im' = re
      plan.taps[n] = imag_part ? unit_plan::tap{n, false, false} : unit_plan::tap{n, true, true};
      break;
    }
  }
  return plan;
}

} // namespace

netlist dft4(int width, const vref_policy& policy, const voltage_levels& levels) {
  if (width < 2)
    raise(errc::invalid_width, "dft4 width " + std::to_string(width));
  builder b("dft4_" + std::to_string(width), policy, levels);
  std::vector<std::vector<net_id>> re(4), im(4);
  for (int n = 0; n < 4; ++n) {
    re[n] = b.input_bus("x" + std::to_string(n) + "_re_", width);
    im[n] = b.input_bus("x" + std::to_string(n) + "_im_", width);
  }

  const std::string unit_tag = "fft_unit:" + std::to_string(width);
  for (int k = 0; k < 4; ++k) {
    for (int part = 0; part < 2; ++part) {
      const bool imag = part == 1;
      const unit_plan plan = plan_for(k, imag);
      sign_pattern signs;
      std::vector<net_id> unit_in;
      for (int n = 0; n < 4; ++n) {
        const auto& tap = plan.taps[n];
        signs.negate[static_cast<std::size_t>(n)] = tap.negate;
        const auto& bus = tap.imag ? im[tap.n] : re[tap.n];
        unit_in.insert(unit_in.end(), bus.begin(), bus.end());
      }
      const netlist unit = fft_unit(width, signs, policy, levels);
      const std::string out_name = "X" + std::to_string(k) + (imag ? "_im" : "_re");
      const std::vector<net_id> outs = b.instantiate_sub(unit, out_name, unit_tag, unit_in);
      for (int i = 0; i < width; ++i)
        b.expose(outs[static_cast<std::size_t>(i)], out_name + "_" + std::to_string(i));
      // outs[width] is the unit's carry out, exposed by the unit but unused here.
    }
  }
  return b.take();
}

namespace {

// Arithmetic blocks used by the twiddle and combine stages.
struct word_math {
  builder& b;
  const netlist adder;
  const netlist compl_unit;
  const std::string cla_tag;
  int width;
  int seq = 0;

  word_math(builder& bld, int w, const vref_policy& pol, const voltage_levels& lv)
      : b(bld), adder(synth::cla(w, pol, lv)), compl_unit(synth::complement_unit(w, pol, lv)),
        cla_tag("cla:" + std::to_string(w)), width(w) {}

  std::string next(const char* stem) { return std::string(stem) + std::to_string(seq++); }

  std::vector<net_id> add(const std::vector<net_id>& x, const std::vector<net_id>& y) {
    std::vector<net_id> in = x;
    in.insert(in.end(), y.begin(), y.end());
    in.push_back(b.low());
    auto out = b.instantiate_sub(adder, next("add"), cla_tag, in);
    out.pop_back(); // modular: drop the carry
    return out;
  }

  // x - y = x + ~y + 1.
  std::vector<net_id> sub(const std::vector<net_id>& x, const std::vector<net_id>& y) {
    const auto ny = b.instantiate_sub(compl_unit, next("not"), "complement", y);
    std::vector<net_id> in = x;
    in.insert(in.end(), ny.begin(), ny.end());
    in.push_back(b.high());
    auto out = b.instantiate_sub(adder, next("add"), cla_tag, in);
    out.pop_back();
    return out;
  }

  std::vector<net_id> negate(const std::vector<net_id>& y) {
    return sub(std::vector<net_id>(static_cast<std::size_t>(width), b.low()), y);
  }
};

} // namespace

netlist fft8(int width, const fixed_point_format& fmt, const vref_policy& policy,
             const voltage_levels& levels) {
  if (width < 4 || !std::has_single_bit(static_cast<unsigned>(width)))
    raise(errc::invalid_width, "fft8 width " + std::to_string(width));
  if (fmt.total_bits != width || fmt.frac_bits < 0 || fmt.frac_bits >= width)
    raise(errc::format_mismatch, "format " + std::to_string(fmt.total_bits) + "." +
                                     std::to_string(fmt.frac_bits) + " for width " +
                                     std::to_string(width));

  const std::uint64_t coeff = twiddle_coefficient(fmt);
  builder b("fft8_" + std::to_string(width), policy, levels);
  std::vector<std::vector<net_id>> xre(8), xim(8);
  for (int n = 0; n < 8; ++n) {
    xre[n] = b.input_bus("x" + std::to_string(n) + "_re_", width);
    xim[n] = b.input_bus("x" + std::to_string(n) + "_im_", width);
  }

  // Stage 1: exact 4-point DFTs over the even and odd samples.
  const netlist four = dft4(width, policy, levels);
  const std::string dft_tag = "dft4:" + std::to_string(width);
  auto gather = [&](std::array<int, 4> idx) {
    std::vector<net_id> in;
    for (int n : idx) {
      in.insert(in.end(), xre[n].begin(), xre[n].end());
      in.insert(in.end(), xim[n].begin(), xim[n].end());
    }
    return in;
  };
  const std::vector<net_id> even_out = b.instantiate_sub(four, "even", dft_tag, gather({0, 2, 4, 6}));
  const std::vector<net_id> odd_out = b.instantiate_sub(four, "odd", dft_tag, gather({1, 3, 5, 7}));
  auto component = [&](const std::vector<net_id>& flat, int k, bool imag) {
    const int base = (k * 2 + (imag ? 1 : 0)) * width;
    return std::vector<net_id>(flat.begin() + base, flat.begin() + base + width);
  };

  word_math math(b, width, policy, levels);
  const netlist mul = synth::vedic(width, policy, levels);
  const std::string mul_tag = "vedic:" + std::to_string(width);
  const netlist adder2w = synth::cla(2 * width, policy, levels);
  const std::string cla2w_tag = "cla:" + std::to_string(2 * width);
  int mul_seq = 0;

  // floor(v * coeff / 2^frac) mod 2^width: strip the sign, multiply the
  // magnitude, restore the sign over the double-width product, then slice.
  // The slice of the two's-complement product is exactly the arithmetic
  // right shift.
  auto scale_by_twiddle = [&](const std::vector<net_id>& v) {
    const net_id sign = v[static_cast<std::size_t>(width - 1)];
    std::vector<net_id> folded(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i)
      folded[i] = b.xor_gate(v[i], sign);
    std::vector<net_id> abs_in = folded;
    abs_in.insert(abs_in.end(), static_cast<std::size_t>(width), b.low());
    abs_in.push_back(sign);
    auto magnitude = b.instantiate_sub(math.adder, math.next("abs"), math.cla_tag, abs_in);
    magnitude.pop_back();

    std::vector<net_id> mul_in = magnitude;
    for (int i = 0; i < width; ++i)
      mul_in.push_back((coeff >> i) & 1 ? b.high() : b.low());
    const std::vector<net_id> product =
        b.instantiate_sub(mul, "twiddle_mul" + std::to_string(mul_seq++), mul_tag, mul_in);

    std::vector<net_id> refold(static_cast<std::size_t>(2 * width));
    for (int i = 0; i < 2 * width; ++i)
      refold[i] = b.xor_gate(product[i], sign);
    std::vector<net_id> fix_in = refold;
    fix_in.insert(fix_in.end(), static_cast<std::size_t>(2 * width), b.low());
    fix_in.push_back(sign);
    auto signed_product = b.instantiate_sub(adder2w, math.next("sgn"), cla2w_tag, fix_in);
    signed_product.pop_back();

    return std::vector<net_id>(signed_product.begin() + fmt.frac_bits,
                               signed_product.begin() + fmt.frac_bits + width);
  };

  // Stage 2: twiddles W8^k on the odd branch.
  std::array<std::vector<net_id>, 4> t_re, t_im;
  t_re[0] = component(odd_out, 0, false);
  t_im[0] = component(odd_out, 0, true);
  {
    const auto ta = scale_by_twiddle(component(odd_out, 1, false));
    const auto tb = scale_by_twiddle(component(odd_out, 1, true));
    t_re[1] = math.add(ta, tb);      // (1-j)/sqrt(2): re = (a+b)*c
    t_im[1] = math.sub(tb, ta);      //               im = (b-a)*c
  }
  t_re[2] = component(odd_out, 2, true);              // -j: re = b
  t_im[2] = math.negate(component(odd_out, 2, false)); //     im = -a
  {
    const auto ua = scale_by_twiddle(component(odd_out, 3, false));
    const auto ub = scale_by_twiddle(component(odd_out, 3, true));
    t_re[3] = math.sub(ub, ua);               // -(1+j)/sqrt(2): re = (b-a)*c
    t_im[3] = math.negate(math.add(ua, ub));  //                 im = -(a+b)*c
  }

  // Stage 3: butterflies X(k) = E(k) + T(k), X(k+4) = E(k) - T(k).
  for (int k = 0; k < 4; ++k) {
    const auto e_re = component(even_out, k, false);
    const auto e_im = component(even_out, k, true);
    const auto hi_re = math.add(e_re, t_re[k]);
    const auto hi_im = math.add(e_im, t_im[k]);
    const auto lo_re = math.sub(e_re, t_re[k]);
    const auto lo_im = math.sub(e_im, t_im[k]);
    auto expose_word = [&](const std::vector<net_id>& bits, int kk, const char* part) {
      for (int i = 0; i < width; ++i)
        b.expose(bits[static_cast<std::size_t>(i)],
                 "X" + std::to_string(kk) + part + std::to_string(i));
    };
    expose_word(hi_re, k, "_re_");
    expose_word(hi_im, k, "_im_");
    expose_word(lo_re, k + 4, "_re_");
    expose_word(lo_im, k + 4, "_im_");
  }
  return b.take();
}

std::vector<complex_word> reference_dft(std::span<const complex_word> inputs, int width) {
  if (inputs.size() != 4)
    raise(errc::invalid_width, "exact reference_dft supports 4 points, got " +
                                   std::to_string(inputs.size()));
  const std::uint64_t mask = (1ULL << width) - 1;
  std::vector<complex_word> out(4);
  for (int k = 0; k < 4; ++k) {
    std::uint64_t re = 0, im = 0;
    for (int n = 0; n < 4; ++n) {
      const std::uint64_t xr = inputs[n].re, xi = inputs[n].im;
      switch ((n * k) % 4) {
      case 0: re += xr; im += xi; break;                    // * 1
      case 1: re += xi; im += mask + 1 - (xr & mask); break; // * -j
      case 2: re += mask + 1 - (xr & mask); im += mask + 1 - (xi & mask); break;
      case 3: re += mask + 1 - (xi & mask); im += xr; break; // * +j
      }
    }
    out[k] = {re & mask, im & mask};
  }
  return out;
}

std::vector<complex_word> reference_dft(std::span<const complex_word> inputs, int width,
                                        const fixed_point_format& fmt) {
  if (inputs.size() == 4)
    return reference_dft(inputs, width);
  if (inputs.size() != 8)
    raise(errc::invalid_width, "quantized reference_dft supports 4 or 8 points, got " +
                                   std::to_string(inputs.size()));
  if (fmt.frac_bits < 0 || fmt.frac_bits >= width)
    raise(errc::format_mismatch, "frac_bits " + std::to_string(fmt.frac_bits));

  const std::uint64_t mask = (1ULL << width) - 1;
  const std::int64_t coeff = static_cast<std::int64_t>(twiddle_coefficient(fmt));
  auto fx = [&](std::uint64_t v) {
    const std::int64_t p = to_signed(v, width) * coeff;
    return static_cast<std::uint64_t>(p >> fmt.frac_bits) & mask; // floor shift
  };
  auto add = [&](std::uint64_t a, std::uint64_t b) { return (a + b) & mask; };
  auto sub = [&](std::uint64_t a, std::uint64_t b) { return (a + (mask + 1 - (b & mask))) & mask; };

  const std::array<complex_word, 4> even{inputs[0], inputs[2], inputs[4], inputs[6]};
  const std::array<complex_word, 4> odd{inputs[1], inputs[3], inputs[5], inputs[7]};
  const std::vector<complex_word> e = reference_dft(std::span<const complex_word>(even), width);
  const std::vector<complex_word> o = reference_dft(std::span<const complex_word>(odd), width);

  std::array<complex_word, 4> t;
  t[0] = o[0];
  t[1] = {add(fx(o[1].re), fx(o[1].im)), sub(fx(o[1].im), fx(o[1].re))};
  t[2] = {o[2].im, sub(0, o[2].re)};
  t[3] = {sub(fx(o[3].im), fx(o[3].re)), sub(0, add(fx(o[3].re), fx(o[3].im)))};

  std::vector<complex_word> out(8);
  for (int k = 0; k < 4; ++k) {
    out[k] = {add(e[k].re, t[k].re), add(e[k].im, t[k].im)};
    out[k + 4] = {sub(e[k].re, t[k].re), sub(e[k].im, t[k].im)};
  }
  return out;
}

} // namespace mtl::fft
