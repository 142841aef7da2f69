#include "doctest.h"

#include <array>

#include "mtl/fftgen.hpp"
#include "mtl/sim.hpp"

#include "helpers.hpp"

using namespace mtl;
using namespace mtl::fft;

namespace {

const voltage_levels lv{};

struct word_ports {
  std::vector<std::size_t> bits;
};

word_ports find_ports(const netlist& nl, const std::string& stem, int width, bool outputs) {
  const auto& nets = outputs ? nl.primary_outputs : nl.primary_inputs;
  word_ports g;
  for (int b = 0; b < width; ++b) {
    const std::string want = stem + std::to_string(b);
    for (std::size_t i = 0; i < nets.size(); ++i)
      if (nl.net_name(nets[i]) == want) {
        g.bits.push_back(i);
        break;
      }
  }
  REQUIRE(g.bits.size() == static_cast<std::size_t>(width));
  return g;
}

void set_word(bit_row& row, const word_ports& g, std::uint64_t v) {
  for (std::size_t b = 0; b < g.bits.size(); ++b)
    row[g.bits[b]] = (v >> b) & 1;
}

std::uint64_t get_word(const bit_row& row, const word_ports& g) {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < g.bits.size(); ++b)
    v |= static_cast<std::uint64_t>(row[g.bits[b]]) << b;
  return v;
}

// Position-independent harness around a dft4/fft8 netlist.
struct transform_harness {
  const netlist& nl;
  int width;
  int points;
  std::vector<word_ports> in_re, in_im, out_re, out_im;

  transform_harness(const netlist& n, int w, int p) : nl(n), width(w), points(p) {
    for (int k = 0; k < points; ++k) {
      in_re.push_back(find_ports(nl, "x" + std::to_string(k) + "_re_", width, false));
      in_im.push_back(find_ports(nl, "x" + std::to_string(k) + "_im_", width, false));
      out_re.push_back(find_ports(nl, "X" + std::to_string(k) + "_re_", width, true));
      out_im.push_back(find_ports(nl, "X" + std::to_string(k) + "_im_", width, true));
    }
  }

  bit_row pack(const std::vector<complex_word>& x) const {
    bit_row row(nl.primary_inputs.size(), 0);
    for (int k = 0; k < points; ++k) {
      set_word(row, in_re[k], x[k].re);
      set_word(row, in_im[k], x[k].im);
    }
    return row;
  }

  std::vector<complex_word> unpack(const bit_row& row) const {
    std::vector<complex_word> x(points);
    for (int k = 0; k < points; ++k)
      x[k] = {get_word(row, out_re[k]), get_word(row, out_im[k])};
    return x;
  }
};

} // namespace

TEST_CASE("two's-complement helpers") {
  CHECK(to_signed(0xFF, 8) == -1);
  CHECK(to_signed(0x80, 8) == -128);
  CHECK(to_signed(0x7F, 8) == 127);
  CHECK(to_word(-1, 8) == 0xFF);
  CHECK(to_word(-128, 8) == 0x80);
}

TEST_CASE("twiddle coefficient follows the formula") {
  CHECK(twiddle_coefficient({8, 7}) == 91);   // round(128/sqrt(2))
  CHECK(twiddle_coefficient({8, 8}) == 181);  // round(256/sqrt(2))
  CHECK(twiddle_coefficient({4, 3}) == 6);    // round(8/sqrt(2))
}

TEST_CASE("fft unit spot values at width 8") {
  const std::uint64_t mask = 255;
  sign_pattern two_neg{{false, false, true, true}};
  const netlist nl = fft_unit(8, two_neg);
  word_ports in[4] = {find_ports(nl, "in0_", 8, false), find_ports(nl, "in1_", 8, false),
                      find_ports(nl, "in2_", 8, false), find_ports(nl, "in3_", 8, false)};
  const word_ports s = find_ports(nl, "S", 8, true);

  bit_row row(nl.primary_inputs.size(), 0);
  set_word(row, in[0], 10);
  set_word(row, in[1], 20);
  set_word(row, in[2], 3);
  set_word(row, in[3], 4);
  bit_rows rows{row};

  bit_row zero(nl.primary_inputs.size(), 0);
  rows.push_back(zero);
  const bit_rows out = simulate(nl, rows, lv);
  CHECK(get_word(out[0], s) == ((10 + 20 - 3 - 4) & mask));
  CHECK(get_word(out[1], s) == 0);

  const netlist all_pos = fft_unit(8, sign_pattern{});
  word_ports pin[4] = {find_ports(all_pos, "in0_", 8, false), find_ports(all_pos, "in1_", 8, false),
                       find_ports(all_pos, "in2_", 8, false), find_ports(all_pos, "in3_", 8, false)};
  bit_row prow(all_pos.primary_inputs.size(), 0);
  set_word(prow, pin[0], 5);
  set_word(prow, pin[1], 6);
  set_word(prow, pin[2], 7);
  set_word(prow, pin[3], 8);
  const bit_rows pout = simulate(all_pos, {prow}, lv);
  CHECK(get_word(pout[0], find_ports(all_pos, "S", 8, true)) == 26);
}

TEST_CASE("fft unit is exhaustive-correct at width 4 for two patterns") {
  for (const sign_pattern signs :
       {sign_pattern{}, sign_pattern{{true, false, true, false}}}) {
    const netlist nl = fft_unit(4, signs);
    word_ports in[4] = {find_ports(nl, "in0_", 4, false), find_ports(nl, "in1_", 4, false),
                        find_ports(nl, "in2_", 4, false), find_ports(nl, "in3_", 4, false)};
    const word_ports s = find_ports(nl, "S", 4, true);
    bit_rows rows;
    rows.reserve(1 << 16);
    for (std::uint32_t v = 0; v < (1u << 16); ++v) {
      bit_row row(nl.primary_inputs.size(), 0);
      for (int k = 0; k < 4; ++k)
        set_word(row, in[k], (v >> (4 * k)) & 15);
      rows.push_back(std::move(row));
    }
    const bit_rows out = simulate(nl, rows, lv);
    for (std::uint32_t v = 0; v < (1u << 16); ++v) {
      std::uint64_t want = 0;
      for (int k = 0; k < 4; ++k) {
        const std::uint64_t term = (v >> (4 * k)) & 15;
        want += signs.negate[k] ? (16 - term) & 15 : term;
      }
      REQUIRE(get_word(out[v], s) == (want & 15));
    }
  }
}

TEST_CASE("fft unit structure and errors") {
  const netlist nl = fft_unit(8, sign_pattern{{false, true, true, false}});
  CHECK(count_blocks(nl.blocks, "cla:8") == 3);
  CHECK(count_blocks(nl.blocks, "complement") == 2);
  CHECK_RAISES(errc::invalid_width, fft_unit(0, sign_pattern{}));
  CHECK_RAISES(errc::unsupported_sign_pattern,
               fft_unit(8, sign_pattern{{true, true, true, true}}));
}

TEST_CASE("reference dft basics") {
  std::vector<complex_word> delta{{1, 0}, {0, 0}, {0, 0}, {0, 0}};
  for (const complex_word& x : reference_dft(delta, 8))
    CHECK(x == complex_word{1, 0});

  std::vector<complex_word> dc{{3, 0}, {3, 0}, {3, 0}, {3, 0}};
  const auto spec = reference_dft(dc, 8);
  CHECK(spec[0] == complex_word{12, 0});
  for (int k = 1; k < 4; ++k)
    CHECK(spec[k] == complex_word{0, 0});

  // Linearity mod 2^8.
  rng_stream rng(8);
  for (int it = 0; it < 50; ++it) {
    std::vector<complex_word> a(4), b(4), sum(4);
    for (int i = 0; i < 4; ++i) {
      a[i] = {rng.next_u64() & 255, rng.next_u64() & 255};
      b[i] = {rng.next_u64() & 255, rng.next_u64() & 255};
      sum[i] = {(a[i].re + b[i].re) & 255, (a[i].im + b[i].im) & 255};
    }
    const auto fa = reference_dft(a, 8);
    const auto fb = reference_dft(b, 8);
    const auto fs = reference_dft(sum, 8);
    for (int k = 0; k < 4; ++k) {
      CHECK(fs[k].re == ((fa[k].re + fb[k].re) & 255));
      CHECK(fs[k].im == ((fa[k].im + fb[k].im) & 255));
    }
  }
}

TEST_CASE("dft4 netlist equals the exact oracle") {
  const netlist nl = dft4(8);
  const transform_harness h(nl, 8, 4);

  bit_rows rows;
  std::vector<std::vector<complex_word>> cases;
  cases.push_back({{1, 0}, {0, 0}, {0, 0}, {0, 0}});                 // delta
  cases.push_back({{5, 0}, {5, 0}, {5, 0}, {5, 0}});                 // dc
  rng_stream rng(9);
  for (int it = 0; it < 500; ++it) {
    std::vector<complex_word> x(4);
    for (auto& c : x)
      c = {rng.next_u64() & 255, rng.next_u64() & 255};
    cases.push_back(std::move(x));
  }
  for (const auto& c : cases)
    rows.push_back(h.pack(c));
  const bit_rows out = simulate(nl, rows, lv);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto want = reference_dft(cases[k], 8);
    REQUIRE(h.unpack(out[k]) == want);
  }
}

TEST_CASE("dft4 is linear through the netlist") {
  const netlist nl = dft4(8);
  const transform_harness h(nl, 8, 4);
  rng_stream rng(11);
  bit_rows rows;
  std::vector<std::vector<complex_word>> as, bs;
  for (int it = 0; it < 50; ++it) {
    std::vector<complex_word> a(4), b(4), sum(4);
    for (int i = 0; i < 4; ++i) {
      a[i] = {rng.next_u64() & 255, rng.next_u64() & 255};
      b[i] = {rng.next_u64() & 255, rng.next_u64() & 255};
      sum[i] = {(a[i].re + b[i].re) & 255, (a[i].im + b[i].im) & 255};
    }
    rows.push_back(h.pack(a));
    rows.push_back(h.pack(b));
    rows.push_back(h.pack(sum));
    as.push_back(std::move(a));
    bs.push_back(std::move(b));
  }
  const bit_rows out = simulate(nl, rows, lv);
  for (std::size_t it = 0; it < as.size(); ++it) {
    const auto fa = h.unpack(out[3 * it]);
    const auto fb = h.unpack(out[3 * it + 1]);
    const auto fs = h.unpack(out[3 * it + 2]);
    for (int k = 0; k < 4; ++k) {
      CHECK(fs[k].re == ((fa[k].re + fb[k].re) & 255));
      CHECK(fs[k].im == ((fa[k].im + fb[k].im) & 255));
    }
  }
}

TEST_CASE("dft4 structure counts") {
  const netlist nl = dft4(8);
  CHECK(count_blocks(nl.blocks, "fft_unit:8") == 8);
  CHECK(count_blocks_recursive(nl.blocks, "cla:8") == 24);
  CHECK_RAISES(errc::invalid_width, dft4(1));
}

TEST_CASE("quantized reference dft basics") {
  const fixed_point_format fmt = fixed_point_format::defaults(8);
  std::vector<complex_word> delta(8);
  delta[0] = {1, 0};
  for (const complex_word& x : reference_dft(delta, 8, fmt))
    CHECK(x == complex_word{1, 0});

  std::vector<complex_word> dc(8, complex_word{3, 0});
  const auto spec = reference_dft(dc, 8, fmt);
  CHECK(spec[0] == complex_word{24, 0});
  for (int k = 1; k < 8; ++k)
    CHECK(spec[k] == complex_word{0, 0});
}

TEST_CASE("fft8 netlist equals the quantized oracle bit for bit") {
  const int width = 8;
  const fixed_point_format fmt = fixed_point_format::defaults(width);
  const netlist nl = fft8(width, fmt);
  const transform_harness h(nl, width, 8);

  std::vector<std::vector<complex_word>> cases;
  {
    std::vector<complex_word> delta(8);
    delta[0] = {1, 0};
    cases.push_back(delta);
    cases.push_back(std::vector<complex_word>(8, complex_word{7, 0}));
  }
  rng_stream rng(10);
  for (int it = 0; it < 100; ++it) {
    std::vector<complex_word> x(8);
    for (auto& c : x)
      c = {rng.next_u64() & 255, rng.next_u64() & 255};
    cases.push_back(std::move(x));
  }
  bit_rows rows;
  for (const auto& c : cases)
    rows.push_back(h.pack(c));
  const bit_rows out = simulate(nl, rows, lv);
  for (std::size_t k = 0; k < cases.size(); ++k)
    REQUIRE(h.unpack(out[k]) == reference_dft(cases[k], width, fmt));
}

TEST_CASE("fft8 structure and errors") {
  const netlist nl = fft8(8, fixed_point_format::defaults(8));
  CHECK(count_blocks(nl.blocks, "dft4:8") == 2);
  CHECK(count_blocks(nl.blocks, "vedic:8") == 4); // two nontrivial twiddles, two products each
  CHECK_RAISES(errc::invalid_width, fft8(3, fixed_point_format::defaults(4)));
  CHECK_RAISES(errc::invalid_width, fft8(2, fixed_point_format::defaults(2)));
  CHECK_RAISES(errc::format_mismatch, fft8(8, {8, 8}));
}
