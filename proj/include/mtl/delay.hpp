#pragma once

#include "mtl/errors.hpp"

namespace mtl {

/// Transistor-speed pairing (NMOS x PMOS) selecting the per-cell delay.
enum class corner { ss, ff, sf, fs };

/// Single-cell delay d1 per process corner, in nanoseconds. A chain of k
/// cells delays the signal by k * d1: depth is the only structural input.
struct delay_model {
  double d1_ss = 0.89;
  double d1_ff = 0.23;
  double d1_sf = 0.50;
  double d1_fs = 0.52;

  double d1(corner c) const {
    switch (c) {
    case corner::ss: return d1_ss;
    case corner::ff: return d1_ff;
    case corner::sf: return d1_sf;
    case corner::fs: return d1_fs;
    }
    raise(errc::schema_error, "bad corner");
  }
};

} // namespace mtl
