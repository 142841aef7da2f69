// Timing comparison between the OpenMP simulation kernels and the serial
// reference implementations on representative workloads.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mtl/fftgen.hpp"
#include "mtl/sim.hpp"
#include "mtl/synth.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds(t0);
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  // Boolean simulation: exhaustive 8x8 multiply, 65536 vectors.
  {
    const mtl::netlist nl = mtl::synth::vedic(8);
    const mtl::bit_rows vectors = mtl::exhaustive_vectors(16);
    mtl::bit_rows out_par, out_ser;
    const double t_par = timed([&] { out_par = mtl::simulate(nl, vectors); });
    const double t_ser = timed([&] { out_ser = mtl::simulate_reference(nl, vectors); });
    std::printf("boolean vedic:8 x %zu vectors   parallel %.3fs  serial-ref %.3fs  speedup %.2fx  equal %s\n",
                vectors.size(), t_par, t_ser, t_ser / t_par, out_par == out_ser ? "yes" : "NO");
  }

  // Analog simulation with variability: dft4:8 over random vectors.
  {
    const mtl::netlist nl = mtl::fft::dft4(8);
    mtl::bit_rows bits = mtl::exhaustive_vectors(12);
    mtl::volt_rows vectors(bits.size(), mtl::volt_row(nl.primary_inputs.size(), 0.0));
    for (std::size_t v = 0; v < bits.size(); ++v)
      for (std::size_t i = 0; i < bits[v].size(); ++i)
        vectors[v][i] = bits[v][i] ? 1.0 : 0.0;
    const mtl::variability_spec spec{0.05, 0.05, 0.0, 42};
    const mtl::analog_config cfg{};
    mtl::analog_result r_par, r_ser;
    const double t_par = timed([&] { r_par = mtl::simulate_analog(nl, vectors, spec, cfg); });
    const double t_ser =
        timed([&] { r_ser = mtl::simulate_analog_reference(nl, vectors, spec, cfg); });
    std::printf("analog dft4:8 x %zu vectors     parallel %.3fs  serial-ref %.3fs  speedup %.2fx  equal %s\n",
                vectors.size(), t_par, t_ser, t_ser / t_par,
                r_par.logic == r_ser.logic && r_par.volts == r_ser.volts ? "yes" : "NO");
  }

  // Monte Carlo: 2e5 trials on a midwindow NOR cell.
  {
    const mtl::netlist nl = mtl::synth::single_cell(
        mtl::make_cell_at(mtl::cell_fn::nor_fn, 2, 0.25, {}, true), "nor2_mid");
    const mtl::bit_rows refs = mtl::exhaustive_vectors(2);
    const mtl::variability_spec spec{0.2, 0.1, 0.0, 7};
    mtl::monte_carlo_result m_par, m_ser;
    const double t_par = timed([&] { m_par = mtl::monte_carlo(nl, spec, 200000, refs, {}); });
    const double t_ser =
        timed([&] { m_ser = mtl::monte_carlo_reference(nl, spec, 200000, refs, {}); });
    std::printf("monte carlo 2e5 trials          parallel %.3fs  serial-ref %.3fs  speedup %.2fx  equal %s\n",
                t_par, t_ser, t_ser / t_par,
                m_par.errors == m_ser.errors ? "yes" : "NO");
  }
  return 0;
}
