// Timing harness for the O(n^2) kernels: OpenMP path against the serial
// reference, plus the O(n) convolution scan against direct quadrature.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evostab/evolution.hpp"
#include "evostab/green.hpp"
#include "evostab/mild.hpp"
#include "evostab/models.hpp"
#include "evostab/stability.hpp"

using namespace evostab;

namespace {

double seconds_of(auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
    const Grid grid(0.0, 10.0 / static_cast<double>(n - 1), n);
    const EvolutionFamily F = scalar_exponential_family(1.0);
    const SampledSignal f = band_limited_signal(grid, 1, 42);

#ifdef _OPENMP
    std::printf("OpenMP threads: %d, n = %zu\n", omp_get_max_threads(), n);
#else
    std::printf("built without OpenMP, n = %zu\n", n);
#endif

    SampledSignal g_par = f, g_ser = f, h_scan = f, h_dir = f;
    const double t_green_par = seconds_of([&] { g_par = green_apply(F, f, true); });
    const double t_green_ser = seconds_of([&] { g_ser = green_apply_serial(F, f); });
    std::printf("green transform   parallel %8.4f s   serial %8.4f s   agree %.3e\n",
                t_green_par, t_green_ser, max_node_distance(g_par, g_ser));

    SampledSignal habs = f;
    for (auto& v : habs.raw()) v = v * v;
    const double t_conv_scan = seconds_of([&] { h_scan = exp_convolve(habs, 1.0); });
    const double t_conv_dir = seconds_of([&] { h_dir = exp_convolve_direct(habs, 1.0, true); });
    std::printf("exp convolution   scan     %8.4f s   direct %8.4f s   agree %.3e\n",
                t_conv_scan, t_conv_dir, max_node_distance(h_scan, h_dir));

    const Nonlinearity reaction = forcing_term([](double t) { return State{std::exp(-t)}; }, 1);
    std::vector<State> in(grid.n, State{0.0}), out_par, out_ser;
    double t_sweep_par = 0.0, t_sweep_ser = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        t_sweep_par += seconds_of([&] { mild_shift_sweep(F, reaction, grid, in, out_par, 1, true); });
        t_sweep_ser += seconds_of([&] { mild_shift_sweep(F, reaction, grid, in, out_ser, 1, false); });
    }
    double agree = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i)
        agree = std::max(agree, distance(out_par[i], out_ser[i]));
    std::printf("mild shift sweep  parallel %8.4f s   serial %8.4f s   agree %.3e (50 sweeps)\n",
                t_sweep_par, t_sweep_ser, agree);
    return 0;
}
