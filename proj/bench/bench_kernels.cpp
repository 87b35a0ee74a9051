// Timing comparison of the OpenMP kernels against their serial reference
// implementations, plus a bitwise-agreement check. The parallel variants
// compute independent per-state / per-pair terms and reduce in index order,
// so the two paths must agree exactly, not just to tolerance.
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "eof/gradient.hpp"
#include "eof/rng.hpp"
#include "eof/states.hpp"

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
#endif
}

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    f();
    const double dt = now() - t0;
    if (dt < best) best = dt;
  }
  return best;
}

eof::Decomposition random_decomposition(const eof::BipartiteDims& dims, int rank,
                                        std::uint64_t seed) {
  const eof::DensityMatrix rho = eof::random_density_matrix(dims, rank, seed);
  eof::Decomposition dec = eof::eigenstate_decomposition(rho);
  std::mt19937_64 rng(eof::derive_seed(seed, 1));
  const eof::Matrix u =
      eof::unitary_from_generator(eof::random_hermitian(dec.size(), rng));
  return eof::apply_unitary(dec, u);
}

void bench_case(const char* label, const eof::BipartiteDims& dims, int rank, int reps) {
  const eof::Decomposition dec = random_decomposition(dims, rank, 42);

  volatile double sink = 0.0;
  const double t_av_serial =
      best_of(reps, [&] { sink = eof::average_entanglement_serial(dec); });
  const double t_av_parallel =
      best_of(reps, [&] { sink = eof::average_entanglement(dec); });
  const double e_serial = eof::average_entanglement_serial(dec);
  const double e_parallel = eof::average_entanglement(dec);

  eof::GradientMatrix g_serial, g_parallel;
  const double t_g_serial = best_of(reps, [&] { g_serial = eof::gradient_matrix_serial(dec); });
  const double t_g_parallel = best_of(reps, [&] { g_parallel = eof::gradient_matrix(dec); });
  const double g_diff = (g_serial - g_parallel).cwiseAbs().maxCoeff();

  std::printf("%-22s n=%2d  avg_E: serial %8.3f us  omp %8.3f us  x%.2f  bitwise %s\n",
              label, dec.size(), t_av_serial * 1e6, t_av_parallel * 1e6,
              t_av_serial / t_av_parallel, e_serial == e_parallel ? "yes" : "NO");
  std::printf("%-22s n=%2d  grad : serial %8.3f us  omp %8.3f us  x%.2f  bitwise %s\n",
              label, dec.size(), t_g_serial * 1e6, t_g_parallel * 1e6,
              t_g_serial / t_g_parallel, g_diff == 0.0 ? "yes" : "NO");
  (void)sink;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run serial code\n");
#endif
  bench_case("two qubits, rank 4", eof::BipartiteDims(2, 2), 4, 2000);
  bench_case("two qutrits, rank 9", eof::BipartiteDims(3, 3), 9, 1000);
  bench_case("4x4, rank 16", eof::BipartiteDims(4, 4), 16, 200);
  bench_case("5x5, rank 25", eof::BipartiteDims(5, 5), 25, 100);
  return 0;
}
