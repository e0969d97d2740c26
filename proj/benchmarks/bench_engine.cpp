// Microbenchmarks for the exact solvers. Inputs are dense real polynomials
// so the timings reflect worst-case term counts at each size.

#include <benchmark/benchmark.h>

#include <vector>

#include "qf/aux_system.hpp"
#include "qf/block_system.hpp"
#include "qf/fischer.hpp"
#include "qf/model.hpp"

namespace {

qf::ModelManifold model_of_size(int n) {
  std::vector<mpq_class> lam;
  for (int l = 0; l < n; ++l) lam.emplace_back(1, l + 4);
  return qf::make_diagonal_model(lam);
}

qf::Poly dense_real(int n, int p) {
  qf::Poly out(n);
  for (const auto& e : qf::monomials_of_degree(n, p))
    out.add_term(e, qf::Scalar(1));
  return out;  // term set is conjugation symmetric, hence real valued
}

}  // namespace

static void BM_JointDecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const qf::ModelManifold m = model_of_size(n);
  const qf::Poly input = dense_real(n, p);
  for (auto _ : state)
    benchmark::DoNotOptimize(qf::fischer_decompose_joint(input, m));
}
BENCHMARK(BM_JointDecompose)->Args({1, 4})->Args({2, 5})->Args({3, 6});

static void BM_BlockAssemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const qf::ModelManifold m = model_of_size(n);
  qf::MultiIndex target(n, 0);
  target[0] = p;
  for (auto _ : state)
    benchmark::DoNotOptimize(qf::assemble_block_system(m, target));
}
BENCHMARK(BM_BlockAssemble)->Args({2, 5})->Args({3, 6});

static void BM_BlockApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const qf::ModelManifold m = model_of_size(n);
  qf::MultiIndex target(n, 0);
  target[0] = p;
  const qf::BlockSystem sys = qf::assemble_block_system(m, target);
  std::vector<qf::Scalar> x(sys.dim(), qf::Scalar(mpq_class(3, 7)));
  for (auto _ : state) benchmark::DoNotOptimize(sys.apply(x));
}
BENCHMARK(BM_BlockApply)->Args({2, 5})->Args({3, 6});

static void BM_NestedChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const qf::ModelManifold m = model_of_size(n);
  const qf::Poly input = dense_real(n, p);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qf::nested_chain(input, m, 0, qf::ChainFlavor::g_type));
}
BENCHMARK(BM_NestedChain)->Args({1, 6})->Args({2, 5});

static void BM_InvertibilityAudit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const qf::ModelManifold m = model_of_size(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(qf::verify_invertibility(m, p));
}
BENCHMARK(BM_InvertibilityAudit)->Args({1, 4})->Args({2, 4});

BENCHMARK_MAIN();
