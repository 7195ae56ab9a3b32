#include <benchmark/benchmark.h>

#include "wsg/galerkin.hpp"
#include "wsg/moments.hpp"

namespace {

void BM_BuildBasis(benchmark::State& state) {
  const auto degree = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wsg::build_basis(degree, wsg::TriangleWeight()));
}
BENCHMARK(BM_BuildBasis)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const auto degree = static_cast<unsigned>(state.range(0));
  const wsg::TriangleWeight w;
  const wsg::BasisSet basis = wsg::build_basis(degree, w);
  const wsg::QMatPoly2 phi = wsg::triangle_phi();
  for (auto _ : state) benchmark::DoNotOptimize(wsg::assemble(basis, phi, w));
}
BENCHMARK(BM_Assemble)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_SolveEig(benchmark::State& state) {
  const auto degree = static_cast<unsigned>(state.range(0));
  const wsg::TriangleWeight w;
  const wsg::GramSet gram = wsg::assemble(wsg::build_basis(degree, w), wsg::triangle_phi(), w);
  for (auto _ : state) benchmark::DoNotOptimize(wsg::solve_eig(gram, degree, wsg::EigPath::standard));
}
BENCHMARK(BM_SolveEig)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_GaussJacobi(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wsg::gauss_jacobi(n, 0.5, 1.5));
}
BENCHMARK(BM_GaussJacobi)->RangeMultiplier(2)->Range(4, 64);

void BM_MomentTable(benchmark::State& state) {
  const auto degree = static_cast<unsigned>(state.range(0));
  const wsg::TriangleWeight w(wsg::Rational(1, 2), wsg::Rational(-1, 3), 2);
  for (auto _ : state) benchmark::DoNotOptimize(wsg::MomentTable(w, degree));
}
BENCHMARK(BM_MomentTable)->RangeMultiplier(2)->Range(8, 64);

}  // namespace

BENCHMARK_MAIN();
