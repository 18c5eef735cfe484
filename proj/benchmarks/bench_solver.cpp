#include <benchmark/benchmark.h>

#include "fpp/solver.hpp"

namespace {

const fpp::DistributionSchedule kUniform = fpp::DistributionSchedule::constant(
    fpp::DistributionSpec::shifted_uniform(0.5, 1.5));

void BM_sample_field(benchmark::State& state) {
  const auto radius = static_cast<int32_t>(state.range(0));
  fpp::BoxGeometry geom(fpp::Box{2, radius});
  uint32_t rep = 0;
  for (auto _ : state) {
    auto field = fpp::sample_field(kUniform, geom, 42, rep++);
    benchmark::DoNotOptimize(field.weights.data());
  }
  state.SetItemsProcessed(state.iterations() * geom.edge_count());
}
BENCHMARK(BM_sample_field)->Arg(32)->Arg(128)->Arg(256);

void BM_shortest_time_field(benchmark::State& state) {
  const auto radius = static_cast<int32_t>(state.range(0));
  fpp::BoxGeometry geom(fpp::Box{2, radius});
  auto field = fpp::sample_field(kUniform, geom, 42, 0);
  for (auto _ : state) {
    auto dist = fpp::shortest_time_field(geom, field, fpp::axis_site(2, 0));
    benchmark::DoNotOptimize(dist.dist.data());
  }
  state.SetItemsProcessed(state.iterations() * geom.site_count());
}
BENCHMARK(BM_shortest_time_field)->Arg(32)->Arg(128)->Arg(256);

void BM_canonical_geodesic(benchmark::State& state) {
  const auto radius = static_cast<int32_t>(state.range(0));
  fpp::BoxGeometry geom(fpp::Box{2, radius});
  auto field = fpp::sample_field(kUniform, geom, 42, 0);
  const auto src = fpp::axis_site(2, 0);
  const auto dst = fpp::axis_site(2, radius / 2);
  for (auto _ : state) {
    auto geo = fpp::canonical_geodesic(geom, field, src, dst);
    benchmark::DoNotOptimize(geo.time);
  }
}
BENCHMARK(BM_canonical_geodesic)->Arg(32)->Arg(128);

void BM_edge_index(benchmark::State& state) {
  fpp::BoxGeometry geom(fpp::Box{2, 128});
  std::vector<int64_t> ns(4), es(4);
  int64_t site = 0;
  for (auto _ : state) {
    int deg = geom.neighbor_indices(site, ns.data(), es.data());
    benchmark::DoNotOptimize(deg);
    site = (site + 97) % geom.site_count();
  }
}
BENCHMARK(BM_edge_index);

}  // namespace

BENCHMARK_MAIN();
