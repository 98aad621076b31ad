// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference against OpenMP kernels: correspondence search and
// Hausdorff distance on the synthetic cavity.

#include <benchmark/benchmark.h>

#include "ssmreg/correspondence.hpp"
#include "ssmreg/mesh_query.hpp"
#include "ssmreg/synthetic.hpp"
#include "ssmreg/visibility.hpp"

namespace {

using namespace ssmreg;

struct Scene {
  SyntheticCorpusSpec spec;
  ShapeCorpus corpus;
  std::vector<OrientedPoint> data;

  Scene() {
    spec.n_shapes = 2;
    corpus = generate_corpus(spec);
    const TriangleMesh& m = corpus.shapes[0];
    data = sample_visible_points(m, entrance_viewpoint(m, spec), 3000, 1);
    for (OrientedPoint& p : data) p.position += Vec3(0.4, -0.3, 0.8);
  }
};

const Scene& scene() {
  static const Scene s;
  return s;
}

void BM_MatchAll(benchmark::State& state) {
  const Scene& s = scene();
  const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  const MatchSurface surface(s.corpus.shapes[1], PositionNoise::from_sd(Vec3(1, 1, 2)).sigma_x);
  const KentParameters kent = kent_from_sd(30.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_all(s.data, surface, kent, {}, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.data.size()));
}
BENCHMARK(BM_MatchAll)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Hausdorff(benchmark::State& state) {
  const Scene& s = scene();
  const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hausdorff_distance(s.corpus.shapes[0], s.corpus.shapes[1], exec));
  }
}
BENCHMARK(BM_Hausdorff)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
