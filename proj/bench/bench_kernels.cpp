// Serial reference kernels against their OpenMP counterparts on the
// desk-scale phantom. Arg 0 selects serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "polsar/classifier.hpp"
#include "polsar/diffusion_reaction.hpp"
#include "polsar/experiment.hpp"
#include "polsar/phantom.hpp"
#include "polsar/weights.hpp"

using namespace polsar;

namespace {

struct Fixture {
  Phantom phantom;
  TrainedModel model;
  PrototypeSet protos;
  std::vector<TrainingClass> train;

  Fixture() {
    const auto spec = default_phantom_spec();
    phantom = generate_phantom(spec);
    const Split split = split_roi(phantom_roi(spec), 1);
    model = train_model(phantom.field, split, 4.0, false);
    protos = to_prototypes(model);
    train = training_set(phantom.field, split, model);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Diffusion(benchmark::State& state) {
  const auto& f = fixture();
  const EvolutionParams p;
  for (auto _ : state) {
    auto out = state.range(0) ? diffusion_step(f.phantom.field, p)
                              : serial::diffusion_step(f.phantom.field, p);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.phantom.field.size()));
}

void BM_Reaction(benchmark::State& state) {
  const auto& f = fixture();
  const PrototypeBank bank(f.protos, DistanceKind::KullbackLeibler, true);
  for (auto _ : state) {
    auto out = state.range(0) ? reaction_step(f.phantom.field, bank, 0.01)
                              : serial::reaction_step(f.phantom.field, bank, 0.01);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.phantom.field.size()));
}

void BM_Classify(benchmark::State& state) {
  const auto& f = fixture();
  const auto rule = static_cast<Rule>(state.range(1));
  for (auto _ : state) {
    auto out = state.range(0) ? classify_image(f.phantom.field, f.protos, rule)
                              : serial::classify_image(f.phantom.field, f.protos, rule);
    benchmark::DoNotOptimize(out);
  }
  state.SetLabel(std::string(to_string(rule)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.phantom.field.size()));
}

void BM_Energy(benchmark::State& state) {
  const auto& f = fixture();
  const DistanceTable table(f.train, DistanceKind::KullbackLeibler, 4.0);
  const std::vector<double> w{0.3, 0.3, 0.4};
  for (auto _ : state) {
    double e = state.range(0) ? energy(w, table, 1.0) : serial::energy(w, table, 1.0);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(table.rows()));
}

}  // namespace

BENCHMARK(BM_Diffusion)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reaction)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Classify)
    ->ArgNames({"parallel", "rule"})
    ->ArgsProduct({{0, 1},
                   {static_cast<long>(Rule::ML), static_cast<long>(Rule::HD),
                    static_cast<long>(Rule::KLOW)}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Energy)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
