#include <benchmark/benchmark.h>

#include <string>

#include "qtwist/coefficients.hpp"
#include "qtwist/config_io.hpp"
#include "qtwist/lvalue.hpp"
#include "qtwist/twist.hpp"
#include "qtwist/weight.hpp"

using namespace qtwist;

namespace {

const CurveConfig& curve_11a() {
  static const CurveConfig cfg = load_curve_config(std::string(QTWIST_DATA_DIR) + "/curves/11a.cfg");
  return cfg;
}

void BM_ApGood(benchmark::State& state) {
  const auto model = to_short_form(curve_11a());
  const auto p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ap_good(model, p));
}
BENCHMARK(BM_ApGood)->Arg(1009)->Arg(100003)->Arg(299993);

void BM_PointCountTable(benchmark::State& state) {
  AnTableOptions opts{.provider = Provider::point_count, .workers = 1};
  for (auto _ : state) benchmark::DoNotOptimize(an_table(curve_11a(), state.range(0), opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PointCountTable)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond);

void BM_EtaTable(benchmark::State& state) {
  AnTableOptions opts{.provider = Provider::eta, .workers = 1};
  for (auto _ : state) benchmark::DoNotOptimize(an_table(curve_11a(), state.range(0), opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EtaTable)->Arg(1 << 15)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

// L'(E_d,1) for one odd twist, the inner loop of a scan.
void BM_TwistDerivative(benchmark::State& state) {
  const auto& cfg = curve_11a();
  const std::int64_t d = state.range(0);
  const auto tw = make_twist(cfg, d);
  const auto M = terms_needed(tw.conductor, 1, 1e-4);
  const auto table = an_table(cfg, M, {.provider = Provider::eta});
  const auto chi = character_table(d, M);
  const SeriesInput in{table.view(), chi, tw.conductor};
  for (auto _ : state) benchmark::DoNotOptimize(l_derivative(in, 1, 1e-4));
  state.counters["terms"] = static_cast<double>(M);
}
BENCHMARK(BM_TwistDerivative)->Arg(-1007)->Arg(19997)->Arg(477121)->Unit(benchmark::kMillisecond);

void BM_WeightDirect(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_G(r, x));
    x = x < 40 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_WeightDirect)->DenseRange(0, 3);

// Sweeps the tabulated range, where almost every series term lands.
void BM_WeightTable(benchmark::State& state) {
  const auto& t = weight_table(static_cast<int>(state.range(0)));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t(x));
    x = x < 40 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_WeightTable)->DenseRange(0, 3);

}  // namespace

BENCHMARK_MAIN();
