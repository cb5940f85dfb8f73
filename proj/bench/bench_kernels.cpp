// Serial reference kernels against their OpenMP versions on synthetic data.
//
//   ./build/bench/aakmer_bench --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include "aakmer/assoc_array.hpp"
#include "aakmer/kernels.hpp"
#include "aakmer/simgen.hpp"

namespace {

using namespace aakmer;

struct Fixture {
  std::vector<seqio::Read> reads;
  AssocArray sample;
  AssocArray reference;
  kernels::InvertedIndex index;

  Fixture() {
    const kmer::KmerCodec codec;
    reference = from_reads(simgen::synth_genome("ref", "ref", 2'000'000, 1), codec);
    const std::vector<simgen::Source> sources{
        {"ref", simgen::synth_genome("ref", "ref", 2'000'000, 1), 20'000, 0.01}};
    reads = simgen::generate(sources, 200, 2).reads;
    sample = from_reads(reads, codec);
    index = kernels::InvertedIndex::build(reference);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_multiply_serial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    MatchMatrix out;
    kernels::multiply_rows_serial(f.sample, f.index, f.reference.num_rows(), Weighting::binary, out);
    benchmark::DoNotOptimize(out.comparisons);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.sample.num_rows()));
}

void BM_multiply_parallel(benchmark::State& state) {
  const Fixture& f = fixture();
  kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    MatchMatrix out;
    kernels::multiply_rows(f.sample, f.index, f.reference.num_rows(), Weighting::binary, out);
    benchmark::DoNotOptimize(out.comparisons);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.sample.num_rows()));
}

void BM_read_rows_serial(benchmark::State& state) {
  const Fixture& f = fixture();
  const kmer::KmerCodec codec;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::read_rows_serial(f.reads, codec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.reads.size()));
}

void BM_read_rows_parallel(benchmark::State& state) {
  const Fixture& f = fixture();
  const kmer::KmerCodec codec;
  kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::read_rows(f.reads, codec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.reads.size()));
}

}  // namespace

BENCHMARK(BM_multiply_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_multiply_parallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_read_rows_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_read_rows_parallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
