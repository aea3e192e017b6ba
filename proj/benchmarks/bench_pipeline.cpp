#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "hdmole/model.hpp"
#include "hdmole/rng.hpp"
#include "hdmole/tokenizer.hpp"

using namespace hdmole;

namespace {

// Token sequences shaped like tokenized drug SMILES (~50 tokens).
std::vector<TokenSequence> synthetic_sequences(std::size_t count,
                                               std::size_t len,
                                               std::uint32_t vocab) {
  SplitMix64 gen(Seed{5});
  std::vector<TokenSequence> seqs(count);
  for (auto& seq : seqs) {
    for (std::size_t i = 0; i < len; ++i) {
      seq.push_back(static_cast<TokenId>(gen.next_below(vocab + 1)));
    }
  }
  return seqs;
}

std::vector<std::string> synthetic_corpus(std::size_t count) {
  SplitMix64 gen(Seed{6});
  const std::vector<std::string> alphabet{"C", "N", "O", "c", "1", "(", ")",
                                          "=", "Cl", "S"};
  std::vector<std::string> corpus;
  corpus.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::string smiles;
    const std::size_t len = 20 + gen.next_below(40);
    for (std::size_t i = 0; i < len; ++i) {
      smiles += alphabet[gen.next_below(alphabet.size())];
    }
    corpus.push_back(std::move(smiles));
  }
  return corpus;
}

}  // namespace

static void BM_EncodeSample(benchmark::State& state) {
  const std::size_t dim = 10000;
  const ItemMemory im = build_item_memory(1500, dim, Seed{1});
  const auto seqs = synthetic_sequences(64, 50, 1500);
  const auto gram = static_cast<Gram>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_sample(seqs[i++ % seqs.size()], im, gram));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EncodeSample)->Arg(1)->Arg(2)->Arg(3);

static void BM_RetrainEpoch(benchmark::State& state) {
  const std::size_t dim = 10000;
  const ItemMemory im = build_item_memory(200, dim, Seed{2});
  const auto seqs = synthetic_sequences(
      static_cast<std::size_t>(state.range(0)), 50, 200);
  std::vector<Hypervector> samples;
  std::vector<std::uint8_t> labels;
  SplitMix64 gen(Seed{3});
  for (const auto& seq : seqs) {
    samples.push_back(encode_sample(seq, im, Gram::kUnigram));
    labels.push_back(static_cast<std::uint8_t>(gen.next_below(2)));
  }
  labels[0] = 0;
  labels[1] = 1;
  AssociativeMemory am = train(samples, labels, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(retrain_epoch(am, samples, labels));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RetrainEpoch)->Arg(1600);

static void BM_PairEncodingTrain(benchmark::State& state) {
  const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pe_train(corpus, 500));
  }
}
BENCHMARK(BM_PairEncodingTrain)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ApplyMerges(benchmark::State& state) {
  const auto corpus = synthetic_corpus(400);
  const auto rules = pe_train(corpus, 500);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        apply_merges(atom_tokenize(corpus[i++ % corpus.size()]), rules));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ApplyMerges);
