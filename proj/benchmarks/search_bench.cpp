#include <benchmark/benchmark.h>

#include <random>

#include "serefind/search/index.hpp"
#include "serefind/search/ranking.hpp"
#include "serefind/search/tokenizer.hpp"

using namespace serefind;

namespace {

const std::vector<std::string>& words() {
  static const std::vector<std::string> w = {
      "bike", "lamp", "desk", "sofa", "guitar", "physics", "chair", "apartment", "sublet",
      "ticket", "concert", "calculus", "laptop", "monitor", "bookshelf", "kayak", "tent"};
  return w;
}

std::string phrase(std::mt19937_64& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += words()[rng() % words().size()] + " ";
  return s;
}

std::vector<market::Listing> corpus(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<market::Listing> out;
  for (std::size_t i = 0; i < n; ++i) {
    market::Listing l;
    l.listing_id = ListingId{"L" + std::to_string(10000000 + i)};
    l.owner_id = UserId{"U00000001"};
    l.network_id = "jhu";
    l.category = "books";
    l.title = phrase(rng, 4);
    l.description = phrase(rng, 20);
    l.tags = {words()[rng() % words().size()]};
    l.values["Title"] = schema::TextValue{l.title};
    l.location = GeoPoint{39.0 + (rng() % 1000) / 1000.0, -76.6};
    l.created_at = Timestamp{std::chrono::seconds(1704067200 - static_cast<long>(rng() % 5000000))};
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace

static void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto text = phrase(rng, 200);
  search::Tokenizer tok;
  for (auto _ : state) benchmark::DoNotOptimize(tok(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

static void BM_IndexUpsert(benchmark::State& state) {
  const auto docs = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    search::InvertedIndex index;
    for (const auto& l : docs) index.upsert(l);
    benchmark::DoNotOptimize(index.snapshot());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexUpsert)->Arg(1000)->Arg(10000);

static void BM_Rank(benchmark::State& state) {
  const auto docs = corpus(static_cast<std::size_t>(state.range(0)));
  search::InvertedIndex index;
  for (const auto& l : docs) index.upsert(l);
  const auto snap = index.snapshot();
  search::Ranker ranker;
  search::SearchQuery q;
  q.terms = {"bike lamp calculus"};
  q.origin = GeoPoint{39.29, -76.61};
  const auto now = Timestamp{std::chrono::seconds(1704067200)};
  for (auto _ : state) benchmark::DoNotOptimize(ranker.rank(q, docs, *snap, now));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rank)->Arg(1000)->Arg(10000);
BENCHMARK_MAIN();
