#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "serefind/market/listing.hpp"
#include "serefind/market/marketplace.hpp"
#include "serefind/search/tokenizer.hpp"

namespace serefind::search {

/// Multipliers applied to raw term counts per listing field.
struct FieldWeights {
  double title = 3.0;
  double tags = 2.0;
  double description = 1.0;
  double text_fields = 1.0;
};

/// weighted_tf per term for one listing: title, tags, description and every
/// text-typed schema value other than Title.
std::unordered_map<std::string, double> weighted_term_frequencies(
    const market::Listing& listing, const Tokenizer& tokenizer, const FieldWeights& weights);

/// Immutable view of the index at one commit.
class IndexSnapshot {
 public:
  using Postings = std::unordered_map<ListingId, double>;

  std::size_t document_count() const { return documents_.size(); }
  std::size_t document_frequency(const std::string& term) const;
  /// 0 when the listing does not contain the term.
  double weighted_tf(const std::string& term, const ListingId& id) const;
  const Postings* postings(const std::string& term) const;
  bool contains(const ListingId& id) const { return documents_.count(id) != 0; }

 private:
  friend class InvertedIndex;
  std::unordered_map<std::string, Postings> postings_;
  std::unordered_map<ListingId, std::vector<std::string>> documents_;
};

/// Inverted index over active listings. One writer at a time; readers take
/// snapshots and never wait on a writer. Writes accumulate in a private
/// working copy that is published on the next snapshot() call.
class InvertedIndex : public market::ListingObserver {
 public:
  explicit InvertedIndex(Tokenizer tokenizer = {}, FieldWeights weights = {});

  void upsert(const market::Listing& listing);
  void remove(const ListingId& id);
  std::shared_ptr<const IndexSnapshot> snapshot() const;

  const Tokenizer& tokenizer() const { return tokenizer_; }
  const FieldWeights& weights() const { return weights_; }

  void listing_active(const market::Listing& listing) override { upsert(listing); }
  void listing_inactive(const ListingId& id) override { remove(id); }

 private:
  void remove_locked(const ListingId& id);

  Tokenizer tokenizer_;
  FieldWeights weights_;
  mutable std::mutex write_mu_;
  IndexSnapshot working_;
  mutable bool dirty_ = false;
  mutable std::shared_ptr<const IndexSnapshot> published_;
};

}  // namespace serefind::search
