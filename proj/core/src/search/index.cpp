#include "serefind/search/index.hpp"

namespace serefind::search {

std::unordered_map<std::string, double> weighted_term_frequencies(
    const market::Listing& listing, const Tokenizer& tokenizer, const FieldWeights& weights) {
  std::unordered_map<std::string, double> tf;
  auto add = [&](std::string_view text, double w) {
    for (auto& t : tokenizer(text)) tf[std::move(t)] += w;
  };
  add(listing.title, weights.title);
  for (const auto& tag : listing.tags) add(tag, weights.tags);
  add(listing.description, weights.description);
  for (const auto& [label, value] : listing.values) {
    if (schema::labels_equal(label, schema::kTitleLabel)) continue;
    if (const auto* text = std::get_if<schema::TextValue>(&value)) {
      add(text->text, weights.text_fields);
    }
  }
  return tf;
}

std::size_t IndexSnapshot::document_frequency(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.size();
}

double IndexSnapshot::weighted_tf(const std::string& term, const ListingId& id) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return 0.0;
  auto p = it->second.find(id);
  return p == it->second.end() ? 0.0 : p->second;
}

const IndexSnapshot::Postings* IndexSnapshot::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

InvertedIndex::InvertedIndex(Tokenizer tokenizer, FieldWeights weights)
    : tokenizer_(std::move(tokenizer)),
      weights_(weights),
      published_(std::make_shared<IndexSnapshot>()) {}

void InvertedIndex::remove_locked(const ListingId& id) {
  auto doc = working_.documents_.find(id);
  if (doc == working_.documents_.end()) return;
  for (const auto& term : doc->second) {
    auto p = working_.postings_.find(term);
    if (p == working_.postings_.end()) continue;
    p->second.erase(id);
    if (p->second.empty()) working_.postings_.erase(p);
  }
  working_.documents_.erase(doc);
  dirty_ = true;
}

void InvertedIndex::upsert(const market::Listing& listing) {
  std::lock_guard lock(write_mu_);
  remove_locked(listing.listing_id);
  if (listing.status != market::ListingStatus::kActive) return;
  auto tf = weighted_term_frequencies(listing, tokenizer_, weights_);
  std::vector<std::string> terms;
  terms.reserve(tf.size());
  for (auto& [term, weight] : tf) {
    working_.postings_[term][listing.listing_id] = weight;
    terms.push_back(term);
  }
  working_.documents_[listing.listing_id] = std::move(terms);
  dirty_ = true;
}

void InvertedIndex::remove(const ListingId& id) {
  std::lock_guard lock(write_mu_);
  remove_locked(id);
}

std::shared_ptr<const IndexSnapshot> InvertedIndex::snapshot() const {
  std::lock_guard lock(write_mu_);
  if (dirty_) {
    published_ = std::make_shared<IndexSnapshot>(working_);
    dirty_ = false;
  }
  return published_;
}

}  // namespace serefind::search
