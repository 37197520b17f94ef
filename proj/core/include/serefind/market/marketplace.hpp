#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "serefind/error.hpp"
#include "serefind/identity/user.hpp"
#include "serefind/market/listing.hpp"
#include "serefind/schema/registry.hpp"
#include "serefind/schema/values.hpp"

namespace serefind::market {

/// Receives index-relevant lifecycle changes: a listing became (or stayed)
/// active, or left the active state.
class ListingObserver {
 public:
  virtual ~ListingObserver() = default;
  virtual void listing_active(const Listing& listing) = 0;
  virtual void listing_inactive(const ListingId& id) = 0;
};

struct ListingDraft {
  std::string category;
  std::string subcategory;
  std::set<std::string> tags;
  std::string description;
  /// Raw values keyed by schema label; must include Title.
  std::map<std::string, std::string> values;
  Visibility visibility = Visibility::kNetwork;
  std::optional<GeoPoint> location;
  /// Backdates the listing (seeding, imports). Defaults to the clock.
  std::optional<Timestamp> created_at;
};

struct EditListing {
  std::map<std::string, std::string> values;
  std::optional<std::string> description;
  std::optional<std::string> subcategory;
  std::optional<std::set<std::string>> tags;
  std::optional<Visibility> visibility;
};
struct HideListing {};
struct DeleteListing {};
struct UndoListing {};

using ListingAction = std::variant<EditListing, HideListing, DeleteListing, UndoListing>;

struct ProfileEntry {
  ListingId listing_id;
  std::string title;
  std::string category;
  ListingStatus status = ListingStatus::kActive;
  Timestamp created_at{};
  /// Present only when the viewer owns the profile.
  std::optional<std::uint64_t> view_count;
};

/// Username plus listing summaries. Never carries message contents.
struct Profile {
  std::string username;
  std::vector<ProfileEntry> listings;
};

/// Thrown as kValidationFailed; carries the full report.
class ValidationError : public Error {
 public:
  explicit ValidationError(schema::ValidationReport report);
  const schema::ValidationReport& report() const { return report_; }

 private:
  schema::ValidationReport report_;
};

/// Listings and the ownership/interest graph.
///
/// Every listing carries exactly one solid edge (its owner, or its buyer
/// after a sale). Dashed edges record interest; their message_count is the
/// number of messages in the matching thread. Thread-safe: mutations are
/// serialized, reads run concurrently, view counting is lock-free per listing.
class Marketplace {
 public:
  Marketplace(const schema::SchemaRegistry& schemas, Clock clock);

  void set_observer(ListingObserver* observer) { observer_ = observer; }

  /// Throws kAccountInactive, kSchemaNotFound, ValidationError.
  Listing create_listing(const identity::User& owner, const ListingDraft& draft);

  /// Throws kListingNotFound, kNotOwner, kInvalidTransition, ValidationError.
  Listing mutate_listing(const identity::User& actor, const ListingId& id,
                         const ListingAction& action);

  /// Returns the new count; owner views (viewer id == owner id) are not counted.
  std::uint64_t record_view(const ListingId& id, const UserId* viewer);

  /// Transfers the solid edge to the buyer and parks the seller on a dashed
  /// edge carrying the buyer thread's message count. Throws kNotOwner,
  /// kAlreadySold, kInvalidTransition, kSelfSale, kBuyerNeverEngaged.
  std::vector<GraphEdge> mark_sold(const identity::User& owner, const ListingId& id,
                                   const identity::User& buyer);

  /// Counts one message in the thread between `inquirer` and the listing's
  /// owner, creating the inquirer's dashed edge on first contact. Returns the
  /// edge that carries the thread's count.
  GraphEdge record_message(const ListingId& id, const UserId& inquirer);

  /// `viewer` may be null (anonymous).
  Profile profile_of(const identity::User& subject, const identity::User* viewer) const;

  std::optional<Listing> find(const ListingId& id) const;
  std::vector<Listing> listings() const;
  std::vector<Listing> active_listings() const;
  std::vector<GraphEdge> edges_of(const ListingId& id) const;
  std::vector<GraphEdge> edges() const;
  std::optional<GraphEdge> edge(const UserId& user, const ListingId& id) const;

  /// `user_id<TAB>listing_id<TAB>solid|dashed<TAB>message_count` lines.
  std::string export_edges() const;

  /// Persistence hooks. Restored active listings are announced to the observer.
  void restore(Listing listing);
  void restore(GraphEdge edge);

 private:
  struct Entry {
    Listing listing;
    std::atomic<std::uint64_t> views{0};
  };
  using EdgeKey = std::pair<ListingId, UserId>;

  Entry& entry_locked(const ListingId& id) const;
  Listing snapshot_locked(const Entry& e) const;
  void announce(const Listing& l);
  void apply_values(Listing& l, const std::map<std::string, std::string>& raw);

  mutable std::shared_mutex mu_;
  const schema::SchemaRegistry& schemas_;
  Clock clock_;
  ListingObserver* observer_ = nullptr;
  std::map<ListingId, std::unique_ptr<Entry>> listings_;
  std::map<EdgeKey, GraphEdge> edges_;
  unsigned long long next_listing_ = 1;
};

/// Graph invariant used by tests and the admin tooling: every listing that is
/// not deleted has exactly one solid edge. Returns offending listing ids.
std::vector<ListingId> listings_without_single_solid_edge(const Marketplace& m);

}  // namespace serefind::market
