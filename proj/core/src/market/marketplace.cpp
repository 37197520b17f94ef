#include "serefind/market/marketplace.hpp"

#include <algorithm>
#include <mutex>

#include "serefind/identity/redact.hpp"

namespace serefind::market {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::set<std::string> normalize_tags(const std::set<std::string>& tags) {
  std::set<std::string> out;
  for (auto t : tags) {
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const auto b = t.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.insert(t.substr(b, t.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(schema::ValidationReport report)
    : Error(ErrorCode::kValidationFailed, [&] {
        std::string msg = "listing values failed validation:";
        for (const auto& c : report.checks) {
          if (c.status != schema::FieldStatus::kOk) {
            msg += " " + c.label + " (" + std::string(to_string(c.status)) + ")";
          }
        }
        return msg;
      }()),
      report_(std::move(report)) {}

Marketplace::Marketplace(const schema::SchemaRegistry& schemas, Clock clock)
    : schemas_(schemas), clock_(std::move(clock)) {}

Marketplace::Entry& Marketplace::entry_locked(const ListingId& id) const {
  auto it = listings_.find(id);
  if (it == listings_.end()) {
    throw Error(ErrorCode::kListingNotFound, "no listing '" + id.value + "'");
  }
  return *it->second;
}

Listing Marketplace::snapshot_locked(const Entry& e) const {
  Listing l = e.listing;
  l.view_count = e.views.load(std::memory_order_relaxed);
  return l;
}

void Marketplace::announce(const Listing& l) {
  if (observer_ == nullptr) return;
  if (l.status == ListingStatus::kActive) {
    observer_->listing_active(l);
  } else {
    observer_->listing_inactive(l.listing_id);
  }
}

void Marketplace::apply_values(Listing& l, const std::map<std::string, std::string>& raw) {
  const auto& schema = schemas_.get(l.category);
  auto report = schema::validate_values(schema, raw);
  if (!report.ok()) throw ValidationError(std::move(report));
  l.values = std::move(report.accepted);
  const auto* title_spec = schema.find(schema::kTitleLabel);
  const auto& title = l.values.at(title_spec->label);
  l.title = std::get<schema::TextValue>(title).text;
}

Listing Marketplace::create_listing(const identity::User& owner,
                                    const ListingDraft& draft) {
  if (!owner.active) {
    throw Error(ErrorCode::kAccountInactive, "account is not verified yet");
  }
  if (draft.location && !is_valid(*draft.location)) {
    throw Error(ErrorCode::kBadRequest, "listing location out of range");
  }
  std::unique_lock lock(mu_);
  Listing l;
  l.category = draft.category;
  apply_values(l, draft.values);
  l.listing_id = ListingId{make_sequential_id('L', next_listing_)};
  l.owner_id = owner.user_id;
  l.network_id = owner.network_id;
  l.subcategory = draft.subcategory;
  l.tags = normalize_tags(draft.tags);
  l.description = draft.description;
  l.location = draft.location;
  l.visibility = draft.visibility;
  l.status = ListingStatus::kActive;
  l.created_at = l.updated_at = draft.created_at.value_or(clock_());
  ++next_listing_;

  auto entry = std::make_unique<Entry>();
  entry->listing = l;
  listings_.emplace(l.listing_id, std::move(entry));
  edges_[{l.listing_id, owner.user_id}] =
      GraphEdge{owner.user_id, l.listing_id, EdgeKind::kSolid, 0};
  announce(l);
  return l;
}

Listing Marketplace::mutate_listing(const identity::User& actor, const ListingId& id,
                                    const ListingAction& action) {
  std::unique_lock lock(mu_);
  auto& e = entry_locked(id);
  if (e.listing.owner_id != actor.user_id) {
    throw Error(ErrorCode::kNotOwner, "only the owner can change this listing");
  }
  Listing next = e.listing;
  const auto status = next.status;
  auto invalid = [&](std::string_view what) {
    return Error(ErrorCode::kInvalidTransition,
                 "cannot " + std::string(what) + " a " +
                     std::string(to_string(status)) + " listing");
  };

  std::visit(
      overloaded{
          [&](const EditListing& edit) {
            if (status != ListingStatus::kActive && status != ListingStatus::kHidden) {
              throw invalid("edit");
            }
            apply_values(next, edit.values);
            if (edit.description) next.description = *edit.description;
            if (edit.subcategory) next.subcategory = *edit.subcategory;
            if (edit.tags) next.tags = normalize_tags(*edit.tags);
            if (edit.visibility) next.visibility = *edit.visibility;
          },
          [&](const HideListing&) {
            if (status != ListingStatus::kActive) throw invalid("hide");
            next.status = ListingStatus::kHidden;
          },
          [&](const DeleteListing&) {
            if (status != ListingStatus::kActive && status != ListingStatus::kHidden) {
              throw invalid("delete");
            }
            next.status_before_delete = status;
            next.status = ListingStatus::kDeleted;
          },
          [&](const UndoListing&) {
            if (status == ListingStatus::kHidden) {
              next.status = ListingStatus::kActive;
            } else if (status == ListingStatus::kDeleted && next.status_before_delete) {
              next.status = *next.status_before_delete;
              next.status_before_delete.reset();
            } else {
              throw invalid("undo");
            }
          },
      },
      action);

  next.updated_at = clock_();
  e.listing = next;
  Listing out = snapshot_locked(e);
  announce(out);
  return out;
}

std::uint64_t Marketplace::record_view(const ListingId& id, const UserId* viewer) {
  std::shared_lock lock(mu_);
  auto& e = entry_locked(id);
  if (viewer != nullptr && *viewer == e.listing.owner_id) {
    return e.views.load(std::memory_order_relaxed);
  }
  return e.views.fetch_add(1, std::memory_order_relaxed) + 1;
}

std::vector<GraphEdge> Marketplace::mark_sold(const identity::User& owner,
                                              const ListingId& id,
                                              const identity::User& buyer) {
  std::unique_lock lock(mu_);
  auto& e = entry_locked(id);
  if (e.listing.owner_id != owner.user_id) {
    throw Error(ErrorCode::kNotOwner, "only the owner can sell this listing");
  }
  if (e.listing.status == ListingStatus::kSold) {
    throw Error(ErrorCode::kAlreadySold, "listing was already sold");
  }
  if (e.listing.status != ListingStatus::kActive) {
    throw Error(ErrorCode::kInvalidTransition, "only active listings can be sold");
  }
  if (buyer.user_id == owner.user_id) {
    throw Error(ErrorCode::kSelfSale, "owner cannot buy their own listing");
  }
  auto buyer_edge = edges_.find({id, buyer.user_id});
  if (buyer_edge == edges_.end() || buyer_edge->second.kind != EdgeKind::kDashed) {
    throw Error(ErrorCode::kBuyerNeverEngaged,
                "buyer never communicated about this listing");
  }
  auto& seller_edge = edges_.at({id, owner.user_id});
  seller_edge.kind = EdgeKind::kDashed;
  seller_edge.message_count = buyer_edge->second.message_count;
  buyer_edge->second.kind = EdgeKind::kSolid;
  buyer_edge->second.message_count = 0;

  e.listing.status = ListingStatus::kSold;
  e.listing.updated_at = clock_();
  announce(e.listing);

  std::vector<GraphEdge> out;
  for (auto it = edges_.lower_bound({id, UserId{}}); it != edges_.end() && it->first.first == id;
       ++it) {
    out.push_back(it->second);
  }
  return out;
}

GraphEdge Marketplace::record_message(const ListingId& id, const UserId& inquirer) {
  std::unique_lock lock(mu_);
  auto& e = entry_locked(id);
  if (inquirer == e.listing.owner_id) {
    throw Error(ErrorCode::kSelfMessage, "owner cannot be the inquirer on own listing");
  }
  auto it = edges_.find({id, inquirer});
  if (it == edges_.end()) {
    it = edges_.emplace(EdgeKey{id, inquirer},
                        GraphEdge{inquirer, id, EdgeKind::kDashed, 0})
             .first;
  }
  if (it->second.kind == EdgeKind::kSolid) {
    // The inquirer bought the item; the thread's count lives on the seller's
    // dashed edge now.
    it = edges_.find({id, e.listing.owner_id});
  }
  it->second.message_count += 1;
  return it->second;
}

Profile Marketplace::profile_of(const identity::User& subject,
                                const identity::User* viewer) const {
  viewer = identity::effective_viewer(viewer);
  const bool own = viewer != nullptr && viewer->user_id == subject.user_id;
  Profile p;
  p.username = subject.username;

  std::shared_lock lock(mu_);
  for (const auto& [id, e] : listings_) {
    const auto& l = e->listing;
    if (l.owner_id != subject.user_id) continue;
    if (own) {
      if (l.status == ListingStatus::kDeleted) continue;
    } else if (!identity::can_view(viewer, l)) {
      continue;
    }
    ProfileEntry entry{l.listing_id, l.title, l.category, l.status, l.created_at, {}};
    if (own) entry.view_count = e->views.load(std::memory_order_relaxed);
    p.listings.push_back(std::move(entry));
  }
  std::stable_sort(p.listings.begin(), p.listings.end(),
                   [](const ProfileEntry& a, const ProfileEntry& b) {
                     return a.created_at > b.created_at;
                   });
  return p;
}

std::optional<Listing> Marketplace::find(const ListingId& id) const {
  std::shared_lock lock(mu_);
  auto it = listings_.find(id);
  if (it == listings_.end()) return std::nullopt;
  return snapshot_locked(*it->second);
}

std::vector<Listing> Marketplace::listings() const {
  std::shared_lock lock(mu_);
  std::vector<Listing> out;
  out.reserve(listings_.size());
  for (const auto& [_, e] : listings_) out.push_back(snapshot_locked(*e));
  return out;
}

std::vector<Listing> Marketplace::active_listings() const {
  std::shared_lock lock(mu_);
  std::vector<Listing> out;
  for (const auto& [_, e] : listings_) {
    if (e->listing.status == ListingStatus::kActive) out.push_back(snapshot_locked(*e));
  }
  return out;
}

std::vector<GraphEdge> Marketplace::edges_of(const ListingId& id) const {
  std::shared_lock lock(mu_);
  std::vector<GraphEdge> out;
  for (auto it = edges_.lower_bound({id, UserId{}}); it != edges_.end() && it->first.first == id;
       ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::vector<GraphEdge> Marketplace::edges() const {
  std::shared_lock lock(mu_);
  std::vector<GraphEdge> out;
  out.reserve(edges_.size());
  for (const auto& [_, edge] : edges_) out.push_back(edge);
  return out;
}

std::optional<GraphEdge> Marketplace::edge(const UserId& user, const ListingId& id) const {
  std::shared_lock lock(mu_);
  auto it = edges_.find({id, user});
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::string Marketplace::export_edges() const {
  std::string out;
  for (const auto& e : edges()) {
    out += e.user_id.value + "\t" + e.listing_id.value + "\t" +
           std::string(to_string(e.kind)) + "\t" + std::to_string(e.message_count) + "\n";
  }
  return out;
}

void Marketplace::restore(Listing listing) {
  std::unique_lock lock(mu_);
  next_listing_ =
      std::max(next_listing_, parse_sequential_id('L', listing.listing_id.value) + 1);
  auto entry = std::make_unique<Entry>();
  entry->views.store(listing.view_count);
  entry->listing = listing;
  listings_[listing.listing_id] = std::move(entry);
  announce(listing);
}

void Marketplace::restore(GraphEdge edge) {
  std::unique_lock lock(mu_);
  auto key = EdgeKey{edge.listing_id, edge.user_id};
  edges_[key] = std::move(edge);
}

std::vector<ListingId> listings_without_single_solid_edge(const Marketplace& m) {
  std::map<ListingId, int> solid;
  for (const auto& e : m.edges()) {
    if (e.kind == EdgeKind::kSolid) ++solid[e.listing_id];
  }
  std::vector<ListingId> bad;
  for (const auto& l : m.listings()) {
    if (l.status == ListingStatus::kDeleted) continue;
    if (solid[l.listing_id] != 1) bad.push_back(l.listing_id);
  }
  return bad;
}

}  // namespace serefind::market
