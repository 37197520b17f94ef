#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace serefind::identity {

struct Network {
  std::string network_id;
  std::string display_name;
  std::set<std::string> domain_suffixes;

  bool operator==(const Network&) const = default;
};

/// Lowercased domain part of a syntactically valid address.
/// Throws kInvalidEmail otherwise.
std::string email_domain(std::string_view email);

/// Maps email domains to networks by longest matching suffix.
class NetworkRegistry {
 public:
  /// Throws kNetworkConflict when the id or any suffix is already taken.
  void add(Network network);

  /// Pure lookup. Throws kInvalidEmail or kUnknownDomain.
  const Network& network_of(std::string_view email) const;

  const Network* find(std::string_view network_id) const;
  std::vector<Network> networks() const;
  std::size_t size() const { return networks_.size(); }

  /// `network_id<TAB>display_name<TAB>domain1,domain2,...` per line;
  /// blank lines and `#` comments are skipped.
  static NetworkRegistry parse(std::string_view text);
  static NetworkRegistry load(const std::filesystem::path& path);
  std::string to_text() const;

 private:
  std::map<std::string, Network, std::less<>> networks_;
  std::map<std::string, std::string, std::less<>> suffix_owner_;
};

}  // namespace serefind::identity
