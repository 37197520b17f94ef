#include "serefind/identity/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "serefind/error.hpp"

namespace serefind::identity {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

bool valid_domain(std::string_view d) {
  if (d.empty() || d.size() > 253) return false;
  std::size_t label_len = 0;
  bool saw_dot = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const char c = d[i];
    if (c == '.') {
      if (label_len == 0 || d[i - 1] == '-') return false;
      label_len = 0;
      saw_dot = true;
      continue;
    }
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok || (c == '-' && label_len == 0)) return false;
    if (++label_len > 63) return false;
  }
  return saw_dot && label_len > 0;
}

}  // namespace

std::string email_domain(std::string_view email) {
  const auto at = email.rfind('@');
  if (at == std::string_view::npos || at == 0 || email.find('@') != at) {
    throw Error(ErrorCode::kInvalidEmail, "'" + std::string(email) + "' is not an email address");
  }
  for (char c : email.substr(0, at)) {
    if (static_cast<unsigned char>(c) <= ' ' || c == '<' || c == '>' || c == '"' ||
        c == ',' || c == ';' || c == '\\') {
      throw Error(ErrorCode::kInvalidEmail, "'" + std::string(email) + "' is not an email address");
    }
  }
  auto domain = lower(email.substr(at + 1));
  if (!valid_domain(domain)) {
    throw Error(ErrorCode::kInvalidEmail, "'" + std::string(email) + "' has an invalid domain");
  }
  return domain;
}

void NetworkRegistry::add(Network network) {
  if (network.network_id.empty()) {
    throw Error(ErrorCode::kNetworkConflict, "network id must not be empty");
  }
  if (networks_.count(network.network_id) != 0) {
    throw Error(ErrorCode::kNetworkConflict,
                "network '" + network.network_id + "' already exists");
  }
  std::set<std::string> normalized;
  for (const auto& s : network.domain_suffixes) {
    auto d = lower(trim(s));
    if (!valid_domain(d)) {
      throw Error(ErrorCode::kNetworkConflict, "invalid domain suffix '" + s + "'");
    }
    if (auto it = suffix_owner_.find(d); it != suffix_owner_.end()) {
      throw Error(ErrorCode::kNetworkConflict,
                  "domain '" + d + "' already belongs to network '" + it->second + "'");
    }
    normalized.insert(std::move(d));
  }
  if (normalized.empty()) {
    throw Error(ErrorCode::kNetworkConflict,
                "network '" + network.network_id + "' needs at least one domain");
  }
  network.domain_suffixes = std::move(normalized);
  for (const auto& d : network.domain_suffixes) suffix_owner_[d] = network.network_id;
  auto id = network.network_id;
  networks_.emplace(std::move(id), std::move(network));
}

const Network& NetworkRegistry::network_of(std::string_view email) const {
  const std::string domain = email_domain(email);
  // Walk from the full domain towards its parents; the first hit is the
  // longest matching suffix.
  std::string_view probe = domain;
  while (true) {
    if (auto it = suffix_owner_.find(probe); it != suffix_owner_.end()) {
      return networks_.find(it->second)->second;
    }
    const auto dot = probe.find('.');
    if (dot == std::string_view::npos) break;
    probe.remove_prefix(dot + 1);
  }
  throw Error(ErrorCode::kUnknownDomain, "no network is registered for '" + domain + "'");
}

const Network* NetworkRegistry::find(std::string_view network_id) const {
  auto it = networks_.find(network_id);
  return it == networks_.end() ? nullptr : &it->second;
}

std::vector<Network> NetworkRegistry::networks() const {
  std::vector<Network> out;
  for (const auto& [_, n] : networks_) out.push_back(n);
  return out;
}

NetworkRegistry NetworkRegistry::parse(std::string_view text) {
  NetworkRegistry registry;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto t1 = raw.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : raw.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw Error(ErrorCode::kConfigInvalid,
                  "network registry line " + std::to_string(line_no) +
                      ": expected id<TAB>name<TAB>domains");
    }
    Network n;
    n.network_id = std::string(trim(raw.substr(0, t1)));
    n.display_name = std::string(trim(raw.substr(t1 + 1, t2 - t1 - 1)));
    auto domains = raw.substr(t2 + 1);
    while (!domains.empty()) {
      const auto comma = domains.find(',');
      auto d = trim(domains.substr(0, comma));
      if (!d.empty()) n.domain_suffixes.emplace(d);
      domains = comma == std::string_view::npos ? std::string_view{}
                                                : domains.substr(comma + 1);
    }
    registry.add(std::move(n));
  }
  return registry;
}

NetworkRegistry NetworkRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid, "cannot read network registry " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string NetworkRegistry::to_text() const {
  std::string out;
  for (const auto& [id, n] : networks_) {
    out += id + "\t" + n.display_name + "\t";
    bool first = true;
    for (const auto& d : n.domain_suffixes) {
      if (!first) out += ',';
      out += d;
      first = false;
    }
    out += '\n';
  }
  return out;
}

}  // namespace serefind::identity
