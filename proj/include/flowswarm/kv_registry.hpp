// Copyright 2026 The flowswarm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWSWARM_KV_REGISTRY_HPP
#define FLOWSWARM_KV_REGISTRY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowswarm {

struct VersionedValue {
  std::string value;
  std::uint64_t version = 0;

  friend bool operator==(const VersionedValue&, const VersionedValue&) = default;
};

// Versioned last-write-wins store for overlay configuration (subnet, ports,
// endpoint membership). Versions start at 1 and increase by one per put.
class KvRegistry {
 public:
  // Returns the new version. Throws DomainError on an empty key.
  std::uint64_t put(const std::string& key, std::string value);

  // Throws KeyAbsent for keys never written.
  const std::string& get(const std::string& key) const;
  const VersionedValue& get_versioned(const std::string& key) const;
  std::optional<VersionedValue> find(const std::string& key) const;

  // Replica write: accepted iff its version is newer than the local one.
  bool apply(const std::string& key, const VersionedValue& incoming);
  // Applies every entry of `other`; the result keeps the highest version per key.
  void merge(const KvRegistry& other);

  std::vector<std::string> keys_with_prefix(std::string_view prefix) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, VersionedValue>& entries() const { return entries_; }

  friend bool operator==(const KvRegistry&, const KvRegistry&) = default;

 private:
  std::map<std::string, VersionedValue> entries_;
};

KvRegistry kv_put(KvRegistry registry, const std::string& key, std::string value);
std::string kv_get(const KvRegistry& registry, const std::string& key);

}  // namespace flowswarm

#endif  // FLOWSWARM_KV_REGISTRY_HPP
