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

#include "flowswarm/kv_registry.hpp"

#include "flowswarm/error.hpp"

namespace flowswarm {

std::uint64_t KvRegistry::put(const std::string& key, std::string value) {
  if (key.empty()) throw DomainError("registry keys must be non-empty");
  VersionedValue& slot = entries_[key];
  slot.value = std::move(value);
  return ++slot.version;
}

const VersionedValue& KvRegistry::get_versioned(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw KeyAbsent("no registry entry for '" + key + "'");
  return it->second;
}

const std::string& KvRegistry::get(const std::string& key) const {
  return get_versioned(key).value;
}

std::optional<VersionedValue> KvRegistry::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool KvRegistry::apply(const std::string& key, const VersionedValue& incoming) {
  if (key.empty()) throw DomainError("registry keys must be non-empty");
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.version >= incoming.version) return false;
  entries_[key] = incoming;
  return true;
}

void KvRegistry::merge(const KvRegistry& other) {
  for (const auto& [key, value] : other.entries_) apply(key, value);
}

std::vector<std::string> KvRegistry::keys_with_prefix(std::string_view prefix) const {
  std::vector<std::string> keys;
  for (auto it = entries_.lower_bound(std::string(prefix));
       it != entries_.end() && std::string_view(it->first).starts_with(prefix); ++it) {
    keys.push_back(it->first);
  }
  return keys;
}

KvRegistry kv_put(KvRegistry registry, const std::string& key, std::string value) {
  registry.put(key, std::move(value));
  return registry;
}

std::string kv_get(const KvRegistry& registry, const std::string& key) {
  return registry.get(key);
}

}  // namespace flowswarm
