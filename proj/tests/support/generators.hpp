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

// Random generators for property tests.

#ifndef FLOWSWARM_TESTS_GENERATORS_HPP
#define FLOWSWARM_TESTS_GENERATORS_HPP

#include <map>
#include <random>
#include <string>
#include <vector>

#include "flowswarm/definitions.hpp"

namespace flowswarm::testing_support {

inline std::string random_word(std::mt19937_64& rng, std::size_t max_len = 10) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_./:\"\\ \té";
  const std::size_t len = 1 + rng() % max_len;
  std::string out;
  while (out.size() < len) {
    const char c = alphabet[rng() % alphabet.size()];
    // Keep UTF-8 valid: the two-byte é sits at the end of the alphabet.
    if (static_cast<unsigned char>(c) >= 0x80) {
      out += "é";
    } else {
      out += c;
    }
  }
  return out;
}

inline double random_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<std::string> random_words(std::mt19937_64& rng, std::size_t max_count) {
  std::vector<std::string> out(rng() % (max_count + 1));
  for (auto& w : out) w = random_word(rng);
  return out;
}

inline ServiceSpec random_service(std::mt19937_64& rng, const std::string& name) {
  ServiceSpec s;
  s.name = name;
  if (rng() % 2) s.base_os = random_word(rng);
  s.packages = random_words(rng, 4);
  s.repositories = random_words(rng, 3);
  for (std::size_t k = rng() % 3; k > 0; --k) {
    s.volumes.push_back({random_word(rng), random_word(rng)});
  }
  s.entrypoint = rng() % 5 == 0 ? std::string() : random_word(rng, 30);
  switch (rng() % 4) {
    case 0: s.predefined_cost = 0.0; break;
    case 1: s.predefined_cost = 100.0; break;
    case 2: s.predefined_cost = static_cast<double>(rng() % 101); break;
    default: s.predefined_cost = random_real(rng, 0.0, 100.0);
  }
  for (auto& tag : random_words(rng, 3)) s.required_capabilities.insert(tag);
  if (rng() % 2) s.image_size_mb = random_real(rng, 0.001, 5000.0);
  return s;
}

// Weights on a grid so they sum to exactly one.
inline CostWeights random_weights(std::mt19937_64& rng) {
  int parts[4];
  int left = 8;
  for (int k = 0; k < 3; ++k) {
    parts[k] = static_cast<int>(rng() % static_cast<unsigned>(left + 1));
    left -= parts[k];
  }
  parts[3] = left;
  return {parts[0] / 8.0, parts[1] / 8.0, parts[2] / 8.0, parts[3] / 8.0};
}

// Random experiment plus the CDF library its references resolve against.
struct RandomExperiment {
  ExperimentSpec spec;
  std::map<std::string, ServiceSpec> library;
};

inline RandomExperiment random_experiment(std::mt19937_64& rng) {
  RandomExperiment out;
  ExperimentSpec& x = out.spec;
  x.name = random_word(rng);
  const std::size_t n = 1 + rng() % 6;
  for (std::size_t j = 0; j < n; ++j) {
    ServiceEntry e;
    e.definition = random_service(rng, "svc" + std::to_string(j) + random_word(rng, 4));
    e.inline_definition = rng() % 2 == 0;
    if (!e.inline_definition) out.library[e.definition.name] = e.definition;
    if (rng() % 4 == 0) e.override.predefined_cost = random_real(rng, 0.0, 100.0);
    if (rng() % 4 == 0) {
      CapabilitySet tags;
      for (auto& t : random_words(rng, 2)) tags.insert(t);
      e.override.required_capabilities = tags;
    }
    x.services.push_back(std::move(e));
  }
  if (n >= 2) {
    for (std::size_t k = rng() % 4; k > 0; --k) {
      const std::size_t a = rng() % n;
      const std::size_t b = (a + 1 + rng() % (n - 1)) % n;
      x.dependencies.emplace_back(x.services[a].definition.name, x.services[b].definition.name);
    }
  }
  x.network.subnet = std::to_string(rng() % 256) + "." + std::to_string(rng() % 256) + ".0.0/" +
                     std::to_string(rng() % 33);
  for (std::size_t k = rng() % 4; k > 0; --k) {
    x.network.ports.push_back(static_cast<std::uint16_t>(rng() % 65536));
  }
  x.weights = random_weights(rng);
  x.pool_discount = rng() % 3 == 0 ? 1.0 : random_real(rng, 0.01, 1.0);
  return out;
}

}  // namespace flowswarm::testing_support

#endif  // FLOWSWARM_TESTS_GENERATORS_HPP
