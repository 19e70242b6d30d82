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

#include "flowswarm/model.hpp"

#include <random>
#include <set>

#include "flowswarm/error.hpp"
#include "gtest/gtest.h"

namespace flowswarm {
namespace {

WorkerState worker(const std::string& id) {
  WorkerState w;
  w.id = AgentId(id);
  return w;
}

TEST(SwarmTest, NewSwarmStartsEmpty) {
  const SwarmState s = new_swarm(AgentId("m1"));
  EXPECT_TRUE(s.workers.empty());
  EXPECT_EQ(s.master, AgentId("m1"));
  EXPECT_FALSE(s.swarm_id.empty());
}

TEST(SwarmTest, SwarmIdsAreDistinct) {
  EXPECT_NE(new_swarm(AgentId("m1")).swarm_id, new_swarm(AgentId("m1")).swarm_id);
  EXPECT_EQ(new_swarm(AgentId("m1"), 7).swarm_id, new_swarm(AgentId("m1"), 7).swarm_id);
  EXPECT_NE(new_swarm(AgentId("m1"), 7).swarm_id, new_swarm(AgentId("m1"), 8).swarm_id);
}

TEST(SwarmTest, SwarmIdLooksLikeUuid) {
  const std::string id = uuid_from_entropy(42);
  ASSERT_EQ(id.size(), 36u);
  EXPECT_EQ(id[8], '-');
  EXPECT_EQ(id[14], '4');
}

TEST(SwarmTest, MasterCannotJoinAsWorker) {
  EXPECT_THROW(join_worker(new_swarm(AgentId("m1")), worker("m1")), MasterConflict);
}

TEST(SwarmTest, JoinAddsWorkerAsJoined) {
  WorkerState w = worker("w1");
  w.status = WorkerStatus::Running;
  const SwarmState s = join_worker(new_swarm(AgentId("m1")), w);
  ASSERT_EQ(s.workers.size(), 1u);
  EXPECT_EQ(s.workers[0].status, WorkerStatus::Joined);
  EXPECT_EQ(s.role_of(AgentId("w1")), Role::Worker);
  EXPECT_EQ(s.role_of(AgentId("m1")), Role::Master);
  EXPECT_EQ(s.role_of(AgentId("nobody")), std::nullopt);
}

TEST(SwarmTest, DuplicateJoinRejected) {
  SwarmState s = join_worker(new_swarm(AgentId("m1")), worker("w1"));
  EXPECT_THROW(join_worker(s, worker("w1")), DuplicateAgent);
}

TEST(SwarmTest, TwelveWorkersJoin) {
  SwarmState s = new_swarm(AgentId("m"));
  for (int i = 0; i < 12; ++i) s = join_worker(std::move(s), worker("w" + std::to_string(i)));
  EXPECT_EQ(s.workers.size(), 12u);
}

TEST(SwarmTest, EmptyIdsRejected) {
  EXPECT_THROW(AgentId(""), DomainError);
}

TEST(WorkerStatusTest, Transitions) {
  using S = WorkerStatus;
  EXPECT_TRUE(is_valid_transition(S::Joined, S::Allocated));
  EXPECT_TRUE(is_valid_transition(S::Allocated, S::Running));
  EXPECT_TRUE(is_valid_transition(S::Running, S::Left));
  EXPECT_TRUE(is_valid_transition(S::Joined, S::Left));
  EXPECT_FALSE(is_valid_transition(S::Joined, S::Running));
  EXPECT_FALSE(is_valid_transition(S::Running, S::Joined));
  EXPECT_FALSE(is_valid_transition(S::Left, S::Joined));

  SwarmState s = join_worker(new_swarm(AgentId("m")), worker("w"));
  EXPECT_THROW(set_worker_status(s, AgentId("w"), S::Running), InvalidTransition);
  EXPECT_THROW(set_worker_status(s, AgentId("x"), S::Left), UnknownAgent);
  s = set_worker_status(std::move(s), AgentId("w"), S::Allocated);
  s = set_worker_status(std::move(s), AgentId("w"), S::Running);
  s = leave_worker(std::move(s), AgentId("w"));
  EXPECT_EQ(s.workers[0].status, S::Left);
  // Left workers keep their id reserved.
  EXPECT_THROW(join_worker(s, worker("w")), DuplicateAgent);
}

TEST(ValidationTest, WorkloadAndProfileRanges) {
  EXPECT_NO_THROW(validate(WorkloadSample{0, 1, 0.5, 0.25, 3}));
  EXPECT_THROW(validate(WorkloadSample{-0.1, 0, 0, 0, 0}), DomainError);
  EXPECT_THROW(validate(WorkloadSample{0, 0, 0, 1.5, 0}), DomainError);
  EXPECT_THROW(validate(WorkloadSample{0, std::nan(""), 0, 0, 0}), DomainError);
  HardwareProfile p;
  EXPECT_NO_THROW(validate(p));
  p.cpu_cores = 0;
  EXPECT_THROW(validate(p), DomainError);
}

// Random join/leave sequences never break master uniqueness or id
// distinctness: every rejected operation leaves the swarm unchanged.
TEST(SwarmPropertyTest, RandomOperationSequencesKeepInvariants) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    SwarmState s = new_swarm(AgentId("a0"), static_cast<std::uint64_t>(trial));
    for (int step = 0; step < 40; ++step) {
      const std::string id = "a" + std::to_string(rng() % 8);
      const SwarmState before = s;
      try {
        if (rng() % 3 == 0) {
          s = leave_worker(std::move(s), AgentId(id));
        } else {
          s = join_worker(std::move(s), worker(id));
        }
      } catch (const Error&) {
        s = before;
      }
      std::set<std::string> ids;
      for (const auto& w : s.workers) {
        ASSERT_NE(w.id, s.master);
        ASSERT_TRUE(ids.insert(w.id.value()).second);
      }
      ASSERT_EQ(s.role_of(s.master), Role::Master);
    }
  }
}

}  // namespace
}  // namespace flowswarm
