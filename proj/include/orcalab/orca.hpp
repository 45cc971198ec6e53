#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "orcalab/learner.hpp"

namespace orcalab {

/// UC exploits user clusters, IC item clusters. They differ only in how level
/// membership is decided.
enum class ClusterMode { UserClusters, ItemClusters };

enum class Membership { Member, NonMember, Unknown };

struct OrcaOptions {
  ClusterMode mode = ClusterMode::ItemClusters;
  InventoryMode inventory = InventoryMode::Static;
  TieBreakPolicy tie_break = TieBreakPolicy::LowestIndex;
  std::uint64_t seed = 0;
};

/// One-time recommendation algorithm for perturbation-free biclustered
/// matrices (the UC or IC variant; see FusedLearner for the combination).
///
/// Users are registered lazily with level 0. Levels are 1-based; level k has
/// a representative item, a creator user, and an item pool stored as the set
/// of removed items so that items arriving later are pool members implicitly.
class Orca final : public Learner {
 public:
  Orca(OrcaOptions options, std::shared_ptr<RecommendationHistory> history);

  Recommendation recommend(UserId user, const DynamicBitset& inventory) override;
  void observe(UserId user, ItemId item, bool liked) override;
  void log_feedback(UserId user, ItemId item, bool liked) override;

  nlohmann::json snapshot() const override;
  std::string name() const override;

  // Throws LevelError unless 1 <= level <= level_count().
  Membership membership(UserId user, std::uint32_t level) const;

  std::uint32_t level_count() const { return static_cast<std::uint32_t>(levels_.size()); }
  std::uint32_t user_level(UserId user) const;
  ItemId representative(std::uint32_t level) const { return level_at(level).representative; }
  UserId creator(std::uint32_t level) const { return level_at(level).creator; }
  bool in_pool(std::uint32_t level, ItemId item) const { return !level_at(level).removed.test(item); }
  const DynamicBitset& removed_items(std::uint32_t level) const { return level_at(level).removed; }
  // UC only: creator's feedback on r_1..r_level at creation (-1 when unknown).
  const std::vector<std::int8_t>& signature(std::uint32_t level) const { return level_at(level).signature; }

  // Observed feedback: 1 liked, 0 disliked, -1 not observed by this instance.
  int feedback(UserId user, ItemId item) const;

  const OrcaOptions& options() const { return options_; }

 private:
  struct Level {
    ItemId representative;
    UserId creator;
    DynamicBitset removed;
    std::vector<std::int8_t> signature;
  };
  struct UserState {
    std::uint32_t level = 0;
    DynamicBitset observed;
    DynamicBitset liked;
  };

  const Level& level_at(std::uint32_t level) const;
  UserState& user_state(UserId user);
  void create_level(UserId user, ItemId item);

  OrcaOptions options_;
  std::shared_ptr<RecommendationHistory> history_;
  RngStream rng_;
  std::vector<Level> levels_;
  std::vector<UserState> users_;
  PendingPair pending_;
  DynamicBitset candidates_;  // R for the current trial
  DynamicBitset scratch_;     // R ∩ P_k
};

}  // namespace orcalab
