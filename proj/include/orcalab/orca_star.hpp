#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "orcalab/learner.hpp"

namespace orcalab {

/// UIE excludes both the user and the item on an unlucky exploration like;
/// UE excludes only the user.
enum class ExclusionVariant { UserItem, User };

struct OrcaStarOptions {
  ExclusionVariant variant = ExclusionVariant::UserItem;
  std::uint32_t psi = 2;  // tolerance to item perturbation, >= 2
  TieBreakPolicy tie_break = TieBreakPolicy::LowestIndex;
  std::uint64_t seed = 0;
};

/// Robust one-time recommendation for perturbed item-clustered matrices.
/// Static inventory only: the item universe is the history's item count.
///
/// An item leaves a level's pool after more than 2*psi dislikes from users
/// confirmed at that level. A like during exploration creates a level with
/// probability 1/psi and otherwise quarantines the user (and, for UIE, the item).
class OrcaStar final : public Learner {
 public:
  OrcaStar(OrcaStarOptions options, std::shared_ptr<RecommendationHistory> history);

  Recommendation recommend(UserId user, const DynamicBitset& inventory) override;
  // Convenience overload over the full static inventory.
  Recommendation recommend(UserId user);
  void observe(UserId user, ItemId item, bool liked) override;
  void log_feedback(UserId user, ItemId item, bool liked) override;

  nlohmann::json snapshot() const override;
  std::string name() const override;

  std::uint32_t psi() const { return options_.psi; }
  ExclusionVariant variant() const { return options_.variant; }
  std::uint32_t level_count() const { return static_cast<std::uint32_t>(levels_.size()); }
  std::uint32_t user_level(UserId user) const;
  ItemId representative(std::uint32_t level) const { return level_at(level).representative; }
  bool in_pool(std::uint32_t level, ItemId item) const { return !level_at(level).removed.test(item); }
  const DynamicBitset& removed_items(std::uint32_t level) const { return level_at(level).removed; }
  std::uint32_t dislike_count(std::uint32_t level, ItemId item) const;

  bool user_excluded(UserId user) const { return excluded_users_.test(user); }
  bool item_excluded(ItemId item) const { return excluded_items_.test(item); }
  const DynamicBitset& excluded_users() const { return excluded_users_; }
  const DynamicBitset& excluded_items() const { return excluded_items_; }

  int feedback(UserId user, ItemId item) const;

  // Coin statistics over exploration likes.
  std::uint64_t coin_draws() const { return coin_draws_; }
  std::uint64_t coin_heads() const { return coin_heads_; }

 private:
  struct Level {
    ItemId representative;
    DynamicBitset removed;
    std::unordered_map<ItemId, std::uint32_t> dislikes;
  };
  struct UserState {
    std::uint32_t level = 0;
    DynamicBitset observed;
    DynamicBitset liked;
  };

  const Level& level_at(std::uint32_t level) const;
  UserState& user_state(UserId user);

  OrcaStarOptions options_;
  std::shared_ptr<RecommendationHistory> history_;
  RngStream rng_;
  std::vector<Level> levels_;
  std::vector<UserState> users_;
  DynamicBitset excluded_users_;
  DynamicBitset excluded_items_;
  DynamicBitset all_items_;
  PendingPair pending_;
  DynamicBitset candidates_;
  DynamicBitset scratch_;
  std::uint64_t coin_draws_ = 0;
  std::uint64_t coin_heads_ = 0;
};

/// Number of doubling slots for M users: floor(log2(M) + 1).
std::uint32_t doubling_slots(std::size_t users);

/// Removes the psi parameter by cycling over instances with psi = 2^a,
/// a = 1..A, moving to the next instance after every mistake. All instances
/// share the recommendation history; only the active one learns.
class OrcaStarDoubling final : public Learner {
 public:
  // users == 0: A grows with the number of distinct users seen so far.
  OrcaStarDoubling(ExclusionVariant variant, TieBreakPolicy tie_break, std::uint64_t seed,
                   std::shared_ptr<RecommendationHistory> history, std::size_t users = 0);

  Recommendation recommend(UserId user, const DynamicBitset& inventory) override;
  void observe(UserId user, ItemId item, bool liked) override;

  nlohmann::json snapshot() const override;
  std::string name() const override { return "orca-star-doubling"; }

  std::uint32_t slots() const { return static_cast<std::uint32_t>(instances_.size()); }
  // 1-based index of the active instance.
  std::uint32_t active() const { return active_; }
  const OrcaStar& instance(std::uint32_t slot) const { return *instances_.at(slot - 1); }

 private:
  void grow_to(std::uint32_t slots);

  ExclusionVariant variant_;
  TieBreakPolicy tie_break_;
  std::uint64_t seed_;
  std::shared_ptr<RecommendationHistory> history_;
  bool lazy_;
  DynamicBitset seen_users_;
  std::size_t distinct_users_ = 0;
  std::vector<std::unique_ptr<OrcaStar>> instances_;
  std::uint32_t active_ = 1;
};

}  // namespace orcalab
