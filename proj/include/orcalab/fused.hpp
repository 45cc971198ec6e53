#pragma once

#include <memory>
#include <string>

#include "orcalab/learner.hpp"

namespace orcalab {

/// Runs two learners side by side behind a 0/1 flag. The flagged learner
/// recommends and updates; the flag flips iff the feedback is a dislike.
/// The learners share only their recommendation history, unless
/// share_feedback is set, in which case the idle learner also logs each bit.
class FusedLearner final : public Learner {
 public:
  FusedLearner(std::string name, std::unique_ptr<Learner> first, std::unique_ptr<Learner> second,
               bool share_feedback = false);

  Recommendation recommend(UserId user, const DynamicBitset& inventory) override;
  void observe(UserId user, ItemId item, bool liked) override;
  void log_feedback(UserId user, ItemId item, bool liked) override;

  nlohmann::json snapshot() const override;
  std::string name() const override { return name_; }

  int flag() const { return flag_; }
  const Learner& first() const { return *learners_[0]; }
  const Learner& second() const { return *learners_[1]; }

 private:
  std::string name_;
  std::unique_ptr<Learner> learners_[2];
  bool share_feedback_;
  int flag_ = 0;
};

/// Uniform draw from the unrecommended items.
class RandomLearner final : public Learner {
 public:
  RandomLearner(std::uint64_t seed, std::shared_ptr<RecommendationHistory> history);

  Recommendation recommend(UserId user, const DynamicBitset& inventory) override;
  void observe(UserId user, ItemId item, bool liked) override;
  nlohmann::json snapshot() const override { return {{"mode", "random"}}; }
  std::string name() const override { return "random"; }

 private:
  std::shared_ptr<RecommendationHistory> history_;
  RngStream rng_;
  PendingPair pending_;
  DynamicBitset candidates_;
};

/// Most-liked-so-far unrecommended item, ties to the lowest index.
class PopularityLearner final : public Learner {
 public:
  explicit PopularityLearner(std::shared_ptr<RecommendationHistory> history);

  Recommendation recommend(UserId user, const DynamicBitset& inventory) override;
  void observe(UserId user, ItemId item, bool liked) override;
  nlohmann::json snapshot() const override { return {{"mode", "pop"}}; }
  std::string name() const override { return "pop"; }

 private:
  std::shared_ptr<RecommendationHistory> history_;
  PendingPair pending_;
  DynamicBitset candidates_;
};

}  // namespace orcalab
