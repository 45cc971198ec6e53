#include "orcalab/fused.hpp"

namespace orcalab {

FusedLearner::FusedLearner(std::string name, std::unique_ptr<Learner> first, std::unique_ptr<Learner> second,
                           bool share_feedback)
    : name_(std::move(name)), learners_{std::move(first), std::move(second)}, share_feedback_(share_feedback) {
  if (!learners_[0] || !learners_[1]) throw ParameterError("fused learner needs two instances");
}

Recommendation FusedLearner::recommend(UserId user, const DynamicBitset& inventory) {
  Recommendation rec = learners_[flag_]->recommend(user, inventory);
  rec.instance = static_cast<std::uint32_t>(flag_);
  return rec;
}

void FusedLearner::observe(UserId user, ItemId item, bool liked) {
  learners_[flag_]->observe(user, item, liked);
  if (share_feedback_) learners_[1 - flag_]->log_feedback(user, item, liked);
  if (!liked) flag_ = 1 - flag_;
}

void FusedLearner::log_feedback(UserId user, ItemId item, bool liked) {
  learners_[0]->log_feedback(user, item, liked);
  learners_[1]->log_feedback(user, item, liked);
}

nlohmann::json FusedLearner::snapshot() const {
  return {{"mode", name_},
          {"flag", flag_},
          {"share_feedback", share_feedback_},
          {"instances", {learners_[0]->snapshot(), learners_[1]->snapshot()}}};
}

RandomLearner::RandomLearner(std::uint64_t seed, std::shared_ptr<RecommendationHistory> history)
    : history_(std::move(history)), rng_(seed) {}

Recommendation RandomLearner::recommend(UserId user, const DynamicBitset& inventory) {
  unrecommended_items(inventory, history_->recommended(user), user, candidates_);
  Recommendation rec;
  rec.item = static_cast<ItemId>(candidates_.nth_set(rng_.uniform_index(candidates_.count())));
  pending_.open(user, rec);
  return rec;
}

void RandomLearner::observe(UserId user, ItemId item, bool liked) {
  pending_.close(user, item);
  history_->record(user, item, liked);
}

PopularityLearner::PopularityLearner(std::shared_ptr<RecommendationHistory> history)
    : history_(std::move(history)) {}

Recommendation PopularityLearner::recommend(UserId user, const DynamicBitset& inventory) {
  unrecommended_items(inventory, history_->recommended(user), user, candidates_);
  Recommendation rec;
  rec.item = choose(TieBreakPolicy::MostPopular, candidates_, history_->popularity());
  pending_.open(user, rec);
  return rec;
}

void PopularityLearner::observe(UserId user, ItemId item, bool liked) {
  pending_.close(user, item);
  history_->record(user, item, liked);
}

}  // namespace orcalab
