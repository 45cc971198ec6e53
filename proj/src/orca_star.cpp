#include "orcalab/orca_star.hpp"

#include <bit>
#include <string>

namespace orcalab {

OrcaStar::OrcaStar(OrcaStarOptions options, std::shared_ptr<RecommendationHistory> history)
    : options_(options), history_(std::move(history)), rng_(options.seed) {
  if (options_.psi < 2) throw ParameterError("psi must be an integer >= 2, got " + std::to_string(options_.psi));
  if (!history_) throw ParameterError("OrcaStar needs a recommendation history");
  excluded_items_ = DynamicBitset(history_->items());
  all_items_ = DynamicBitset(history_->items(), true);
}

std::string OrcaStar::name() const {
  return options_.variant == ExclusionVariant::UserItem ? "orca-star-uie" : "orca-star-ue";
}

const OrcaStar::Level& OrcaStar::level_at(std::uint32_t level) const {
  if (level == 0 || level > levels_.size()) {
    throw LevelError("level " + std::to_string(level) + " out of range [1, " + std::to_string(levels_.size()) + "]");
  }
  return levels_[level - 1];
}

OrcaStar::UserState& OrcaStar::user_state(UserId user) {
  if (user >= users_.size()) users_.resize(static_cast<std::size_t>(user) + 1);
  return users_[user];
}

std::uint32_t OrcaStar::user_level(UserId user) const {
  return user < users_.size() ? users_[user].level : 0;
}

std::uint32_t OrcaStar::dislike_count(std::uint32_t level, ItemId item) const {
  const auto& counts = level_at(level).dislikes;
  const auto it = counts.find(item);
  return it == counts.end() ? 0 : it->second;
}

int OrcaStar::feedback(UserId user, ItemId item) const {
  if (user >= users_.size() || !users_[user].observed.test(item)) return -1;
  return users_[user].liked.test(item) ? 1 : 0;
}

Recommendation OrcaStar::recommend(UserId user) { return recommend(user, all_items_); }

Recommendation OrcaStar::recommend(UserId user, const DynamicBitset& inventory) {
  unrecommended_items(inventory, history_->recommended(user), user, candidates_);
  const std::uint32_t level = user_state(user).level;
  const Popularity& popularity = history_->popularity();
  const TieBreakPolicy policy = options_.tie_break;

  Recommendation rec;
  if (intersection_any(candidates_, excluded_items_)) {
    // Line 3: flush excluded items first.
    scratch_ = candidates_;
    scratch_ &= excluded_items_;
    rec.item = choose(policy, scratch_, popularity);
    rec.branch = Branch::Line3;
  } else if (excluded_users_.test(user)) {
    rec.item = choose(policy, candidates_, popularity);
    rec.branch = Branch::Line4;
  } else if (level > 0 && feedback(user, levels_[level - 1].representative) == 1 &&
             difference_into(candidates_, levels_[level - 1].removed, nullptr, scratch_)) {
    rec.item = choose(policy, scratch_, popularity);
    rec.branch = Branch::Line5;
    rec.level = level;
  } else if (level != level_count()) {
    const ItemId next = levels_[level].representative;
    rec.item = candidates_.test(next) ? next : choose(policy, candidates_, popularity);
    rec.branch = Branch::Line6;
  } else {
    rec.item = static_cast<ItemId>(candidates_.nth_set(rng_.uniform_index(candidates_.count())));
    rec.branch = Branch::Line7;
  }
  pending_.open(user, rec);
  return rec;
}

void OrcaStar::log_feedback(UserId user, ItemId item, bool liked) {
  UserState& u = user_state(user);
  u.observed.set(item);
  if (liked) {
    u.liked.set(item);
  } else {
    u.liked.reset(item);
  }
}

void OrcaStar::observe(UserId user, ItemId item, bool liked) {
  const Recommendation rec = pending_.close(user, item);
  history_->record(user, item, liked);
  log_feedback(user, item, liked);

  switch (rec.branch) {
    case Branch::Line3:
    case Branch::Line4:
      break;
    case Branch::Line5:
      if (!liked) {
        Level& lv = levels_[rec.level - 1];
        if (++lv.dislikes[item] > 2 * options_.psi) lv.removed.set(item);
      }
      break;
    case Branch::Line6:
      ++user_state(user).level;
      break;
    case Branch::Line7: {
      if (!liked) break;
      ++coin_draws_;
      const bool heads = rng_.bernoulli(1.0 / options_.psi);
      if (heads) {
        ++coin_heads_;
        levels_.push_back(Level{item, DynamicBitset(history_->items()), {}});
        user_state(user).level = level_count();
      } else {
        excluded_users_.set(user);
        if (options_.variant == ExclusionVariant::UserItem) excluded_items_.set(item);
      }
      break;
    }
    default:
      throw ProtocolError("unexpected branch for OrcaStar");
  }
}

nlohmann::json OrcaStar::snapshot() const {
  nlohmann::json levels = nlohmann::json::array();
  for (const Level& lv : levels_) {
    nlohmann::json counters = nlohmann::json::object();
    for (const auto& [item, n] : lv.dislikes) counters[std::to_string(item)] = n;
    levels.push_back({{"r", lv.representative}, {"removed", lv.removed.to_indices()}, {"counters", counters}});
  }
  nlohmann::json user_levels = nlohmann::json::array();
  for (const UserState& u : users_) user_levels.push_back(u.level);
  return {{"mode", options_.variant == ExclusionVariant::UserItem ? "UIE" : "UE"},
          {"psi", options_.psi},
          {"level_count", level_count()},
          {"levels", std::move(levels)},
          {"user_levels", std::move(user_levels)},
          {"excluded_users", excluded_users_.to_indices()},
          {"excluded_items", excluded_items_.to_indices()}};
}

// ---------------------------------------------------------------------------

std::uint32_t doubling_slots(std::size_t users) {
  return users == 0 ? 1 : static_cast<std::uint32_t>(std::bit_width(users));
}

OrcaStarDoubling::OrcaStarDoubling(ExclusionVariant variant, TieBreakPolicy tie_break, std::uint64_t seed,
                                   std::shared_ptr<RecommendationHistory> history, std::size_t users)
    : variant_(variant), tie_break_(tie_break), seed_(seed), history_(std::move(history)), lazy_(users == 0) {
  if (!history_) throw ParameterError("OrcaStarDoubling needs a recommendation history");
  grow_to(doubling_slots(users));
}

void OrcaStarDoubling::grow_to(std::uint32_t slots) {
  while (instances_.size() < slots) {
    const auto a = static_cast<std::uint32_t>(instances_.size() + 1);
    OrcaStarOptions opt{variant_, std::uint32_t{1} << a, tie_break_, mix64(seed_ + a)};
    instances_.push_back(std::make_unique<OrcaStar>(opt, history_));
  }
}

Recommendation OrcaStarDoubling::recommend(UserId user, const DynamicBitset& inventory) {
  if (lazy_ && !seen_users_.test(user)) {
    seen_users_.set(user);
    grow_to(doubling_slots(++distinct_users_));
  }
  Recommendation rec = instances_[active_ - 1]->recommend(user, inventory);
  rec.instance = active_;
  return rec;
}

void OrcaStarDoubling::observe(UserId user, ItemId item, bool liked) {
  instances_[active_ - 1]->observe(user, item, liked);
  if (!liked) active_ = active_ % slots() + 1;
}

nlohmann::json OrcaStarDoubling::snapshot() const {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& inst : instances_) instances.push_back(inst->snapshot());
  return {{"mode", "doubling"}, {"active_instance", active_}, {"instances", std::move(instances)}};
}

}  // namespace orcalab
