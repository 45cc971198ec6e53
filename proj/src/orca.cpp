#include "orcalab/orca.hpp"

#include <string>

namespace orcalab {

Orca::Orca(OrcaOptions options, std::shared_ptr<RecommendationHistory> history)
    : options_(options), history_(std::move(history)), rng_(options.seed) {
  if (!history_) throw ParameterError("Orca needs a recommendation history");
}

std::string Orca::name() const {
  return options_.mode == ClusterMode::UserClusters ? "orca-uc" : "orca-ic";
}

const Orca::Level& Orca::level_at(std::uint32_t level) const {
  if (level == 0 || level > levels_.size()) {
    throw LevelError("level " + std::to_string(level) + " out of range [1, " + std::to_string(levels_.size()) + "]");
  }
  return levels_[level - 1];
}

Orca::UserState& Orca::user_state(UserId user) {
  if (user >= users_.size()) users_.resize(static_cast<std::size_t>(user) + 1);
  return users_[user];
}

std::uint32_t Orca::user_level(UserId user) const {
  return user < users_.size() ? users_[user].level : 0;
}

int Orca::feedback(UserId user, ItemId item) const {
  if (user >= users_.size() || !users_[user].observed.test(item)) return -1;
  return users_[user].liked.test(item) ? 1 : 0;
}

Membership Orca::membership(UserId user, std::uint32_t level) const {
  const Level& lv = level_at(level);
  if (options_.mode == ClusterMode::ItemClusters) {
    const int f = feedback(user, lv.representative);
    if (f < 0) return Membership::Unknown;
    return f == 1 ? Membership::Member : Membership::NonMember;
  }
  bool unknown = false;
  for (std::uint32_t l = 1; l <= level; ++l) {
    const int expected = lv.signature[l - 1];
    const int f = feedback(user, levels_[l - 1].representative);
    if (expected < 0 || f < 0) {
      unknown = true;
    } else if (expected != f) {
      return Membership::NonMember;
    }
  }
  return unknown ? Membership::Unknown : Membership::Member;
}

Recommendation Orca::recommend(UserId user, const DynamicBitset& inventory) {
  unrecommended_items(inventory, history_->recommended(user), user, candidates_);
  const std::uint32_t level = user_state(user).level;
  const Popularity& popularity = history_->popularity();

  Recommendation rec;
  // Line 3: a confirmed level whose pool still has an unrecommended item.
  // Static inventory only needs k = level; dynamic searches downward and keeps
  // the largest qualifying k. Unknown membership counts as non-membership.
  const std::uint32_t lowest = options_.inventory == InventoryMode::Static ? level : 1;
  for (std::uint32_t k = level; k >= lowest && k > 0; --k) {
    if (membership(user, k) != Membership::Member) continue;
    if (difference_into(candidates_, levels_[k - 1].removed, nullptr, scratch_)) {
      rec.item = choose(options_.tie_break, scratch_, popularity);
      rec.branch = Branch::Line3;
      rec.level = k;
      pending_.open(user, rec);
      return rec;
    }
  }

  if (level != level_count()) {
    // Line 4: move up a level, probing the next representative when possible.
    const ItemId next = levels_[level].representative;
    rec.item = candidates_.test(next) ? next : choose(options_.tie_break, candidates_, popularity);
    rec.branch = Branch::Line4;
  } else {
    // Line 5: explore uniformly; a like creates a new level.
    rec.item = static_cast<ItemId>(candidates_.nth_set(rng_.uniform_index(candidates_.count())));
    rec.branch = Branch::Line5;
  }
  pending_.open(user, rec);
  return rec;
}

void Orca::log_feedback(UserId user, ItemId item, bool liked) {
  UserState& u = user_state(user);
  u.observed.set(item);
  if (liked) {
    u.liked.set(item);
  } else {
    u.liked.reset(item);
  }
}

void Orca::observe(UserId user, ItemId item, bool liked) {
  const Recommendation rec = pending_.close(user, item);
  history_->record(user, item, liked);
  log_feedback(user, item, liked);

  switch (rec.branch) {
    case Branch::Line3:
      // Always removed on a mistake.
      if (!liked) levels_[rec.level - 1].removed.set(item);
      break;
    case Branch::Line4:
      ++user_state(user).level;
      break;
    case Branch::Line5:
      if (liked) create_level(user, item);
      break;
    default:
      throw ProtocolError("unexpected branch for Orca");
  }
}

void Orca::create_level(UserId user, ItemId item) {
  Level lv{item, user, DynamicBitset(history_->items()), {}};
  if (options_.mode == ClusterMode::UserClusters) {
    lv.signature.reserve(levels_.size() + 1);
    for (const Level& prev : levels_) lv.signature.push_back(static_cast<std::int8_t>(feedback(user, prev.representative)));
    lv.signature.push_back(1);
  }
  levels_.push_back(std::move(lv));
  user_state(user).level = level_count();
}

nlohmann::json Orca::snapshot() const {
  nlohmann::json levels = nlohmann::json::array();
  for (const Level& lv : levels_) {
    nlohmann::json j{{"r", lv.representative}, {"c", lv.creator}, {"removed", lv.removed.to_indices()}};
    if (options_.mode == ClusterMode::UserClusters) j["signature"] = lv.signature;
    levels.push_back(std::move(j));
  }
  nlohmann::json user_levels = nlohmann::json::array();
  for (const UserState& u : users_) user_levels.push_back(u.level);
  return {{"mode", options_.mode == ClusterMode::UserClusters ? "UC" : "IC"},
          {"inventory", options_.inventory == InventoryMode::Static ? "static" : "dynamic"},
          {"level_count", level_count()},
          {"levels", std::move(levels)},
          {"user_levels", std::move(user_levels)}};
}

}  // namespace orcalab
