#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "orcalab/core_model.hpp"

namespace orcalab {

struct Recommendation {
  ItemId item = kNoItem;
  Branch branch = Branch::Baseline;
  std::uint32_t level = 0;     // pool level k on Line 3 (ORCA) / Line 5 (ORCA*)
  std::uint32_t instance = 0;  // which sub-learner chose the item
};

/// Online recommender under the no-repetition constraint.
///
/// Every recommend() must be followed by exactly one observe() for the same
/// (user, item) pair. observe() records the pair in the shared history.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual Recommendation recommend(UserId user, const DynamicBitset& inventory) = 0;
  virtual void observe(UserId user, ItemId item, bool liked) = 0;

  // Record feedback that a sibling instance obtained. Only used when fused
  // learners run with feedback sharing; default ignores it.
  virtual void log_feedback(UserId /*user*/, ItemId /*item*/, bool /*liked*/) {}

  virtual nlohmann::json snapshot() const = 0;
  virtual std::string name() const = 0;
};

/// Tracks the recommend/observe pairing shared by all learners.
class PendingPair {
 public:
  void open(UserId user, const Recommendation& rec);
  // Throws ProtocolError unless (user, item) matches the open recommendation.
  Recommendation close(UserId user, ItemId item);
  bool is_open() const { return pending_.has_value(); }

 private:
  std::optional<std::pair<UserId, Recommendation>> pending_;
};

/// Candidates R = inventory minus items already recommended to the user.
/// Throws ExhaustedUserError when empty.
void unrecommended_items(const DynamicBitset& inventory, const DynamicBitset& recommended,
                         UserId user, DynamicBitset& out);

}  // namespace orcalab
