#include "orcalab/learner.hpp"

#include <string>

namespace orcalab {

void PendingPair::open(UserId user, const Recommendation& rec) {
  if (pending_) throw ProtocolError("recommend called twice without observe");
  pending_.emplace(user, rec);
}

Recommendation PendingPair::close(UserId user, ItemId item) {
  if (!pending_) throw ProtocolError("observe called without a pending recommendation");
  const auto [pending_user, rec] = *pending_;
  if (pending_user != user || rec.item != item) {
    throw ProtocolError("observe(" + std::to_string(user) + ", " + std::to_string(item) +
                        ") does not match pending recommendation (" + std::to_string(pending_user) +
                        ", " + std::to_string(rec.item) + ")");
  }
  pending_.reset();
  return rec;
}

void unrecommended_items(const DynamicBitset& inventory, const DynamicBitset& recommended, UserId user,
                         DynamicBitset& out) {
  if (!difference_into(inventory, recommended, nullptr, out)) {
    throw ExhaustedUserError("user " + std::to_string(user) + " has no unrecommended item in the inventory");
  }
}

}  // namespace orcalab
