#include "orcalab/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace orcalab {

namespace {

template <typename T>
void shuffle(std::vector<T>& v, RngStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.uniform_index(i)]);
  }
}

// Distinct binary C x D blocks exist iff C <= 2^D and D <= 2^C.
bool distinct_blocks_feasible(std::size_t c, std::size_t d) {
  auto fits = [](std::size_t count, std::size_t bits) { return bits >= 63 || count <= (std::size_t{1} << bits); };
  return fits(c, d) && fits(d, c);
}

using Blocks = std::vector<std::vector<std::uint8_t>>;

// First duplicate pair (a < b) among rows, or {0, 0}.
std::pair<std::size_t, std::size_t> duplicate_rows(const Blocks& b) {
  for (std::size_t x = 0; x < b.size(); ++x) {
    for (std::size_t y = x + 1; y < b.size(); ++y) {
      if (b[x] == b[y]) return {x, y};
    }
  }
  return {0, 0};
}

std::pair<std::size_t, std::size_t> duplicate_columns(const Blocks& b) {
  const std::size_t cols = b.front().size();
  for (std::size_t x = 0; x < cols; ++x) {
    for (std::size_t y = x + 1; y < cols; ++y) {
      bool same = true;
      for (const auto& row : b) {
        if (row[x] != row[y]) {
          same = false;
          break;
        }
      }
      if (same) return {x, y};
    }
  }
  return {0, 0};
}

std::vector<std::uint32_t> class_assignment(std::size_t n, std::size_t classes, RngStream& rng) {
  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint32_t>(i < classes ? i : rng.uniform_index(classes));
  }
  shuffle(out, rng);
  return out;
}

}  // namespace

BiclusteredMatrix gen_biclustered(std::size_t users, std::size_t items, std::size_t row_classes,
                                  std::size_t column_classes, double density, std::uint64_t seed) {
  if (row_classes == 0 || column_classes == 0 || row_classes > users || column_classes > items) {
    throw ParameterError("need 1 <= C <= M and 1 <= D <= N");
  }
  if (!(density >= 0.0 && density <= 1.0)) throw ParameterError("density must lie in [0, 1]");
  if (!distinct_blocks_feasible(row_classes, column_classes)) {
    throw ParameterError("no binary " + std::to_string(row_classes) + "x" + std::to_string(column_classes) +
                         " block matrix has distinct rows and columns");
  }

  RngStream rng(seed);
  Blocks blocks(row_classes, std::vector<std::uint8_t>(column_classes));
  for (auto& row : blocks) {
    for (auto& cell : row) cell = rng.bernoulli(density) ? 1 : 0;
  }
  // Repair: flip one cell of a duplicate until rows and columns are distinct.
  const std::size_t max_flips = 64 * (row_classes + column_classes) * (row_classes + column_classes);
  std::size_t flips = 0;
  while (true) {
    auto [ra, rb] = duplicate_rows(blocks);
    if (ra != rb) {
      blocks[rb][rng.uniform_index(column_classes)] ^= 1;
    } else {
      auto [ca, cb] = duplicate_columns(blocks);
      if (ca == cb) break;
      blocks[rng.uniform_index(row_classes)][cb] ^= 1;
    }
    if (++flips > max_flips) {
      // Start over from a fresh uniform draw; feasibility guarantees success eventually.
      for (auto& row : blocks) {
        for (auto& cell : row) cell = rng.bernoulli(0.5) ? 1 : 0;
      }
      flips = 0;
    }
  }

  BiclusterSpec spec{row_classes, column_classes, class_assignment(users, row_classes, rng),
                     class_assignment(items, column_classes, rng), std::move(blocks)};
  PreferenceMatrix m(users, items);
  for (std::size_t i = 0; i < users; ++i) {
    const auto& block_row = spec.blocks[spec.row_class[i]];
    for (std::size_t j = 0; j < items; ++j) {
      if (block_row[spec.column_class[j]] != 0) m.set(i, j, true);
    }
  }
  return {std::move(m), std::move(spec)};
}

PreferenceMatrix perturb_exact(const PreferenceMatrix& truth, std::size_t flips, std::uint64_t seed) {
  const std::size_t total = truth.users() * truth.items();
  if (flips > total) throw ParameterError("flip count exceeds matrix size");
  RngStream rng(seed);
  // Floyd's sampling of k distinct cells; sample the complement when denser.
  const bool complement = flips * 2 > total;
  const std::size_t k = complement ? total - flips : flips;
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(k * 2);
  for (std::size_t r = total - k; r < total; ++r) {
    const std::size_t pick = rng.uniform_index(r + 1);
    if (!chosen.insert(pick).second) chosen.insert(r);
  }
  PreferenceMatrix out = truth;
  for (std::size_t cell = 0; cell < total; ++cell) {
    const bool flip = chosen.contains(cell) != complement;
    if (flip) {
      const std::size_t i = cell / truth.items();
      const std::size_t j = cell % truth.items();
      out.set(i, j, !truth.at(i, j));
    }
  }
  return out;
}

PreferenceMatrix perturb_bernoulli(const PreferenceMatrix& truth, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("flip probability must lie in [0, 1]");
  RngStream rng(seed);
  PreferenceMatrix out = truth;
  for (std::size_t i = 0; i < truth.users(); ++i) {
    for (std::size_t j = 0; j < truth.items(); ++j) {
      if (rng.bernoulli(p)) out.set(i, j, !truth.at(i, j));
    }
  }
  return out;
}

PerturbationReport perturbation_report(const PreferenceMatrix& observed, const PreferenceMatrix& truth,
                                       std::span<const UserId> sequence, std::uint32_t psi) {
  if (observed.users() != truth.users() || observed.items() != truth.items()) {
    throw ParameterError("observed and ground-truth matrices differ in shape");
  }
  PerturbationReport r;
  r.psi = psi;
  r.sequence.assign(sequence.begin(), sequence.end());
  r.user_perturbation.assign(observed.users(), 0);
  r.item_perturbation.assign(observed.items(), 0);

  DynamicBitset diff;
  for (std::size_t i = 0; i < observed.users(); ++i) {
    diff = observed.row(i);
    auto dw = diff.words();
    const auto tw = truth.row(i).words();
    for (std::size_t w = 0; w < dw.size(); ++w) dw[w] ^= tw[w];
    r.user_perturbation[i] = diff.count();
    diff.for_each_set([&](std::size_t j) { ++r.item_perturbation[j]; });
  }

  std::vector<std::size_t> queries(observed.users(), 0);
  for (UserId u : sequence) {
    if (u >= observed.users()) throw IndexError("user " + std::to_string(u) + " outside matrix");
    ++queries[u];
  }
  for (std::size_t i = 0; i < observed.users(); ++i) {
    const auto flips = static_cast<std::int64_t>(r.user_perturbation[i]);
    const auto likes = static_cast<std::int64_t>(observed.likes_count(i));
    if (flips > 0 && static_cast<std::int64_t>(queries[i]) > likes - 2 * flips) {
      r.bad_users.push_back(static_cast<UserId>(i));
    }
  }
  for (std::size_t j = 0; j < observed.items(); ++j) {
    if (r.item_perturbation[j] > psi) r.bad_items.push_back(static_cast<ItemId>(j));
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::Uniform: return "uniform";
    case SequenceKind::RoundRobin: return "roundrobin";
    case SequenceKind::Blocks: return "blocks";
  }
  return "?";
}

SequenceKind parse_sequence_kind(std::string_view s) {
  if (s == "uniform") return SequenceKind::Uniform;
  if (s == "roundrobin") return SequenceKind::RoundRobin;
  if (s == "blocks") return SequenceKind::Blocks;
  throw ParameterError("unknown sequence kind '" + std::string(s) + "'");
}

std::vector<UserId> user_sequence(SequenceKind kind, std::size_t users, std::size_t rounds,
                                  const InventorySchedule& inventory, std::uint64_t seed,
                                  std::size_t block_length) {
  if (users == 0) throw ParameterError("user sequence needs at least one user");
  std::vector<UserId> seq;
  seq.reserve(rounds);
  std::vector<std::size_t> queries(users, 0);
  InventorySchedule::Cursor cursor(inventory);

  switch (kind) {
    case SequenceKind::Uniform: {
      RngStream rng(seed);
      std::vector<UserId> available;
      std::vector<UserId> exhausted;
      for (std::size_t u = 0; u < users; ++u) available.push_back(static_cast<UserId>(u));
      std::size_t budget = 0;
      for (std::size_t t = 0; t < rounds; ++t) {
        cursor.advance_to(t);
        if (cursor.size() != budget) {
          budget = cursor.size();
          for (UserId u : exhausted) {
            if (queries[u] < budget) available.push_back(u);
          }
          std::erase_if(exhausted, [&](UserId u) { return queries[u] < budget; });
        }
        if (available.empty()) break;
        const std::size_t pos = rng.uniform_index(available.size());
        const UserId u = available[pos];
        seq.push_back(u);
        if (++queries[u] >= budget) {
          available[pos] = available.back();
          available.pop_back();
          exhausted.push_back(u);
        }
      }
      break;
    }
    case SequenceKind::RoundRobin: {
      std::size_t next = 0;
      for (std::size_t t = 0; t < rounds; ++t) {
        cursor.advance_to(t);
        const std::size_t budget = cursor.size();
        std::size_t tried = 0;
        while (tried < users && queries[next] >= budget) {
          next = (next + 1) % users;
          ++tried;
        }
        if (tried == users) break;
        seq.push_back(static_cast<UserId>(next));
        ++queries[next];
        next = (next + 1) % users;
      }
      break;
    }
    case SequenceKind::Blocks: {
      const std::size_t len = block_length != 0 ? block_length : (rounds + users - 1) / users;
      std::size_t user = 0;
      std::size_t in_block = 0;
      std::size_t skipped = 0;
      for (std::size_t t = 0; t < rounds;) {
        cursor.advance_to(t);
        const std::size_t budget = cursor.size();
        if (in_block == len || queries[user] >= budget) {
          user = (user + 1) % users;
          in_block = 0;
          if (++skipped > users) break;
          continue;
        }
        skipped = 0;
        seq.push_back(static_cast<UserId>(user));
        ++queries[user];
        ++in_block;
        ++t;
      }
      break;
    }
  }
  return seq;
}

// ---------------------------------------------------------------------------

AdversaryEnv::AdversaryEnv(std::size_t users, std::size_t items, std::size_t blocks)
    : users_(users), items_(items), blocks_(blocks) {
  if (users == 0 || blocks == 0 || blocks > items || items % blocks != 0) {
    throw ParameterError("adversary needs users >= 1 and a block count E dividing N");
  }
  consistent_.assign(users, DynamicBitset(blocks, true));
  answered_.assign(users, DynamicBitset(items));
  queries_.assign(users, 0);
}

bool AdversaryEnv::answer(UserId user, ItemId item) {
  if (user >= users_ || item >= items_) throw IndexError("adversary query out of range");
  if (queries_[user] >= blocks_) {
    throw ScheduleError("user " + std::to_string(user) + " already queried E=" + std::to_string(blocks_) + " times");
  }
  if (answered_[user].test(item)) {
    throw ScheduleError("item " + std::to_string(item) + " already answered for user " + std::to_string(user));
  }
  answered_[user].set(item);
  ++queries_[user];

  DynamicBitset& alive = consistent_[user];
  const std::size_t b = block_of(item);
  // Dislike whenever some other block stays consistent; ruling b out keeps
  // every earlier answer consistent.
  const std::size_t alive_count = alive.count();
  if (alive_count >= 2 || (alive_count == 1 && !alive.test(b))) {
    alive.reset(b);
    return false;
  }
  return true;
}

std::size_t AdversaryEnv::assignment(UserId user) const {
  return consistent_.at(user).find_first();
}

PreferenceMatrix AdversaryEnv::realized_matrix() const {
  PreferenceMatrix m(users_, items_);
  const std::size_t size = block_size();
  for (std::size_t i = 0; i < users_; ++i) {
    const std::size_t a = assignment(static_cast<UserId>(i));
    for (std::size_t j = a * size; j < (a + 1) * size; ++j) m.set(i, j, true);
  }
  return m;
}

}  // namespace orcalab
