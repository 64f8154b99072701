#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagtrace/timeutil.hpp"

namespace tagtrace {

/// Dense integer handle for an interned entity. The tag type keeps user, item
/// and tag handles from being mixed up.
template <class Kind>
struct EntityId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const noexcept { return value; }
  friend constexpr auto operator<=>(EntityId, EntityId) = default;
};

using UserId = EntityId<struct UserKind>;
using ItemId = EntityId<struct ItemKind>;
using TagId = EntityId<struct TagKind>;

/// One tag assignment: `user` attached `tag` to `item` at `timestamp`.
/// `seq` is the record's ordinal in its source and breaks timestamp ties.
struct TagAssignment {
  UserId user;
  TagId tag;
  ItemId item;
  Timestamp timestamp = 0;
  std::uint64_t seq = 0;
};

/// Interned names for one entity kind. Ids are positions in `names()`.
class Dictionary {
 public:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t intern(std::string_view name);
  std::uint32_t find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const { return names_[id]; }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  void reserve(std::size_t n);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
};

struct Vocabulary {
  Dictionary users;
  Dictionary items;
  Dictionary tags;
};

/// Time-ordered tag assignments plus the user, item and tag sets they touch.
///
/// A Trace is immutable once built. Sub-traces produced by `slice` share the
/// parent's vocabulary, so ids remain comparable across a split.
class Trace {
 public:
  /// `assignments` must already be sorted by (timestamp, seq). Throws
  /// EmptyInputError when empty.
  Trace(std::shared_ptr<const Vocabulary> vocabulary, std::vector<TagAssignment> assignments);

  std::span<const TagAssignment> assignments() const noexcept { return assignments_; }
  std::size_t size() const noexcept { return assignments_.size(); }

  /// Sorted ids of the entities present in this trace.
  std::span<const UserId> users() const noexcept { return users_; }
  std::span<const ItemId> items() const noexcept { return items_; }
  std::span<const TagId> tags() const noexcept { return tags_; }

  Timestamp first_timestamp() const noexcept { return assignments_.front().timestamp; }
  Timestamp last_timestamp() const noexcept { return assignments_.back().timestamp; }

  const Vocabulary& vocabulary() const noexcept { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& shared_vocabulary() const noexcept {
    return vocabulary_;
  }

  const std::string& user_name(UserId id) const { return vocabulary_->users.name(id.value); }
  const std::string& item_name(ItemId id) const { return vocabulary_->items.name(id.value); }
  const std::string& tag_name(TagId id) const { return vocabulary_->tags.name(id.value); }

  /// Assignments in [begin, end) as a trace sharing this vocabulary.
  Trace slice(std::size_t begin, std::size_t end) const;

  /// Same records (by name and timestamp) in the same order. `seq` is ignored.
  friend bool operator==(const Trace& a, const Trace& b);

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::vector<TagAssignment> assignments_;
  std::vector<UserId> users_;
  std::vector<ItemId> items_;
  std::vector<TagId> tags_;
};

/// Trims ASCII whitespace and lower-cases ASCII letters. Non-ASCII bytes pass
/// through unchanged.
std::string normalize_tag(std::string_view raw);

std::string_view trim(std::string_view s);

/// Accumulates raw records and produces a canonical Trace.
///
/// `build` sorts by (timestamp, seq), drops exact (user, tag, item, timestamp)
/// duplicates keeping the earliest record, and renumbers ids in order of first
/// appearance so that equal inputs yield identical traces.
class TraceBuilder {
 public:
  enum class AddResult { accepted, malformed, empty_tag, bad_timestamp };

  struct Output {
    Trace trace;
    std::size_t duplicates = 0;
  };

  /// `seq` defaults to the insertion ordinal.
  AddResult add(std::string_view user, std::string_view item, std::string_view tag,
                Timestamp timestamp);
  AddResult add(std::string_view user, std::string_view item, std::string_view tag,
                Timestamp timestamp, std::uint64_t seq);

  std::size_t pending() const noexcept { return records_.size(); }
  void reserve(std::size_t n) { records_.reserve(n); }

  /// Throws EmptyInputError when no record survived. Leaves the builder empty.
  Output build();

 private:
  Vocabulary provisional_;
  std::vector<TagAssignment> records_;
};

/// Per-user view of a trace: the user's library, vocabulary and activity.
struct UserProfile {
  UserId user;
  std::vector<ItemId> items;  // sorted, unique
  std::vector<TagId> tags;    // sorted, unique
  std::size_t assignments = 0;
  Timestamp first_seen = 0;
  Timestamp last_seen = 0;
};

/// Profiles for the users active in some set of assignments, ordered by user id,
/// with O(1) lookup by id.
class ProfileSet {
 public:
  ProfileSet() = default;
  ProfileSet(std::vector<UserProfile> profiles, std::size_t user_universe);

  const UserProfile* find(UserId user) const noexcept;
  const UserProfile& at(UserId user) const;

  std::size_t size() const noexcept { return profiles_.size(); }
  bool empty() const noexcept { return profiles_.empty(); }
  std::size_t user_universe() const noexcept { return slot_.size(); }

  auto begin() const noexcept { return profiles_.begin(); }
  auto end() const noexcept { return profiles_.end(); }
  const UserProfile& operator[](std::size_t i) const { return profiles_[i]; }

 private:
  std::vector<UserProfile> profiles_;
  std::vector<std::uint32_t> slot_;
};

ProfileSet build_profiles(const Trace& trace);

/// Profiles over an arbitrary run of assignments whose user ids are below
/// `user_universe`.
ProfileSet build_profiles(std::span<const TagAssignment> assignments, std::size_t user_universe);

}  // namespace tagtrace
