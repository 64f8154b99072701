#include "tagtrace/trace.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "tagtrace/error.hpp"

namespace tagtrace {

// ---------------------------------------------------------------------------
// Dictionary

std::uint32_t Dictionary::intern(std::string_view name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::uint32_t Dictionary::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? npos : it->second;
}

void Dictionary::reserve(std::size_t n) {
  names_.reserve(n);
  index_.reserve(n);
}

// ---------------------------------------------------------------------------
// Trace

namespace {

template <class Id>
std::vector<Id> present_ids(std::span<const TagAssignment> records, std::size_t universe,
                            Id TagAssignment::*member) {
  std::vector<char> seen(universe, 0);
  for (const auto& a : records) seen[(a.*member).index()] = 1;
  std::vector<Id> ids;
  for (std::size_t i = 0; i < universe; ++i) {
    if (seen[i]) ids.push_back(Id{static_cast<std::uint32_t>(i)});
  }
  return ids;
}

bool time_order(const TagAssignment& a, const TagAssignment& b) {
  return std::tie(a.timestamp, a.seq) < std::tie(b.timestamp, b.seq);
}

}  // namespace

Trace::Trace(std::shared_ptr<const Vocabulary> vocabulary, std::vector<TagAssignment> assignments)
    : vocabulary_(std::move(vocabulary)), assignments_(std::move(assignments)) {
  if (assignments_.empty()) throw EmptyInputError("a trace needs at least one assignment");
  users_ = present_ids(std::span<const TagAssignment>(assignments_), vocabulary_->users.size(),
                       &TagAssignment::user);
  items_ = present_ids(std::span<const TagAssignment>(assignments_), vocabulary_->items.size(),
                       &TagAssignment::item);
  tags_ = present_ids(std::span<const TagAssignment>(assignments_), vocabulary_->tags.size(),
                      &TagAssignment::tag);
}

Trace Trace::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, assignments_.size());
  if (begin >= end) throw EmptyInputError("empty trace slice");
  return Trace(vocabulary_, std::vector<TagAssignment>(assignments_.begin() + begin,
                                                       assignments_.begin() + end));
}

bool operator==(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.assignments_[i];
    const auto& y = b.assignments_[i];
    if (x.timestamp != y.timestamp) return false;
    if (a.user_name(x.user) != b.user_name(y.user)) return false;
    if (a.item_name(x.item) != b.item_name(y.item)) return false;
    if (a.tag_name(x.tag) != b.tag_name(y.tag)) return false;
  }
  return a.users_.size() == b.users_.size() && a.items_.size() == b.items_.size() &&
         a.tags_.size() == b.tags_.size();
}

// ---------------------------------------------------------------------------
// Normalization

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::string normalize_tag(std::string_view raw) {
  std::string out(trim(raw));
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// ---------------------------------------------------------------------------
// TraceBuilder

TraceBuilder::AddResult TraceBuilder::add(std::string_view user, std::string_view item,
                                          std::string_view tag, Timestamp timestamp) {
  return add(user, item, tag, timestamp, records_.size());
}

TraceBuilder::AddResult TraceBuilder::add(std::string_view user, std::string_view item,
                                          std::string_view tag, Timestamp timestamp,
                                          std::uint64_t seq) {
  user = trim(user);
  item = trim(item);
  if (user.empty() || item.empty()) return AddResult::malformed;
  const std::string normalized = normalize_tag(tag);
  if (normalized.empty()) return AddResult::empty_tag;
  if (timestamp < 0) return AddResult::bad_timestamp;

  TagAssignment a;
  a.user = UserId{provisional_.users.intern(user)};
  a.item = ItemId{provisional_.items.intern(item)};
  a.tag = TagId{provisional_.tags.intern(normalized)};
  a.timestamp = timestamp;
  a.seq = seq;
  records_.push_back(a);
  return AddResult::accepted;
}

namespace {

// Within each run of equal timestamps, marks every record that repeats an
// earlier (by seq) record's user, item and tag.
std::size_t drop_duplicates(std::vector<TagAssignment>& records) {
  std::vector<char> drop(records.size(), 0);
  std::vector<std::size_t> run;
  std::size_t dropped = 0;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin + 1;
    while (end < records.size() && records[end].timestamp == records[begin].timestamp) ++end;
    if (end - begin > 1) {
      run.resize(end - begin);
      std::iota(run.begin(), run.end(), begin);
      std::sort(run.begin(), run.end(), [&](std::size_t i, std::size_t j) {
        const auto& a = records[i];
        const auto& b = records[j];
        return std::tie(a.user, a.item, a.tag, a.seq) < std::tie(b.user, b.item, b.tag, b.seq);
      });
      for (std::size_t k = 1; k < run.size(); ++k) {
        const auto& prev = records[run[k - 1]];
        const auto& cur = records[run[k]];
        if (prev.user == cur.user && prev.item == cur.item && prev.tag == cur.tag) {
          drop[run[k]] = 1;
          ++dropped;
        }
      }
    }
    begin = end;
  }
  if (dropped == 0) return 0;
  std::size_t out = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!drop[i]) records[out++] = records[i];
  }
  records.resize(out);
  return dropped;
}

// Reassigns ids of one kind in order of first appearance, interning names into
// `target` in that order.
template <class Id>
void renumber(std::vector<TagAssignment>& records, Id TagAssignment::*member,
              const Dictionary& provisional, Dictionary& target) {
  std::vector<std::uint32_t> remap(provisional.size(), Dictionary::npos);
  target.reserve(provisional.size());
  for (auto& a : records) {
    auto& id = (a.*member).value;
    if (remap[id] == Dictionary::npos) remap[id] = target.intern(provisional.name(id));
    id = remap[id];
  }
}

}  // namespace

TraceBuilder::Output TraceBuilder::build() {
  std::vector<TagAssignment> records = std::move(records_);
  records_.clear();
  Vocabulary provisional = std::move(provisional_);
  provisional_ = Vocabulary{};

  if (records.empty()) throw EmptyInputError("no parseable tag assignments");

  std::sort(records.begin(), records.end(), time_order);
  const std::size_t duplicates = drop_duplicates(records);

  auto vocabulary = std::make_shared<Vocabulary>();
  renumber(records, &TagAssignment::user, provisional.users, vocabulary->users);
  renumber(records, &TagAssignment::item, provisional.items, vocabulary->items);
  renumber(records, &TagAssignment::tag, provisional.tags, vocabulary->tags);

  return Output{Trace(std::move(vocabulary), std::move(records)), duplicates};
}

// ---------------------------------------------------------------------------
// Profiles

ProfileSet::ProfileSet(std::vector<UserProfile> profiles, std::size_t user_universe)
    : profiles_(std::move(profiles)), slot_(user_universe, Dictionary::npos) {
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    slot_[profiles_[i].user.index()] = static_cast<std::uint32_t>(i);
  }
}

const UserProfile* ProfileSet::find(UserId user) const noexcept {
  if (user.index() >= slot_.size()) return nullptr;
  const auto slot = slot_[user.index()];
  return slot == Dictionary::npos ? nullptr : &profiles_[slot];
}

const UserProfile& ProfileSet::at(UserId user) const {
  const auto* p = find(user);
  if (p == nullptr) throw ColdStartError("user has no profile");
  return *p;
}

ProfileSet build_profiles(std::span<const TagAssignment> assignments, std::size_t user_universe) {
  // Bucket assignment indices by user (counting sort keeps each bucket in trace order).
  std::vector<std::size_t> offset(user_universe + 1, 0);
  for (const auto& a : assignments) ++offset[a.user.index() + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<std::uint32_t> order(assignments.size());
  {
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      order[cursor[assignments[i].user.index()]++] = static_cast<std::uint32_t>(i);
    }
  }

  std::vector<UserProfile> profiles;
  for (std::size_t u = 0; u < user_universe; ++u) {
    const std::size_t begin = offset[u];
    const std::size_t end = offset[u + 1];
    if (begin == end) continue;
    UserProfile p;
    p.user = UserId{static_cast<std::uint32_t>(u)};
    p.assignments = end - begin;
    p.first_seen = assignments[order[begin]].timestamp;
    p.last_seen = assignments[order[end - 1]].timestamp;
    p.items.reserve(end - begin);
    p.tags.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      const auto& a = assignments[order[k]];
      p.items.push_back(a.item);
      p.tags.push_back(a.tag);
    }
    std::sort(p.items.begin(), p.items.end());
    p.items.erase(std::unique(p.items.begin(), p.items.end()), p.items.end());
    p.items.shrink_to_fit();
    std::sort(p.tags.begin(), p.tags.end());
    p.tags.erase(std::unique(p.tags.begin(), p.tags.end()), p.tags.end());
    p.tags.shrink_to_fit();
    profiles.push_back(std::move(p));
  }
  return ProfileSet(std::move(profiles), user_universe);
}

ProfileSet build_profiles(const Trace& trace) {
  return build_profiles(trace.assignments(), trace.vocabulary().users.size());
}

}  // namespace tagtrace
