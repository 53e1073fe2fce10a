#include "lf/index_set.hpp"

#include <algorithm>
#include <numeric>

#include "lf/error.hpp"

namespace lf {

IndexSet::IndexSet(std::vector<bool> prefix, std::vector<bool> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) fail(ErrorCode::kInvalidArgument, "index set cycle must be non-empty");
  canonicalize();
}

IndexSet IndexSet::finite(const std::vector<std::uint64_t>& members) {
  std::uint64_t top = 0;
  for (auto m : members) top = std::max(top, m + 1);
  std::vector<bool> prefix(top, false);
  for (auto m : members) prefix[m] = true;
  return IndexSet(std::move(prefix), {false});
}

IndexSet IndexSet::residues(std::uint64_t modulus, const std::vector<std::uint64_t>& residues) {
  if (modulus == 0) fail(ErrorCode::kInvalidArgument, "modulus must be positive");
  std::vector<bool> cycle(modulus, false);
  for (auto r : residues) cycle[r % modulus] = true;
  return IndexSet({}, std::move(cycle));
}

void IndexSet::canonicalize() {
  const std::size_t n = cycle_.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = cycle_[i] == cycle_[i - d];
    if (ok) {
      cycle_.resize(d);
      break;
    }
  }
  // Fold prefix entries that agree with the cycle into it.
  while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
    prefix_.pop_back();
    std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
  }
}

bool IndexSet::contains(std::uint64_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return cycle_[(i - prefix_.size()) % cycle_.size()];
}

bool IndexSet::is_finite() const {
  return std::none_of(cycle_.begin(), cycle_.end(), [](bool b) { return b; });
}

bool IndexSet::is_empty() const {
  return is_finite() && std::none_of(prefix_.begin(), prefix_.end(), [](bool b) { return b; });
}

std::vector<std::uint64_t> IndexSet::members_below(std::uint64_t bound) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < bound; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::optional<std::uint64_t> IndexSet::next_member(std::uint64_t from) const {
  const std::uint64_t limit = std::max<std::uint64_t>(from, prefix_.size()) + cycle_.size();
  for (std::uint64_t i = from; i < limit; ++i) {
    if (contains(i)) return i;
  }
  return std::nullopt;
}

template <typename Op>
IndexSet IndexSet::combine(const IndexSet& o, Op op) const {
  const std::size_t p = std::max(prefix_.size(), o.prefix_.size());
  const std::size_t c = std::lcm(cycle_.size(), o.cycle_.size());
  std::vector<bool> prefix(p);
  std::vector<bool> cycle(c);
  for (std::size_t i = 0; i < p; ++i) prefix[i] = op(contains(i), o.contains(i));
  for (std::size_t i = 0; i < c; ++i) cycle[i] = op(contains(p + i), o.contains(p + i));
  return IndexSet(std::move(prefix), std::move(cycle));
}

IndexSet IndexSet::intersect(const IndexSet& o) const {
  return combine(o, [](bool a, bool b) { return a && b; });
}

IndexSet IndexSet::unite(const IndexSet& o) const {
  return combine(o, [](bool a, bool b) { return a || b; });
}

IndexSet IndexSet::minus(const IndexSet& o) const {
  return combine(o, [](bool a, bool b) { return a && !b; });
}

IndexSet IndexSet::complement() const {
  return combine(*this, [](bool a, bool) { return !a; });
}

}  // namespace lf
