#include "lf/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "lf/error.hpp"

namespace lf {

namespace {

class Dsu {
 public:
  explicit Dsu(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;  // the smaller index stays root
  }
  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

 private:
  std::vector<std::size_t> parent_;
};

std::uint64_t span_of(const PartitionDesc& e) { return e.max_offset() + 1; }

// Links every class of `e` inside [0, n) into `full`; links the parts of the
// classes lying in [from, n) into `tail`.
void link_classes(const PartitionDesc& e, std::uint64_t n, std::uint64_t from, Dsu& full, Dsu& tail) {
  std::map<ClassKey, std::uint64_t> last;
  std::map<ClassKey, std::uint64_t> last_tail;
  for (std::uint64_t x = 0; x < n; ++x) {
    const ClassKey k = e.key(static_cast<Point>(x));
    auto [it, fresh] = last.try_emplace(k, x);
    if (!fresh) {
      full.unite(x, it->second);
      it->second = x;
    }
    if (x >= from) {
      auto [jt, fresh_tail] = last_tail.try_emplace(k, x);
      if (!fresh_tail) {
        tail.unite(x, jt->second);
        jt->second = x;
      }
    }
  }
}

}  // namespace

PartitionDesc::PartitionDesc() : tail_{Entry{false, 0}} { finish(); }

PartitionDesc PartitionDesc::one_class() { return from_parts({}, {Entry{true, 0}}); }

PartitionDesc PartitionDesc::mod(std::uint32_t k) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "mod 0 partition");
  std::vector<Entry> tail;
  for (std::uint32_t i = 0; i < k; ++i) tail.push_back({true, i});
  return from_parts({}, std::move(tail));
}

PartitionDesc PartitionDesc::pairs() { return from_parts({}, {Entry{false, 0}, Entry{false, 1}}); }

PartitionDesc PartitionDesc::from_finite_classes(const std::vector<std::vector<Point>>& classes) {
  std::map<Point, std::uint64_t> label;
  std::uint64_t top = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (Point x : classes[i]) {
      if (!label.emplace(x, i).second) fail(ErrorCode::kDuplicatePoint, "point listed in two classes");
      top = std::max<std::uint64_t>(top, x + 1);
    }
  }
  const std::uint64_t c = classes.size();
  std::vector<std::uint64_t> raw(top + 1);
  for (std::uint64_t x = 0; x <= top; ++x) {
    auto it = label.find(static_cast<Point>(x));
    raw[x] = it != label.end() ? it->second : c + x;
  }
  return build(top, 1, raw, [](std::uint64_t) { return false; });
}

PartitionDesc PartitionDesc::from_pairs(const std::vector<std::pair<Point, Point>>& pairs) {
  std::set<Point> points;
  for (const auto& [a, b] : pairs) {
    points.insert(a);
    points.insert(b);
  }
  std::vector<Point> index(points.begin(), points.end());
  auto pos = [&](Point x) { return static_cast<std::size_t>(std::lower_bound(index.begin(), index.end(), x) - index.begin()); };
  Dsu dsu(index.size());
  for (const auto& [a, b] : pairs) dsu.unite(pos(a), pos(b));
  std::map<std::size_t, std::vector<Point>> groups;
  for (std::size_t i = 0; i < index.size(); ++i) groups[dsu.find(i)].push_back(index[i]);
  std::vector<std::vector<Point>> classes;
  for (auto& [root, members] : groups) {
    if (members.size() > 1) classes.push_back(std::move(members));
  }
  return from_finite_classes(classes);
}

PartitionDesc PartitionDesc::build(std::uint64_t prefix_len, std::uint64_t period,
                                   const std::vector<std::uint64_t>& raw,
                                   const std::function<bool(std::uint64_t)>& infinite) {
  if (period == 0 || raw.size() != prefix_len + period) {
    fail(ErrorCode::kInvalidArgument, "partition build: raw labels must cover prefix plus one period");
  }
  std::map<std::uint64_t, std::uint64_t> first;
  std::map<std::uint64_t, std::uint64_t> ids;
  PartitionDesc out;
  out.prefix_.assign(prefix_len, Entry{});
  out.tail_.assign(period, Entry{});
  std::set<std::uint64_t> tail_globals;
  for (std::uint64_t x = 0; x < raw.size(); ++x) {
    const std::uint64_t r = raw[x];
    const std::uint64_t least = first.try_emplace(r, x).first->second;
    Entry e;
    if (infinite(r)) {
      e = {true, ids.try_emplace(r, ids.size()).first->second};
      if (x >= prefix_len) tail_globals.insert(e.value);
    } else {
      e = {false, x < prefix_len ? least : x - least};
    }
    if (x < prefix_len) {
      out.prefix_[x] = e;
    } else {
      out.tail_[x - prefix_len] = e;
    }
  }
  if (tail_globals.size() != ids.size()) {
    fail(ErrorCode::kInvalidArgument, "partition build: an infinite class never recurs in the tail");
  }

  // Shortest period.
  auto& tail = out.tail_;
  for (std::uint64_t d = 1; d < tail.size(); ++d) {
    if (tail.size() % d) continue;
    bool ok = true;
    for (std::uint64_t i = d; i < tail.size() && ok; ++i) ok = tail[i] == tail[i - d];
    if (ok) {
      tail.resize(d);
      break;
    }
  }
  // Shortest preperiod: absorb prefix points the tail already describes.
  auto& prefix = out.prefix_;
  while (!prefix.empty()) {
    const std::uint64_t x = prefix.size() - 1;
    const Entry& e = tail.back();
    Entry as_prefix;
    if (e.global) {
      as_prefix = e;
    } else {
      if (e.value > x) break;
      as_prefix = {false, x - e.value};
    }
    if (!(as_prefix == prefix.back())) break;
    prefix.pop_back();
    std::rotate(tail.rbegin(), tail.rbegin() + 1, tail.rend());
  }
  // Renumber infinite classes by first occurrence.
  std::map<std::uint64_t, std::uint64_t> renumber;
  for (auto* part : {&prefix, &tail}) {
    for (auto& e : *part) {
      if (e.global) e.value = renumber.try_emplace(e.value, renumber.size()).first->second;
    }
  }
  out.finish();
  return out;
}

PartitionDesc PartitionDesc::from_parts(std::vector<Entry> prefix, std::vector<Entry> tail) {
  if (tail.empty()) fail(ErrorCode::kInvalidArgument, "partition needs a non-empty period");
  PartitionDesc raw_form;
  raw_form.prefix_ = std::move(prefix);
  raw_form.tail_ = std::move(tail);
  raw_form.finish();
  const std::uint64_t p = raw_form.period();
  const std::uint64_t start = raw_form.preperiod() + raw_form.max_offset();
  std::vector<std::uint64_t> raw(start + p);
  std::set<std::uint64_t> tail_ids;
  for (std::uint64_t r = 0; r < p; ++r) {
    if (raw_form.tail_[r].global) tail_ids.insert(raw_form.tail_[r].value);
  }
  for (std::uint64_t x = 0; x < raw.size(); ++x) {
    const ClassKey k = raw_form.key(static_cast<Point>(x));
    if (k.infinite) {
      if (!tail_ids.contains(k.value)) {
        fail(ErrorCode::kInvalidArgument, "infinite class id does not occur in the periodic part");
      }
      raw[x] = 2 * k.value + 1;
    } else {
      if (k.value > x) fail(ErrorCode::kInvalidArgument, "finite class named by a larger point");
      const ClassKey anchor = raw_form.key(static_cast<Point>(k.value));
      if (anchor.infinite || anchor.value != k.value) {
        fail(ErrorCode::kInvalidArgument, "finite class anchor is not the least point of its class");
      }
      raw[x] = 2 * k.value;
    }
  }
  return build(start, p, raw, [](std::uint64_t r) { return (r & 1u) != 0; });
}

void PartitionDesc::finish() {
  globals_ = 0;
  max_offset_ = 0;
  for (const auto& e : prefix_) {
    if (e.global) globals_ = std::max(globals_, e.value + 1);
  }
  for (const auto& e : tail_) {
    if (e.global) {
      globals_ = std::max(globals_, e.value + 1);
    } else {
      max_offset_ = std::max(max_offset_, e.value);
    }
  }
}

ClassKey PartitionDesc::key(Point x) const {
  if (x < prefix_.size()) return {prefix_[x].global, prefix_[x].value};
  const Entry& e = tail_[(x - prefix_.size()) % tail_.size()];
  if (e.global) return {true, e.value};
  return {false, x - e.value};
}

std::uint64_t PartitionDesc::finite_class_end(std::uint64_t v) const {
  return std::max<std::uint64_t>(prefix_.size(), v + max_offset_ + 1);
}

std::vector<Point> PartitionDesc::class_members(Point x, Point bound) const {
  const ClassKey k = key(x);
  std::vector<Point> out;
  if (!k.infinite) {
    const std::uint64_t end = std::min<std::uint64_t>(bound, finite_class_end(k.value));
    for (std::uint64_t y = k.value; y < end; ++y) {
      if (key(static_cast<Point>(y)) == k) out.push_back(static_cast<Point>(y));
    }
    return out;
  }
  for (std::uint64_t y = 0; y < std::min<std::uint64_t>(bound, prefix_.size()); ++y) {
    if (prefix_[y].global && prefix_[y].value == k.value) out.push_back(static_cast<Point>(y));
  }
  const std::uint64_t P = prefix_.size();
  for (std::uint64_t r = 0; r < tail_.size(); ++r) {
    if (!(tail_[r].global && tail_[r].value == k.value)) continue;
    for (std::uint64_t y = P + r; y < bound; y += tail_.size()) out.push_back(static_cast<Point>(y));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> PartitionDesc::infinite_class_anchors() const {
  std::vector<Point> out(globals_, 0);
  std::vector<bool> seen(globals_, false);
  for (std::uint64_t x = 0; x < prefix_.size() + tail_.size(); ++x) {
    const ClassKey k = key(static_cast<Point>(x));
    if (k.infinite && !seen[k.value]) {
      seen[k.value] = true;
      out[k.value] = static_cast<Point>(x);
    }
  }
  return out;
}

Point PartitionDesc::next_in_infinite_class(std::uint64_t id, Point from) const {
  const std::uint64_t limit = std::max<std::uint64_t>(from, prefix_.size()) + tail_.size();
  for (std::uint64_t y = from; y < limit; ++y) {
    const ClassKey k = key(static_cast<Point>(y));
    if (k.infinite && k.value == id) return static_cast<Point>(y);
  }
  fail(ErrorCode::kInvalidArgument, "no such infinite class");
}

std::vector<std::vector<Point>> PartitionDesc::window_classes(Point bound) const {
  std::map<ClassKey, std::size_t> slot;
  std::vector<std::vector<Point>> out;
  for (Point x = 0; x < bound; ++x) {
    auto [it, fresh] = slot.try_emplace(key(x), out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

PartitionDesc meet(const PartitionDesc& a, const PartitionDesc& b) {
  const std::uint64_t base = std::max(a.preperiod(), b.preperiod());
  const std::uint64_t L = std::lcm(a.period(), b.period());
  const std::uint64_t start = base + std::max(a.max_offset(), b.max_offset());
  std::set<std::pair<ClassKey, ClassKey>> recurring;
  for (std::uint64_t x = base; x < base + L; ++x) {
    const Point px = static_cast<Point>(x);
    const ClassKey ka = a.key(px);
    const ClassKey kb = b.key(px);
    if (ka.infinite && kb.infinite) recurring.emplace(ka, kb);
  }
  std::map<std::pair<ClassKey, ClassKey>, std::uint64_t> label;
  std::vector<std::uint64_t> raw(start + L);
  std::set<std::uint64_t> infinite_labels;
  for (std::uint64_t x = 0; x < raw.size(); ++x) {
    const Point px = static_cast<Point>(x);
    const auto pair = std::make_pair(a.key(px), b.key(px));
    const auto [it, fresh] = label.try_emplace(pair, label.size());
    raw[x] = it->second;
    if (fresh && recurring.contains(pair)) infinite_labels.insert(it->second);
  }
  return PartitionDesc::build(start, L, raw, [&](std::uint64_t r) { return infinite_labels.contains(r); });
}

namespace {

bool verify_join(const PartitionDesc& a, const PartitionDesc& b, const PartitionDesc& c) {
  if (!refines(a, c) || !refines(b, c)) return false;
  const std::uint64_t base = std::max(a.preperiod(), b.preperiod());
  const std::uint64_t L = std::lcm(a.period(), b.period());
  const std::uint64_t span = std::max({span_of(a), span_of(b), span_of(c)});
  const std::uint64_t T1 = std::max(base, c.preperiod()) + span;
  const std::uint64_t Q = std::lcm(c.period(), L);
  const std::uint64_t V = T1 + 4 * Q + 4 * span + 16;
  Dsu full(V);
  Dsu tail(V);
  link_classes(a, V, base, full, tail);
  link_classes(b, V, base, full, tail);
  std::map<std::uint64_t, std::uint64_t> rep;
  for (std::uint64_t x = 0; x < T1 + Q; ++x) {
    const Point px = static_cast<Point>(x);
    const ClassKey k = c.key(px);
    if (!k.infinite) {
      if (k.value != x) continue;
      for (Point y : c.class_members(px, static_cast<Point>(V))) {
        if (!full.same(x, y)) return false;
      }
      if (c.finite_class_end(x) > V) return false;
      continue;
    }
    const auto [it, fresh] = rep.try_emplace(k.value, x);
    if (!fresh && !full.same(x, it->second)) return false;
    if (x >= T1 && !tail.same(x, x + Q)) return false;
  }
  return rep.size() == c.infinite_class_count();
}

}  // namespace

PartitionDesc join(const PartitionDesc& a, const PartitionDesc& b) {
  const std::uint64_t base = std::max(a.preperiod(), b.preperiod());
  const std::uint64_t L = std::lcm(a.period(), b.period());
  const std::uint64_t span = std::max(span_of(a), span_of(b));
  const std::uint64_t T = base + span;
  std::uint64_t W = T + 8 * L + 4 * span + 64;
  std::uint64_t reach = 8;
  constexpr std::uint64_t kMaxWindow = std::uint64_t{1} << 22;

  while (W <= kMaxWindow) {
    Dsu full(W);
    Dsu tail(W);
    link_classes(a, W, base, full, tail);
    link_classes(b, W, base, full, tail);

    // For each residue, the least j with y ~ y + jL through tail points only;
    // by translation invariance that makes the whole residue run infinite.
    std::vector<std::uint64_t> step(L, 0);
    std::uint64_t q = L;
    for (std::uint64_t r = 0; r < L; ++r) {
      const std::uint64_t y = T + r;
      for (std::uint64_t j = 1; j <= reach && y + j * L < W; ++j) {
        if (tail.same(y, y + j * L)) {
          step[r] = j;
          break;
        }
      }
      if (step[r]) q = std::lcm(q, L * step[r]);
    }
    const std::uint64_t R = T + 2 * q;
    if (R + 4 * q + 4 * span > W) {
      W *= 2;
      continue;
    }
    std::set<std::uint64_t> infinite_roots;
    for (std::uint64_t z = T; z < W; ++z) {
      if (step[(z - T) % L]) infinite_roots.insert(full.find(z));
    }
    std::vector<std::uint64_t> raw(R + q);
    for (std::uint64_t x = 0; x < raw.size(); ++x) raw[x] = full.find(x);
    try {
      PartitionDesc candidate =
          PartitionDesc::build(R, q, raw, [&](std::uint64_t r) { return infinite_roots.contains(r); });
      if (verify_join(a, b, candidate)) return candidate;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidArgument) throw;
    }
    W *= 2;
    reach *= 2;
  }
  fail(ErrorCode::kJoinNotFinitelyDescribable, "join did not settle into an eventually periodic form");
}

bool refines(const PartitionDesc& fine, const PartitionDesc& coarse) {
  const std::uint64_t T = std::max(fine.preperiod(), coarse.preperiod()) +
                          std::max(fine.max_offset(), coarse.max_offset()) + 1;
  const std::uint64_t L = std::lcm(fine.period(), coarse.period());
  const std::uint64_t end = T + 2 * L + fine.max_offset() + 1;
  std::map<ClassKey, ClassKey> image;
  for (std::uint64_t x = 0; x < end; ++x) {
    const Point px = static_cast<Point>(x);
    const auto [it, fresh] = image.try_emplace(fine.key(px), coarse.key(px));
    if (!fresh && it->second != coarse.key(px)) return false;
  }
  return true;
}

bool group_is_finite(const PartitionDesc& e) {
  return std::all_of(e.tail_entries().begin(), e.tail_entries().end(),
                     [](const PartitionDesc::Entry& t) { return !t.global && t.value == 0; });
}

std::vector<std::pair<Point, Point>> pair_view(const PartitionDesc& e, Point bound) {
  std::vector<std::pair<Point, Point>> out;
  for (const auto& cls : e.window_classes(bound)) {
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (std::size_t j = i + 1; j < cls.size(); ++j) out.emplace_back(cls[i], cls[j]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CoarserVerdict almost_coarser(const PartitionDesc& y, const PartitionDesc& x, std::uint64_t patch_budget) {
  const PartitionDesc j = join(y, x);
  const std::uint64_t T = std::max({y.preperiod(), x.preperiod(), j.preperiod()}) +
                          std::max({y.max_offset(), x.max_offset(), j.max_offset()}) + 1;
  const std::uint64_t Q = std::lcm(std::lcm(y.period(), x.period()), j.period());
  const std::uint64_t span = std::max(y.max_offset(), j.max_offset()) + 1;
  CoarserVerdict verdict;

  // A Y-class that recurs in the tail and is strictly inside its J-class
  // means infinitely many merges are needed.
  for (std::uint64_t z = T; z < T + Q; ++z) {
    const Point pz = static_cast<Point>(z);
    const ClassKey ky = y.key(pz);
    if (ky.infinite) continue;
    const ClassKey kj = j.key(pz);
    const std::uint64_t end = kj.infinite ? T + 2 * Q + span : j.finite_class_end(kj.value);
    for (std::uint64_t w = kj.infinite ? T : kj.value; w < end; ++w) {
      const Point pw = static_cast<Point>(w);
      if (j.key(pw) == kj && y.key(pw) != ky) {
        verdict.outcome = CoarserOutcome::kFails;
        verdict.counterexample = std::make_pair(std::min(pz, pw), std::max(pz, pw));
        return verdict;
      }
    }
  }

  // Otherwise every J-class holds finitely many Y-classes, all visible below
  // T + Q; link their first points.
  std::map<ClassKey, std::vector<std::pair<ClassKey, Point>>> members;
  std::vector<ClassKey> order;
  for (std::uint64_t z = 0; z < T + Q; ++z) {
    const Point pz = static_cast<Point>(z);
    const ClassKey kj = j.key(pz);
    const ClassKey ky = y.key(pz);
    auto [it, fresh] = members.try_emplace(kj);
    if (fresh) order.push_back(kj);
    auto& list = it->second;
    if (std::none_of(list.begin(), list.end(), [&](const auto& e) { return e.first == ky; })) {
      list.emplace_back(ky, pz);
    }
  }
  for (const ClassKey& kj : order) {
    const auto& list = members[kj];
    for (std::size_t i = 1; i < list.size(); ++i) verdict.patch.emplace_back(list[0].second, list[i].second);
  }
  verdict.needed = verdict.patch.size();
  verdict.outcome = verdict.needed <= patch_budget ? CoarserOutcome::kHolds : CoarserOutcome::kUndecided;
  return verdict;
}

PartitionDesc coarsen_by_perm(const PartitionDesc& e0, const FinPerm& g) {
  std::vector<std::pair<Point, Point>> links;
  for (const auto& [x, gx] : g.moves()) links.emplace_back(x, gx);
  if (links.empty()) return e0;
  return join(e0, PartitionDesc::from_pairs(links));
}

ExtractedTransposition extract_transposition(const PartitionDesc& e0, const FinPerm& g, Point a, Point b,
                                             Point bound) {
  if (g(a) != b) fail(ErrorCode::kInvalidArgument, "extract_transposition: g(a) != b");
  const ClassKey ka = e0.key(a);
  const ClassKey kb = e0.key(b);
  if (!ka.infinite || !kb.infinite || ka == kb) {
    fail(ErrorCode::kInvalidArgument, "extract_transposition: a and b must lie in distinct infinite classes");
  }
  auto spare = [&](const ClassKey& k) {
    for (Point p = 0; p < bound; ++p) {
      if (e0.key(p) == k && !g.moves_point(p)) return p;
    }
    fail(ErrorCode::kNoSparePoint, "no class point outside supp(g) inside the window");
  };
  ExtractedTransposition out;
  out.a_spare = spare(ka);
  out.b_spare = spare(kb);
  const FinPerm ta = FinPerm::transposition(a, out.a_spare);
  const FinPerm tb = FinPerm::transposition(b, out.b_spare);
  out.factors = {ta, g.inverse(), tb, g, ta};
  out.transposition = FinPerm::identity();
  for (const auto& f : out.factors) out.transposition = out.transposition * f;
  return out;
}

}  // namespace lf
