#include "lf/perm_group.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "lf/error.hpp"

namespace lf {

FinPerm Slp::evaluate(std::span<const FinPerm> generators) const {
  if (lines.empty()) return FinPerm::identity();
  std::vector<FinPerm> value;
  value.reserve(lines.size());
  for (const Line& line : lines) {
    switch (line.op) {
      case Op::kGen:
        if (line.a >= generators.size()) fail(ErrorCode::kInvalidArgument, "slp: generator index out of range");
        value.push_back(generators[line.a]);
        break;
      case Op::kInv:
        if (line.a >= value.size()) fail(ErrorCode::kInvalidArgument, "slp: forward reference");
        value.push_back(value[line.a].inverse());
        break;
      case Op::kMul:
        if (line.a >= value.size() || line.b >= value.size()) {
          fail(ErrorCode::kInvalidArgument, "slp: forward reference");
        }
        value.push_back(value[line.a] * value[line.b]);
        break;
    }
  }
  return value.back();
}

Certificate word_certificate(std::vector<FinPerm> generators,
                             const std::vector<std::pair<std::uint32_t, std::int64_t>>& word) {
  Certificate cert;
  cert.generators = std::move(generators);
  auto& lines = cert.program.lines;
  auto push = [&](Slp::Op op, std::uint32_t a, std::uint32_t b) {
    lines.push_back({op, a, b});
    return static_cast<std::uint32_t>(lines.size() - 1);
  };
  std::optional<std::uint32_t> acc;
  for (const auto& [gen, exponent] : word) {
    if (exponent == 0) continue;
    std::uint32_t base = push(Slp::Op::kGen, gen, 0);
    if (exponent < 0) base = push(Slp::Op::kInv, base, 0);
    std::uint64_t e = exponent < 0 ? static_cast<std::uint64_t>(-exponent) : static_cast<std::uint64_t>(exponent);
    std::optional<std::uint32_t> power;
    while (true) {
      if (e & 1u) power = power ? push(Slp::Op::kMul, *power, base) : base;
      e >>= 1;
      if (e == 0) break;
      base = push(Slp::Op::kMul, base, base);
    }
    acc = acc ? push(Slp::Op::kMul, *acc, *power) : *power;
  }
  return cert;
}

// ---------------------------------------------------------------------------

PermGroup::PermGroup(std::vector<FinPerm> generators, std::span<const Point> base_prefix)
    : generators_(std::move(generators)) {
  std::set<Point> dom;
  for (const auto& g : generators_) {
    for (const auto& m : g.moves()) dom.insert(m.first);
  }
  for (Point b : base_prefix) dom.insert(b);
  domain_.assign(dom.begin(), dom.end());

  std::set<Point> seen;
  for (Point b : base_prefix) {
    if (!seen.insert(b).second) fail(ErrorCode::kDuplicatePoint, "base prefix repeats a point");
    base_points_.push_back(b);
  }
  prefix_size_ = base_points_.size();

  for (std::size_t i = 0; i < prefix_size_; ++i) {
    Level level;
    level.base = local_of(base_points_[i]);
    levels_.push_back(std::move(level));
  }

  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].is_identity()) continue;
    Local g = to_local(generators_[i]);
    arena_.push_back({Slp::Op::kGen, static_cast<std::uint32_t>(i), 0});
    const auto node = static_cast<std::uint32_t>(arena_.size() - 1);
    std::size_t depth = 0;
    while (depth < levels_.size() && g[levels_[depth].base] == levels_[depth].base) ++depth;
    if (depth == levels_.size()) {
      std::uint32_t moved = 0;
      while (g[moved] == moved) ++moved;
      Level level;
      level.base = moved;
      base_points_.push_back(domain_[moved]);
      levels_.push_back(std::move(level));
    }
    strong_.push_back(std::move(g));
    strong_node_.push_back(node);
    for (std::size_t l = 0; l <= depth; ++l) {
      levels_[l].gens.push_back(static_cast<std::uint32_t>(strong_.size() - 1));
    }
  }
  for (std::size_t l = 0; l < levels_.size(); ++l) rebuild_level(l);
  run_schreier_sims();
}

std::uint32_t PermGroup::local_of(Point x) const {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), x);
  return static_cast<std::uint32_t>(it - domain_.begin());
}

bool PermGroup::in_domain(Point x) const { return std::binary_search(domain_.begin(), domain_.end(), x); }

PermGroup::Local PermGroup::identity_local() const {
  Local id(domain_.size());
  for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
  return id;
}

PermGroup::Local PermGroup::to_local(const FinPerm& g) const {
  Local out = identity_local();
  for (const auto& [x, y] : g.moves()) out[local_of(x)] = local_of(y);
  return out;
}

FinPerm PermGroup::to_perm(const Local& g) const {
  std::vector<FinPerm::Move> moves;
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    if (g[i] != i) moves.emplace_back(domain_[i], domain_[g[i]]);
  }
  return FinPerm::from_moves(std::move(moves));
}

PermGroup::Local PermGroup::mul(const Local& p, const Local& q) {
  Local r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

PermGroup::Local PermGroup::inv(const Local& p) {
  Local r(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

bool PermGroup::is_identity(const Local& p) {
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

std::uint32_t PermGroup::node_mul(std::uint32_t a, std::uint32_t b) {
  if (a == kNoNode) return b;
  if (b == kNoNode) return a;
  arena_.push_back({Slp::Op::kMul, a, b});
  return static_cast<std::uint32_t>(arena_.size() - 1);
}

std::uint32_t PermGroup::node_inv(std::uint32_t a) {
  if (a == kNoNode) return kNoNode;
  if (inverse_memo_.size() < arena_.size()) inverse_memo_.resize(arena_.size(), kNoNode);
  if (inverse_memo_[a] != kNoNode) return inverse_memo_[a];
  arena_.push_back({Slp::Op::kInv, a, 0});
  const auto node = static_cast<std::uint32_t>(arena_.size() - 1);
  inverse_memo_.resize(arena_.size(), kNoNode);
  inverse_memo_[a] = node;
  return node;
}

std::uint32_t PermGroup::node_product(const std::vector<std::pair<std::uint32_t, bool>>& factors) {
  std::uint32_t acc = kNoNode;
  for (const auto& [node, inverted] : factors) acc = node_mul(acc, inverted ? node_inv(node) : node);
  return acc;
}

void PermGroup::rebuild_level(std::size_t l) {
  Level& level = levels_[l];
  level.where.assign(domain_.size(), -1);
  level.orbit = {level.base};
  level.transversal = {identity_local()};
  level.trans_node = {kNoNode};
  level.where[level.base] = 0;
  for (std::size_t i = 0; i < level.orbit.size(); ++i) {
    const std::uint32_t beta = level.orbit[i];
    for (std::uint32_t s : level.gens) {
      const std::uint32_t image = strong_[s][beta];
      if (level.where[image] >= 0) continue;
      level.where[image] = static_cast<std::int32_t>(level.orbit.size());
      level.orbit.push_back(image);
      level.transversal.push_back(mul(strong_[s], level.transversal[i]));
      level.trans_node.push_back(node_mul(strong_node_[s], level.trans_node[i]));
    }
  }
}

std::pair<PermGroup::Local, std::size_t> PermGroup::sift(
    Local g, std::size_t from, std::vector<std::pair<std::uint32_t, bool>>* factors) const {
  for (std::size_t l = from; l < levels_.size(); ++l) {
    const Level& level = levels_[l];
    const std::int32_t at = level.where[g[level.base]];
    if (at < 0) return {std::move(g), l};
    if (at == 0) continue;
    g = mul(inv(level.transversal[static_cast<std::size_t>(at)]), g);
    if (factors) factors->emplace_back(level.trans_node[static_cast<std::size_t>(at)], true);
  }
  return {std::move(g), levels_.size()};
}

void PermGroup::run_schreier_sims() {
  if (levels_.empty()) return;
  std::size_t i = levels_.size();
  while (i > 0) {
    const std::size_t level_index = i - 1;
    bool extended = false;
    // Copies: the level may be rebuilt while we add generators below it.
    const std::vector<std::uint32_t> orbit = levels_[level_index].orbit;
    const std::vector<std::uint32_t> gens = levels_[level_index].gens;
    for (std::size_t oi = 0; oi < orbit.size() && !extended; ++oi) {
      for (std::uint32_t s : gens) {
        const Level& level = levels_[level_index];
        const std::uint32_t beta = orbit[oi];
        const std::uint32_t image = strong_[s][beta];
        const auto at_beta = static_cast<std::size_t>(level.where[beta]);
        const auto at_image = static_cast<std::size_t>(level.where[image]);
        Local h = mul(inv(level.transversal[at_image]), mul(strong_[s], level.transversal[at_beta]));
        if (is_identity(h)) continue;
        std::vector<std::pair<std::uint32_t, bool>> factors;
        auto [residue, stop] = sift(h, level_index + 1, &factors);
        if (is_identity(residue)) continue;

        // residue = (sift factors) * u_image^{-1} * s * u_beta, right to left.
        std::vector<std::pair<std::uint32_t, bool>> word(factors.rbegin(), factors.rend());
        word.emplace_back(level.trans_node[at_image], true);
        word.emplace_back(strong_node_[s], false);
        word.emplace_back(level.trans_node[at_beta], false);
        const std::uint32_t node = node_product(word);

        if (stop == levels_.size()) {
          std::uint32_t moved = 0;
          while (residue[moved] == moved) ++moved;
          Level fresh;
          fresh.base = moved;
          base_points_.push_back(domain_[moved]);
          levels_.push_back(std::move(fresh));
        }
        strong_.push_back(std::move(residue));
        strong_node_.push_back(node);
        for (std::size_t l = level_index + 1; l <= stop; ++l) {
          levels_[l].gens.push_back(static_cast<std::uint32_t>(strong_.size() - 1));
          rebuild_level(l);
        }
        i = stop + 1;
        extended = true;
        break;
      }
    }
    if (!extended) --i;
  }
}

bool PermGroup::contains(const FinPerm& g) const {
  for (const auto& m : g.moves()) {
    if (!in_domain(m.first)) return false;
  }
  return is_identity(sift(to_local(g), 0, nullptr).first);
}

std::optional<Certificate> PermGroup::certify(const FinPerm& g) const {
  for (const auto& m : g.moves()) {
    if (!in_domain(m.first)) return std::nullopt;
  }
  std::vector<std::pair<std::uint32_t, bool>> factors;
  auto [residue, stop] = sift(to_local(g), 0, &factors);
  if (!is_identity(residue)) return std::nullopt;
  // g = u_0 u_1 ... u_k; the factors were recorded in that order.
  // Products are evaluated without touching the arena, so build the program
  // from a private copy.
  PermGroup scratch = *this;
  std::uint32_t acc = kNoNode;
  for (const auto& f : factors) acc = scratch.node_mul(acc, f.first);
  return scratch.extract(acc);
}

Certificate PermGroup::extract(std::uint32_t node) const {
  Certificate cert;
  if (node == kNoNode) return cert;
  std::vector<bool> reachable(arena_.size(), false);
  std::vector<std::uint32_t> stack = {node};
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    if (reachable[n]) continue;
    reachable[n] = true;
    const auto& line = arena_[n];
    if (line.op == Slp::Op::kInv) stack.push_back(line.a);
    if (line.op == Slp::Op::kMul) {
      stack.push_back(line.a);
      stack.push_back(line.b);
    }
  }
  std::vector<std::uint32_t> renumber(arena_.size(), kNoNode);
  std::map<std::uint32_t, std::uint32_t> gen_index;
  for (std::uint32_t n = 0; n <= node; ++n) {
    if (!reachable[n]) continue;
    Slp::Line line = arena_[n];
    if (line.op == Slp::Op::kGen) {
      auto [it, inserted] = gen_index.emplace(line.a, static_cast<std::uint32_t>(cert.generators.size()));
      if (inserted) cert.generators.push_back(generators_[line.a]);
      line.a = it->second;
    } else {
      line.a = renumber[line.a];
      if (line.op == Slp::Op::kMul) line.b = renumber[line.b];
    }
    renumber[n] = static_cast<std::uint32_t>(cert.program.lines.size());
    cert.program.lines.push_back(line);
  }
  return cert;
}

long double PermGroup::order() const {
  long double result = 1;
  for (const auto& level : levels_) result *= static_cast<long double>(level.orbit.size());
  return result;
}

std::optional<std::uint64_t> PermGroup::order_exact() const {
  std::uint64_t result = 1;
  for (const auto& level : levels_) {
    const std::uint64_t s = level.orbit.size();
    if (result > std::numeric_limits<std::uint64_t>::max() / s) return std::nullopt;
    result *= s;
  }
  return result;
}

std::vector<FinPerm> PermGroup::elements(std::uint64_t budget) const {
  const auto order = order_exact();
  if (!order || *order > budget) fail(ErrorCode::kBudgetExceeded, "group order exceeds element budget");
  std::vector<Local> current = {identity_local()};
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
    std::vector<Local> next;
    next.reserve(current.size() * it->orbit.size());
    for (const auto& u : it->transversal) {
      for (const auto& c : current) next.push_back(mul(u, c));
    }
    current = std::move(next);
  }
  std::vector<FinPerm> out;
  out.reserve(current.size());
  for (const auto& c : current) out.push_back(to_perm(c));
  std::sort(out.begin(), out.end(), SfLess{});
  return out;
}

std::vector<FinPerm> PermGroup::stabilizer_generators(std::size_t depth) const {
  std::vector<FinPerm> out;
  if (depth >= levels_.size()) return out;
  for (std::uint32_t s : levels_[depth].gens) out.push_back(to_perm(strong_[s]));
  return out;
}

std::optional<FinPerm> PermGroup::realize_prefix(std::span<const Point> images) const {
  if (images.size() > prefix_size_) fail(ErrorCode::kInvalidArgument, "realize_prefix: more images than prefix points");
  Local x = identity_local();
  Local x_inv = x;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!in_domain(images[i])) return std::nullopt;
    const std::uint32_t want = x_inv[local_of(images[i])];
    const std::int32_t at = levels_[i].where[want];
    if (at < 0) return std::nullopt;
    x = mul(x, levels_[i].transversal[static_cast<std::size_t>(at)]);
    x_inv = inv(x);
  }
  return to_perm(x);
}

std::vector<Point> PermGroup::orbit(Point x) const {
  if (!in_domain(x)) return {x};
  std::vector<bool> seen(domain_.size(), false);
  std::vector<std::uint32_t> queue = {local_of(x)};
  seen[queue[0]] = true;
  std::vector<Local> gens;
  for (const auto& g : generators_) gens.push_back(to_local(g));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      const std::uint32_t y = g[queue[i]];
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  std::vector<Point> out;
  for (auto q : queue) out.push_back(domain_[q]);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<FinPerm> realize_partial_map(const std::vector<FinPerm>& generators,
                                           std::span<const std::pair<Point, Point>> partial) {
  std::vector<Point> keys;
  std::vector<Point> images;
  for (const auto& [a, b] : partial) {
    keys.push_back(a);
    images.push_back(b);
  }
  std::vector<Point> sorted = images;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  PermGroup group(generators, keys);
  return group.realize_prefix(images);
}

std::vector<FinPerm> closure_bfs(const std::vector<FinPerm>& generators, std::uint64_t budget) {
  std::set<FinPerm, SfLess> seen = {FinPerm::identity()};
  std::deque<FinPerm> queue = {FinPerm::identity()};
  while (!queue.empty()) {
    FinPerm g = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : generators) {
      FinPerm h = s * g;
      if (seen.insert(h).second) {
        if (seen.size() > budget) fail(ErrorCode::kBudgetExceeded, "closure exceeds element budget");
        queue.push_back(std::move(h));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace lf
