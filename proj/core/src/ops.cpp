#include "lf/ops.hpp"

#include "lf/constructions.hpp"
#include "lf/error.hpp"
#include "lf/forcing.hpp"
#include "lf/json_io.hpp"
#include "lf/lattice.hpp"

namespace lf {

namespace {

const json& arg(const json& args, const char* key) {
  if (!args.is_object() || !args.contains(key)) {
    fail(ErrorCode::kParseError, std::string("args: missing field \"") + key + "\"");
  }
  return args.at(key);
}

std::string at(const char* key) { return std::string("args.") + key; }

FinPerm perm_arg(const json& args, const char* key) { return perm_from_json(arg(args, key), at(key)); }
std::vector<FinPerm> perms_arg(const json& args, const char* key) {
  return args.contains(key) ? perms_from_json(args[key], at(key)) : std::vector<FinPerm>{};
}
GroupDesc group_arg(const json& args, const char* key) { return group_from_json(arg(args, key), at(key)); }
PartitionDesc partition_arg(const json& args, const char* key) { return partition_from_json(arg(args, key), at(key)); }

std::vector<GroupDesc> groups_arg(const json& args, const char* key) {
  std::vector<GroupDesc> out;
  if (!args.contains(key)) return out;
  const json& list = args[key];
  if (!list.is_array()) fail(ErrorCode::kParseError, at(key) + ": expected an array of groups");
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(group_from_json(list[i], at(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::uint64_t uint_arg(const json& args, const char* key, std::optional<std::uint64_t> fallback = std::nullopt) {
  if (!args.contains(key) && fallback) return *fallback;
  const json& v = arg(args, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(ErrorCode::kParseError, at(key) + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Point point_arg(const json& args, const char* key, std::optional<std::uint64_t> fallback = std::nullopt) {
  const auto v = uint_arg(args, key, fallback);
  if (v > 0xffffffffull) fail(ErrorCode::kParseError, at(key) + ": out of range");
  return static_cast<Point>(v);
}

std::vector<Point> points_arg(const json& args, const char* key) {
  const json& v = arg(args, key);
  if (!v.is_array()) fail(ErrorCode::kParseError, at(key) + ": expected an array of points");
  std::vector<Point> out;
  for (const auto& x : v) {
    if (!x.is_number_unsigned()) fail(ErrorCode::kParseError, at(key) + ": expected an array of points");
    out.push_back(x.get<Point>());
  }
  return out;
}

EnumeratedFamily family_arg(const json& args, const char* key) { return {groups_arg(args, key)}; }

FamilyKind family_kind(const std::string& s) {
  if (s == "splitting") return FamilyKind::kSplitting;
  if (s == "reaping") return FamilyKind::kReaping;
  if (s == "shattering") return FamilyKind::kShattering;
  fail(ErrorCode::kParseError, "args.kind: expected splitting, reaping or shattering");
}

json coarser_json(const CoarserVerdict& v) {
  switch (v.outcome) {
    case CoarserOutcome::kHolds:
      return to_json(Verdict::Holds({{"patch", v.patch}}));
    case CoarserOutcome::kFails: {
      json w = nullptr;
      if (v.counterexample) w = {{"pair", {v.counterexample->first, v.counterexample->second}}};
      return to_json(Verdict::Fails(w));
    }
    case CoarserOutcome::kUndecided:
      break;
  }
  auto u = Verdict::UndecidedUpTo(v.needed, "patch budget exceeded");
  u.witness = {{"patch", v.patch}};
  return to_json(u);
}

json chain_output(Poset poset, const json& args, const WindowConfig& w) {
  const json& list = arg(args, "oracles");
  if (!list.is_array()) fail(ErrorCode::kParseError, "args.oracles: expected an array");
  std::vector<DenseOracle> oracles;
  for (std::size_t i = 0; i < list.size(); ++i) {
    oracles.push_back(oracle_from_json(list[i], "args.oracles[" + std::to_string(i) + "]"));
  }
  const auto chain = rasiowa_sikorski(poset, oracles, w);
  auto out = to_json(chain);
  out["verification"] = to_json(verify_chain(chain, w));
  return out;
}

std::map<std::string, OpInfo> build_registry() {
  std::map<std::string, OpInfo> r;
  r["perm.compose"] = {[](const json& a, const WindowConfig&) { return to_json(perm_arg(a, "p") * perm_arg(a, "q")); },
                       "p*q, applying q first"};
  r["perm.inverse"] = {[](const json& a, const WindowConfig&) { return to_json(perm_arg(a, "p").inverse()); },
                       "inverse permutation"};
  r["perm.info"] = {[](const json& a, const WindowConfig&) {
                      const auto p = perm_arg(a, "p");
                      json out = {{"cycles", to_json(p)}, {"support", p.support()}, {"order", p.order()}};
                      if (!p.max_moved() || *p.max_moved() < 20) out["sf_index"] = sf_index(p);
                      return out;
                    },
                    "cycles, support, order and SF index"};
  r["perm.sf_at"] = {[](const json& a, const WindowConfig&) { return to_json(sf_at(uint_arg(a, "index"))); },
                     "the permutation at a position of the SF enumeration"};

  r["group.normalize"] = {[](const json& a, const WindowConfig&) { return to_json(group_arg(a, "group")); },
                          "canonical form of a group description"};
  r["group.member"] = {[](const json& a, const WindowConfig& w) {
                         return to_json(membership(perm_arg(a, "perm"), group_arg(a, "group"), w, true));
                       },
                       "membership with certificate"};
  r["group.is_infinite"] = {[](const json& a, const WindowConfig&) { return json(group_arg(a, "group").is_infinite()); },
                            "infinite by description"};
  r["group.window_generators"] = {[](const json& a, const WindowConfig& w) {
                                    const auto g = window_generators(group_arg(a, "group"), w);
                                    return json{{"generators", to_json(g.generators)}, {"exact", g.exact}};
                                  },
                                  "generators supported in the window"};
  r["group.local_part"] = {[](const json& a, const WindowConfig& w) {
                             return to_json(local_part(group_arg(a, "group"), points_arg(a, "domain"), w));
                           },
                           "elements supported in a finite set"};
  r["group.generated_over"] = {[](const json& a, const WindowConfig&) {
                                 return to_json(generated_over(group_arg(a, "group"), perms_arg(a, "x")));
                               },
                               "the group generated by G and X"};
  r["group.transport"] = {[](const json& a, const WindowConfig& w) {
                            const auto t = transport_maps(group_arg(a, "group"), points_arg(a, "a"), points_arg(a, "b"), w);
                            return json{{"maps", t.maps}, {"exact", t.exact}};
                          },
                          "restrictions to A of elements mapping A onto B"};
  r["group.trace"] = {[](const json& a, const WindowConfig& w) {
                        const auto t = trace_set(group_arg(a, "group"), uint_arg(a, "n"), w);
                        return json{{"members", t.members}, {"unknown", t.unknown}};
                      },
                      "positions below n of the SF enumeration whose element lies in G"};

  r["partition.normalize"] = {[](const json& a, const WindowConfig&) { return to_json(partition_arg(a, "e")); },
                              "canonical partition description"};
  r["partition.meet"] = {[](const json& a, const WindowConfig&) {
                           return to_json(meet(partition_arg(a, "a"), partition_arg(a, "b")));
                         },
                         "common refinement"};
  r["partition.join"] = {[](const json& a, const WindowConfig&) {
                           return to_json(join(partition_arg(a, "a"), partition_arg(a, "b")));
                         },
                         "transitive closure of the union"};
  r["partition.refines"] = {[](const json& a, const WindowConfig&) {
                              return json(refines(partition_arg(a, "a"), partition_arg(a, "b")));
                            },
                            "a refines b"};
  r["partition.group_is_finite"] = {[](const json& a, const WindowConfig&) {
                                      return json(group_is_finite(partition_arg(a, "e")));
                                    },
                                    "the class-preserving group is finite"};
  r["partition.almost_coarser"] = {[](const json& a, const WindowConfig& w) {
                                     return coarser_json(almost_coarser(partition_arg(a, "y"), partition_arg(a, "x"),
                                                                        uint_arg(a, "budget", w.bound)));
                                   },
                                   "x lies in join(y, Z) for a finite Z"};
  r["partition.coarsen"] = {[](const json& a, const WindowConfig&) {
                              return to_json(coarsen_by_perm(partition_arg(a, "e"), perm_arg(a, "g")));
                            },
                            "partition of <G_E, g>"};
  r["partition.extract_transposition"] = {[](const json& a, const WindowConfig& w) {
                                            const auto g = perm_arg(a, "g");
                                            const Point x = point_arg(a, "a");
                                            const auto t = extract_transposition(partition_arg(a, "e"), g, x,
                                                                                 point_arg(a, "b", g(x)), w.bound);
                                            return json{{"transposition", to_json(t.transposition)},
                                                        {"spares", {t.a_spare, t.b_spare}},
                                                        {"factors", to_json(t.factors)}};
                                          },
                                          "transposition across two classes via conjugation"};

  r["orth"] = {[](const json& a, const WindowConfig& w) {
                 return to_json(orthogonal(group_arg(a, "g1"), group_arg(a, "g2"), w, uint_arg(a, "threshold", 16)));
               },
               "finite intersection"};
  r["almost.verify"] = {[](const json& a, const WindowConfig& w) {
                          return to_json(almost_contained_verify(group_arg(a, "g1"), group_arg(a, "g2"), perms_arg(a, "x"), w));
                        },
                        "G1 <= <G2, X> on window generators"};
  r["almost.search"] = {[](const json& a, const WindowConfig& w) {
                          const auto x = almost_witness_search(group_arg(a, "g1"), group_arg(a, "g2"),
                                                               uint_arg(a, "size_bound", 2), point_arg(a, "support_bound", 8), w);
                          return x ? to_json(*x) : json(nullptr);
                        },
                        "least X with G1 <= <G2, X>"};
  r["almost.equal"] = {[](const json& a, const WindowConfig& w) {
                         return to_json(a_equal(group_arg(a, "g1"), group_arg(a, "g2"), perms_arg(a, "x1"), perms_arg(a, "x2"), w));
                       },
                       "almost containment both ways"};
  r["metric"] = {[](const json& a, const WindowConfig& w) {
                   return to_json(metric_d(group_arg(a, "g1"), group_arg(a, "g2"),
                                           static_cast<unsigned>(uint_arg(a, "n", 64)), w));
                 },
                 "distance through local parts on bit sets"};
  r["splits"] = {[](const json& a, const WindowConfig& w) {
                   const auto ga = group_arg(a, "a");
                   const auto gb = group_arg(a, "b");
                   auto pool = groups_arg(a, "pool");
                   const auto extra = default_split_pool(ga, gb);
                   pool.insert(pool.end(), extra.begin(), extra.end());
                   return to_json(splits(ga, gb, pool, w));
                 },
                 "a splits b relative to a pool"};
  r["family"] = {[](const json& a, const WindowConfig& w) {
                   const json& kind = arg(a, "kind");
                   if (!kind.is_string()) fail(ErrorCode::kParseError, "args.kind: expected a string");
                   std::vector<std::vector<GroupDesc>> families;
                   const json& fams = arg(a, "families");
                   if (!fams.is_array()) fail(ErrorCode::kParseError, "args.families: expected an array");
                   for (std::size_t i = 0; i < fams.size(); ++i) {
                     families.push_back(groups_arg(json{{"f", fams[i]}}, "f"));
                   }
                   FamilyOptions opt;
                   opt.size_bound = uint_arg(a, "size_bound", opt.size_bound);
                   opt.support_bound = point_arg(a, "support_bound", opt.support_bound);
                   opt.pool = groups_arg(a, "pool");
                   return to_json(family_check(family_kind(kind.get<std::string>()), families, groups_arg(a, "probes"), w, opt));
                 },
                 "check a splitting, reaping or shattering family against probes"};
  r["family.shattering_from_splitting"] = {[](const json& a, const WindowConfig& w) {
                                             json out = json::array();
                                             for (const auto& fam :
                                                  shattering_from_splitting(groups_arg(a, "family"), groups_arg(a, "pool"), w)) {
                                               json f = json::array();
                                               for (const auto& g : fam) f.push_back(to_json(g));
                                               out.push_back(f);
                                             }
                                             return out;
                                           },
                                           "maximal orthogonal families through each member"};

  r["construct.avoid"] = {[](const json& a, const WindowConfig& w) {
                            const auto others = groups_arg(a, "others");
                            const auto g = group_arg(a, "group");
                            const Point m = point_arg(a, "m");
                            return to_json(others.empty() && !a.contains("h")
                                               ? avoid_support(g, m, w)
                                               : avoid_support_constrained(g, m, perms_arg(a, "h"), others, w));
                          },
                          "least non-trivial element above m"};
  r["construct.rho"] = {[](const json& a, const WindowConfig& w) {
                          return to_json(rho_k_cycles(groups_arg(a, "groups"), static_cast<unsigned>(uint_arg(a, "k", 1)),
                                                      point_arg(a, "m", 0), perms_arg(a, "h"), w));
                        },
                        "(k+1)-cycle builder"};
  r["construct.pseudo"] = {[](const json& a, const WindowConfig& w) {
                             return to_json(pseudo_intersection(groups_arg(a, "chain"), w));
                           },
                           "pseudo-intersection of a descending chain"};
  r["construct.antireap"] = {[](const json& a, const WindowConfig& w) {
                               return to_json(anti_reaping_pair(family_arg(a, "family"), uint_arg(a, "steps"), w));
                             },
                             "two orthogonal groups meeting every family member"};
  r["construct.diag"] = {[](const json& a, const WindowConfig& w) {
                           std::vector<unsigned> ks;
                           if (a.contains("k_schedule")) ks = a["k_schedule"].get<std::vector<unsigned>>();
                           return to_json(orthogonal_diagonal(family_arg(a, "family"), uint_arg(a, "steps"), ks, w));
                         },
                         "group orthogonal to every family member"};

  r["force.pr"] = {[](const json& a, const WindowConfig& w) { return chain_output(Poset::kPr, a, w); },
                   "filter chain in the reaping poset"};
  r["force.pa"] = {[](const json& a, const WindowConfig& w) { return chain_output(Poset::kPa, a, w); },
                   "filter chain in the orthogonality poset"};
  r["force.verify"] = {[](const json& a, const WindowConfig& w) {
                         return to_json(verify_chain(chain_from_json(arg(a, "transcript"), at("transcript")), w));
                       },
                       "re-check a chain transcript"};
  r["force.pr_leq"] = {[](const json& a, const WindowConfig&) {
                         return json(pr_leq(std::get<PrCondition>(condition_from_json(arg(a, "c"), Poset::kPr, at("c"))),
                                            std::get<PrCondition>(condition_from_json(arg(a, "d"), Poset::kPr, at("d")))));
                       },
                       "order of the reaping poset"};
  r["force.pa_leq"] = {[](const json& a, const WindowConfig& w) {
                         return to_json(pa_leq(std::get<PaCondition>(condition_from_json(arg(a, "c"), Poset::kPa, at("c"))),
                                               std::get<PaCondition>(condition_from_json(arg(a, "d"), Poset::kPa, at("d"))), w));
                       },
                       "order of the orthogonality poset"};
  return r;
}

}  // namespace

const std::map<std::string, OpInfo>& op_registry() {
  static const auto registry = build_registry();
  return registry;
}

json run_op(const std::string& name, const json& args, const WindowConfig& w) {
  const auto& reg = op_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) fail(ErrorCode::kInvalidArgument, "unknown operation \"" + name + "\"");
  try {
    return it->second.fn(args, w);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, std::string("args: ") + e.what());
  }
}

json error_document(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {{"error", std::string(to_string(err->code()))}, {"message", err->what()}};
  }
  return {{"error", "Internal"}, {"message", e.what()}};
}

}  // namespace lf
