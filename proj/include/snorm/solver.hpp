// Copyright 2026 The snorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exhaustive global immersibility search for small instances, and relation
// extraction from gadgets whose gluing space is {0,1}^r.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snorm/csp.hpp"
#include "snorm/errors.hpp"
#include "snorm/gluing.hpp"

namespace snorm {

struct SearchBudget {
  std::size_t max_sites = 4096;       // sites with at least two arcs
  std::size_t max_arc_count = 64;     // largest k at a single site
  double max_log2_space = 256.0;      // log2 of the product of k! over sites
  double time_limit_seconds = 60.0;
  std::optional<std::uint64_t> max_nodes;
  bool prune = true;                  // false: plain enumeration of all gluings
};

struct SearchResult {
  bool immersible = false;
  std::optional<GlobalGluing> witness;
  std::uint64_t nodes = 0;
  double log2_space = 0.0;
};

struct SpaceEstimate {
  std::size_t sites = 0;  // sites with k >= 2
  Count max_k = 0;
  double log2_space = 0.0;
};

/// Size of the gluing space, computed on the raw coordinates so that huge
/// arc counts are refused before anything is allocated.
inline SpaceEstimate estimate_search_space(const Triangulation& tri, const NormalCoordinates& n) {
  require_length(tri, n);
  SpaceEstimate e;
  for (const auto& s : interior_sites(tri)) {
    Count k = arc_count(n, s);
    if (k > e.max_k) e.max_k = k;
    if (k < 2) continue;
    ++e.sites;
    if (k > Count(1) << 20) {
      e.log2_space = INFINITY;
      continue;
    }
    double kd = static_cast<double>(static_cast<std::uint64_t>(k));
    e.log2_space += std::lgamma(kd + 1.0) / std::log(2.0);
  }
  return e;
}

inline void check_budget(const SpaceEstimate& e, const SearchBudget& b) {
  if (e.sites > b.max_sites)
    throw BudgetExceeded("search: " + std::to_string(e.sites) + " nontrivial sites exceed max_sites " +
                         std::to_string(b.max_sites));
  if (e.max_k > b.max_arc_count)
    throw BudgetExceeded("search: arc count " + e.max_k.str() + " exceeds max_arc_count " +
                         std::to_string(b.max_arc_count));
  if (!(e.log2_space <= b.max_log2_space))
    throw BudgetExceeded("search: log2 of the gluing space " + std::to_string(e.log2_space) +
                         " exceeds " + std::to_string(b.max_log2_space));
}

namespace detail {

class ChainSearch {
 public:
  ChainSearch(const CurveModel& model, const SearchBudget& budget)
      : model_(model), budget_(budget), start_(std::chrono::steady_clock::now()) {
    const auto& sites = model_.sites();
    const std::size_t nseg = model_.segment_count();
    other_end_.resize(nseg);
    len_.assign(nseg, 1);
    has_next_.assign(nseg, 0);
    has_prev_.assign(nseg, 0);
    end_entry_.assign(nseg, Entry{});
    for (std::size_t s = 0; s < nseg; ++s) other_end_[s] = s;
    fwd_.resize(sites.size());
    bwd_.resize(sites.size());
    for (std::size_t si = 0; si < sites.size(); ++si) {
      fwd_[si].assign(sites[si].k, kUnset);
      bwd_[si].assign(sites[si].k, kUnset);
      for (const auto& l : sites[si].links)
        for (std::size_t a = 0; a < sites[si].k; ++a) {
          if (l.side1_is_from)
            end_entry_[l.sides[0].segment(a)] = {si, 0, a};
          else
            end_entry_[l.sides[1].segment(a)] = {si, 1, a};
        }
    }
    // Sites touching the same fan are contiguous, in fan order.
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> keyed;
    for (std::size_t si = 0; si < sites.size(); ++si) {
      if (sites[si].k == 0 || sites[si].links.empty()) continue;
      std::pair<std::size_t, std::size_t> key{SIZE_MAX, SIZE_MAX};
      for (const auto& l : sites[si].links) key = std::min(key, {l.block, l.position});
      keyed.push_back({key, si});
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& kv : keyed) order_.push_back(kv.second);
  }

  bool run() {
    for (std::size_t si : order_)
      if (model_.sites()[si].k == 1 && !assign(si, 0, 0)) return false;
    return dfs(std::nullopt);
  }

  GlobalGluing gluing() const {
    GlobalGluing g;
    const auto& sites = model_.sites();
    for (std::size_t si = 0; si < sites.size(); ++si) {
      if (sites[si].k == 0) continue;
      if (sites[si].links.empty()) {
        g.set(sites[si].site, identity_permutation(sites[si].k));
        continue;
      }
      g.set(sites[si].site, fwd_[si]);
    }
    return g;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  struct Entry {
    std::size_t site = kUnset;
    int side = 0;
    std::size_t index = 0;
  };
  struct Undo {
    std::size_t seg, other, len;
  };
  struct LinkUndo {
    std::size_t from, to;
    std::size_t undo_mark;
  };

  std::size_t fan_length(std::size_t block) const { return model_.blocks()[block].positions.size(); }

  bool link(std::size_t block, std::size_t from, std::size_t to) {
    const std::size_t m = fan_length(block);
    if (has_next_[from] || has_prev_[to]) throw std::logic_error("search: segment linked twice");
    const std::size_t mark = undo_.size();
    if (other_end_[from] == to) {
      if (len_[from] != m) return false;
    } else {
      const std::size_t head = other_end_[from], tail = other_end_[to];
      const std::size_t l = len_[from] + len_[to];
      if (l > m) return false;
      undo_.push_back({head, other_end_[head], len_[head]});
      undo_.push_back({tail, other_end_[tail], len_[tail]});
      other_end_[head] = tail;
      other_end_[tail] = head;
      len_[head] = len_[tail] = l;
    }
    has_next_[from] = has_prev_[to] = 1;
    links_.push_back({from, to, mark});
    return true;
  }

  void unlink_to(std::size_t n) {
    while (links_.size() > n) {
      const auto& l = links_.back();
      has_next_[l.from] = has_prev_[l.to] = 0;
      while (undo_.size() > l.undo_mark) {
        const auto& u = undo_.back();
        other_end_[u.seg] = u.other;
        len_[u.seg] = u.len;
        undo_.pop_back();
      }
      links_.pop_back();
    }
  }

  bool assign(std::size_t si, std::size_t i, std::size_t j) {
    const std::size_t mark = links_.size();
    bool ok = true;
    model_.for_each_link(model_.sites()[si], i, j, [&](std::size_t block, std::size_t from, std::size_t to) {
      if (ok && !link(block, from, to)) ok = false;
    });
    if (!ok) {
      unlink_to(mark);
      return false;
    }
    fwd_[si][i] = j;
    bwd_[si][j] = i;
    return true;
  }

  void unassign(std::size_t si, std::size_t i, std::size_t j, std::size_t mark) {
    unlink_to(mark);
    fwd_[si][i] = kUnset;
    bwd_[si][j] = kUnset;
  }

  void tick() {
    ++nodes_;
    if (budget_.max_nodes && nodes_ > *budget_.max_nodes)
      throw BudgetExceeded("search: node limit " + std::to_string(*budget_.max_nodes) + " reached");
    if ((nodes_ & 1023) == 0) {
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      if (dt.count() > budget_.time_limit_seconds)
        throw BudgetExceeded("search: time limit of " + std::to_string(budget_.time_limit_seconds) +
                             " s reached");
    }
  }

  // The open entry at the tail of the chain grown by the latest assignment.
  std::optional<Entry> focus_after(std::size_t mark) const {
    for (std::size_t li = mark; li < links_.size(); ++li) {
      std::size_t tail = links_[li].to;
      if (has_next_[tail]) tail = other_end_[tail];
      if (has_next_[tail]) continue;  // closed
      const Entry& e = end_entry_[tail];
      if (e.site == kUnset) continue;
      if ((e.side == 0 ? fwd_[e.site][e.index] : bwd_[e.site][e.index]) == kUnset) return e;
    }
    return std::nullopt;
  }

  std::optional<Entry> next_static() {
    while (cursor_ < order_.size()) {
      const std::size_t si = order_[cursor_];
      for (std::size_t i = 0; i < fwd_[si].size(); ++i)
        if (fwd_[si][i] == kUnset) return Entry{si, 0, i};
      ++cursor_;
    }
    return std::nullopt;
  }

  bool dfs(std::optional<Entry> focus) {
    tick();
    const std::size_t saved_cursor = cursor_;
    Entry e;
    if (focus) {
      e = *focus;
    } else if (auto s = next_static()) {
      e = *s;
    } else {
      return true;
    }
    const std::size_t k = model_.sites()[e.site].k;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t i = e.side == 0 ? e.index : c;
      const std::size_t j = e.side == 0 ? c : e.index;
      if ((e.side == 0 ? bwd_[e.site][j] : fwd_[e.site][i]) != kUnset) continue;
      const std::size_t mark = links_.size();
      if (!assign(e.site, i, j)) continue;
      if (dfs(focus_after(mark))) return true;
      unassign(e.site, i, j, mark);
      cursor_ = saved_cursor;
    }
    cursor_ = saved_cursor;
    return false;
  }

  const CurveModel& model_;
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::size_t> other_end_, len_;
  std::vector<char> has_next_, has_prev_;
  std::vector<Entry> end_entry_;
  std::vector<std::vector<std::size_t>> fwd_, bwd_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::vector<Undo> undo_;
  std::vector<LinkUndo> links_;
  std::uint64_t nodes_ = 0;
};

inline bool plain_enumeration(const Triangulation& tri, const NormalCoordinates& n, const Skeleton& sk,
                              const SearchBudget& budget, SearchResult& out) {
  std::vector<Site> sites;
  std::vector<Permutation> perms;
  for (const auto& s : interior_sites(tri)) {
    std::size_t k = to_index(arc_count(n, s), "search");
    if (k == 0) continue;
    sites.push_back(s);
    perms.push_back(identity_permutation(k));
  }
  const auto start = std::chrono::steady_clock::now();
  while (true) {
    ++out.nodes;
    if (budget.max_nodes && out.nodes > *budget.max_nodes)
      throw BudgetExceeded("search: node limit " + std::to_string(*budget.max_nodes) + " reached");
    if ((out.nodes & 255) == 0) {
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      if (dt.count() > budget.time_limit_seconds) throw BudgetExceeded("search: time limit reached");
    }
    GlobalGluing g;
    for (std::size_t i = 0; i < sites.size(); ++i) g.set(sites[i], perms[i]);
    if (verify_immersed(tri, n, sk, g).immersed) {
      out.witness = std::move(g);
      return true;
    }
    std::size_t i = 0;
    while (i < perms.size() && !std::next_permutation(perms[i].begin(), perms[i].end())) ++i;
    if (i == perms.size()) return false;
  }
}

}  // namespace detail

/// Decides whether N admits a branch-free global gluing. A YES carries a
/// witness that has been checked by verify_immersed.
inline SearchResult brute_force_immersible(const Triangulation& tri, const NormalCoordinates& n,
                                           const SearchBudget& budget = {}) {
  auto mv = check_matching(tri, n);
  if (!mv.ok) throw std::invalid_argument("brute_force_immersible: matching equations fail");
  auto est = estimate_search_space(tri, n);
  check_budget(est, budget);
  const Skeleton sk = classify_skeleton(tri);
  SearchResult out;
  out.log2_space = est.log2_space;
  if (!budget.prune) {
    out.immersible = detail::plain_enumeration(tri, n, sk, budget, out);
  } else {
    CurveModel model(tri, n, sk);
    detail::ChainSearch search(model, budget);
    out.immersible = search.run();
    out.nodes = search.nodes();
    if (out.immersible) out.witness = search.gluing();
  }
  if (out.immersible && !verify_immersed(tri, n, sk, *out.witness).immersed)
    throw std::logic_error("brute_force_immersible: witness fails verification");
  return out;
}

/// Gluing for a bit vector over two-choice sites: 0 is the identity and 1 the
/// transposition; every other nonempty interior site has one arc.
inline GlobalGluing gluing_from_bits(const Triangulation& tri, const NormalCoordinates& n,
                                     const std::vector<Site>& interfaces, const Tuple& bits) {
  if (bits.size() != interfaces.size()) throw std::invalid_argument("gluing_from_bits: arity mismatch");
  GlobalGluing g;
  for (const auto& s : interior_sites(tri)) {
    std::size_t k = to_index(arc_count(n, s), "gluing_from_bits");
    if (k == 0) continue;
    g.set(s, identity_permutation(k));
  }
  for (std::size_t i = 0; i < interfaces.size(); ++i)
    g.set(site_of(tri, interfaces[i]), bits[i] ? Permutation{1, 0} : Permutation{0, 1});
  return g;
}

/// The set of bit vectors whose gluing is branch-free.
inline Relation extract_gadget_relation(const Triangulation& tri, const NormalCoordinates& n,
                                        const std::vector<Site>& interfaces) {
  const std::size_t r = interfaces.size();
  if (r > 20) throw BudgetExceeded("extract_gadget_relation: too many interfaces");
  std::set<Site> listed;
  for (const auto& s0 : interfaces) {
    const Site s = site_of(tri, s0);
    if (!listed.insert(s).second) throw std::invalid_argument("extract_gadget_relation: duplicate interface");
    if (arc_count(n, s) != 2)
      throw std::invalid_argument("extract_gadget_relation: interface " + detail::site_string(s) +
                                  " does not carry exactly two arcs");
  }
  for (const auto& s : interior_sites(tri))
    if (!listed.count(s) && arc_count(n, s) > 1)
      throw std::invalid_argument("extract_gadget_relation: unlisted site " + detail::site_string(s) +
                                  " carries more than one arc");
  const Skeleton sk = classify_skeleton(tri);
  std::set<Tuple> rel;
  for (std::size_t m = 0; m < (std::size_t{1} << r); ++m) {
    Tuple x(r);
    for (std::size_t i = 0; i < r; ++i) x[i] = (m >> (r - 1 - i)) & 1;
    if (verify_immersed(tri, n, sk, gluing_from_bits(tri, n, interfaces, x)).immersed) rel.insert(x);
  }
  if (rel.empty()) throw std::runtime_error("extract_gadget_relation: no gluing is branch-free");
  return Relation(r, std::move(rel));
}

}  // namespace snorm
