#include "bfl/overlay.hpp"

#include <algorithm>
#include <climits>

namespace bfl {

bool OverlayGraph::pair_le(int j, int i, int i2) const {
  __int128 lhs = static_cast<__int128>(slack_num(i, j)) * den_[i2] +
                 static_cast<__int128>(slack_num(i2, j)) * den_[i];
  return lhs <= 0;
}

OverlayGraph::OverlayGraph(const Instance& inst, const RadiusProfile& profile) : inst_(&inst) {
  const int n_f = inst.n_f, n_c = inst.n_c;
  num_.assign(n_f + 1, 0);
  den_.assign(n_f + 1, 1);
  for (int i = 1; i <= n_f; ++i) {
    num_[i] = profile.r[i].num_i64();
    den_[i] = profile.r[i].den_i64();
  }
  class_of_ = profile.class_of;
  num_classes_ = profile.num_classes;

  class_members_.assign(num_classes_, {});
  for (int i = 1; i <= n_f; ++i) class_members_[class_of_[i]].push_back(i);
  class_offset_.assign(num_classes_ + 1, 0);
  for (int c = 0; c < num_classes_; ++c)
    class_offset_[c + 1] = class_offset_[c] + static_cast<int>(class_members_[c].size());

  ord_.assign(static_cast<size_t>(n_c) * n_f, 0);
  lower_min_.assign(static_cast<size_t>(n_c) * num_classes_, INT64_MAX);
  for (int j = 1; j <= n_c; ++j) {
    int32_t* slab = ord_.data() + static_cast<size_t>(j - 1) * n_f;
    for (int c = 0; c < num_classes_; ++c) {
      int32_t* seg = slab + class_offset_[c];
      for (size_t k = 0; k < class_members_[c].size(); ++k) seg[k] = class_members_[c][k];
      std::sort(seg, seg + class_members_[c].size(), [&](int32_t a, int32_t b) {
        __int128 lhs = static_cast<__int128>(slack_num(a, j)) * den_[b];
        __int128 rhs = static_cast<__int128>(slack_num(b, j)) * den_[a];
        if (lhs != rhs) return lhs < rhs;
        return a < b;
      });
    }
    int64_t* mins = lower_min_.data() + static_cast<size_t>(j - 1) * num_classes_;
    int64_t running = INT64_MAX;
    for (int c = 0; c < num_classes_; ++c) {
      mins[c] = running;
      for (int i : class_members_[c]) running = std::min(running, inst.dist(i, j));
    }
  }

  std::vector<char> all(n_f + 1, 1);
  std::vector<char> seen(static_cast<size_t>(n_f) * n_f, 0);
  for (int j = 1; j <= n_c; ++j)
    for (const EdgeMessage& e : witness_edges(j, all)) {
      size_t key = static_cast<size_t>(e.u - 1) * n_f + (e.v - 1);
      if (!seen[key]) {
        seen[key] = 1;
        edges_.push_back(e);
      }
    }
  std::sort(edges_.begin(), edges_.end());
}

bool OverlayGraph::witnesses(int j, int i, int i2) const {
  if (i == i2 || class_of_[i] != class_of_[i2]) return false;
  return pair_le(j, i, i2);
}

// Both pair walks below rely on the same prefix property: with the class
// segment ascending by slack, the partners of ord[q] form a prefix whose
// length is nonincreasing in q.
int64_t OverlayGraph::witness_count(int j, const std::vector<char>& active) const {
  const int n_f = inst_->n_f;
  const int32_t* slab = ord_.data() + static_cast<size_t>(j - 1) * n_f;
  int64_t count = 0;
  std::vector<int32_t> ids;
  for (int c = 0; c < num_classes_; ++c) {
    ids.clear();
    for (int k = class_offset_[c]; k < class_offset_[c + 1]; ++k)
      if (active[slab[k]]) ids.push_back(slab[k]);
    int m = static_cast<int>(ids.size());
    int lim = m;
    for (int q = 0; q < m; ++q) {
      while (lim > 0 && !pair_le(j, ids[lim - 1], ids[q])) --lim;
      count += std::min(lim, q);
    }
  }
  return count;
}

std::vector<EdgeMessage> OverlayGraph::witness_edges(int j,
                                                     const std::vector<char>& members) const {
  const int n_f = inst_->n_f;
  const int32_t* slab = ord_.data() + static_cast<size_t>(j - 1) * n_f;
  std::vector<EdgeMessage> out;
  std::vector<int32_t> ids;
  for (int c = 0; c < num_classes_; ++c) {
    ids.clear();
    for (int k = class_offset_[c]; k < class_offset_[c + 1]; ++k)
      if (members[slab[k]]) ids.push_back(slab[k]);
    int m = static_cast<int>(ids.size());
    int lim = m;
    for (int q = 0; q < m; ++q) {
      while (lim > 0 && !pair_le(j, ids[lim - 1], ids[q])) --lim;
      for (int p = 0; p < std::min(lim, q); ++p) {
        int32_t u = std::min(ids[p], ids[q]), v = std::max(ids[p], ids[q]);
        out.push_back(EdgeMessage{u, v});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> OverlayGraph::dominated_by(int j, const std::vector<char>& candidate,
                                            const std::vector<char>& active) const {
  const int n_f = inst_->n_f;
  const int32_t* slab = ord_.data() + static_cast<size_t>(j - 1) * n_f;
  std::vector<int> out;
  for (int c = 0; c < num_classes_; ++c) {
    int best = 0;  // candidate with minimal slack; segment is ascending
    for (int k = class_offset_[c]; k < class_offset_[c + 1] && !best; ++k)
      if (candidate[slab[k]]) best = slab[k];
    if (!best) continue;
    for (int k = class_offset_[c]; k < class_offset_[c + 1]; ++k) {
      int i = slab[k];
      if (!active[i] || candidate[i]) continue;
      if (!pair_le(j, i, best)) break;  // ascending: later ids only get worse
      out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool OverlayGraph::client_vetoes(int j, int i) const {
  int c = class_of_[i];
  int64_t lower = lower_min_[static_cast<size_t>(j - 1) * num_classes_ + c];
  if (lower == INT64_MAX) return false;
  __int128 lhs = static_cast<__int128>(den_[i]) * (inst_->dist(i, j) + lower);
  return lhs <= static_cast<__int128>(2) * num_[i];
}

int64_t OverlayGraph::edge_count_among(const std::vector<char>& active) const {
  int64_t count = 0;
  for (const EdgeMessage& e : edges_)
    if (active[e.u] && active[e.v]) ++count;
  return count;
}

}  // namespace bfl
