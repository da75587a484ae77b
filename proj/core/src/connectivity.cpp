#include "ein/connectivity.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace ein {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), sets_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t i) {
  std::size_t root = i;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[i] != root) {
    const std::size_t next = parent_[i];
    parent_[i] = root;
    i = next;
  }
  return root;
}

bool UnionFind::unite(std::size_t i, std::size_t j) {
  std::size_t a = find(i);
  std::size_t b = find(j);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --sets_;
  return true;
}

std::vector<std::vector<std::size_t>> knn_lists(const std::vector<Vec>& points, int k) {
  if (k < 1) throw PreconditionError("knn must be >= 1");
  const std::size_t count = points.size();
  std::vector<std::vector<std::size_t>> out(count);
  if (count == 0) return out;
  const auto dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw PreconditionError("knn_lists: mixed dimensions");
  }

  // Sweep along the axis of largest spread; exact pruning by the axis gap.
  Eigen::Index axis = 0;
  double best_spread = -1.0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    double lo = points.front()[a];
    double hi = lo;
    for (const auto& p : points) {
      lo = std::min(lo, p[a]);
      hi = std::max(hi, p[a]);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = a;
    }
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a][axis] < points[b][axis]; });
  std::vector<std::size_t> rank_of(count);
  for (std::size_t r = 0; r < count; ++r) rank_of[order[r]] = r;

  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), count - 1);
  using Entry = std::pair<double, std::size_t>;
  for (std::size_t i = 0; i < count; ++i) {
    std::priority_queue<Entry> heap;  // max-heap on (distance, index)
    const Vec& pi = points[i];
    auto consider = [&](std::size_t j) {
      const Entry e{(points[j] - pi).squaredNorm(), j};
      if (heap.size() < kk) {
        heap.push(e);
      } else if (e < heap.top()) {
        heap.pop();
        heap.push(e);
      }
    };
    auto pruned = [&](std::size_t j) {
      if (heap.size() < kk) return false;
      const double gap = points[j][axis] - pi[axis];
      return gap * gap > heap.top().first;
    };
    const std::size_t r = rank_of[i];
    std::size_t up = r + 1;
    std::size_t down = r;
    bool up_open = up < count;
    bool down_open = down > 0;
    while (up_open || down_open) {
      if (up_open) {
        if (pruned(order[up])) {
          up_open = false;
        } else {
          consider(order[up]);
          up_open = ++up < count;
        }
      }
      if (down_open) {
        if (pruned(order[down - 1])) {
          down_open = false;
        } else {
          consider(order[down - 1]);
          down_open = --down > 0;
        }
      }
    }
    auto& list = out[i];
    list.resize(heap.size());
    for (std::size_t slot = heap.size(); slot-- > 0;) {
      list[slot] = heap.top().second;
      heap.pop();
    }
  }
  return out;
}

Components components(const SampleCloud& cloud, int knn, KnnGraph graph) {
  if (knn < 1) throw PreconditionError("knn must be >= 1");
  if (cloud.points.empty()) throw PreconditionError("cannot analyse an empty cloud");
  const auto lists = knn_lists(cloud.points, knn);
  const std::size_t count = lists.size();
  UnionFind uf(count);
  if (graph == KnnGraph::Symmetric) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j : lists[i]) uf.unite(i, j);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j : lists[i]) {
        const auto& back = lists[j];
        if (std::find(back.begin(), back.end(), i) != back.end()) uf.unite(i, j);
      }
    }
  }
  Components out;
  out.count = uf.set_count();
  out.labels.assign(count, -1);
  std::vector<int> label_of_root(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t root = uf.find(i);
    if (label_of_root[root] < 0) {
      label_of_root[root] = static_cast<int>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.labels[i] = label_of_root[root];
    ++out.sizes[static_cast<std::size_t>(out.labels[i])];
  }
  return out;
}

}  // namespace ein
