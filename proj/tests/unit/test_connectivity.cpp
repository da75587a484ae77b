#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "ein/connectivity.hpp"
#include "ein/random.hpp"

using namespace ein;

namespace {

SampleCloud cloud_of(std::vector<Vec> pts) {
  SampleCloud c;
  c.points = std::move(pts);
  return c;
}

// Plain O(N^2) neighbour lists with the same tie rule.
std::vector<std::vector<std::size_t>> brute_knn(const std::vector<Vec>& pts, int k) {
  std::vector<std::vector<std::size_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) all.emplace_back((pts[i] - pts[j]).squaredNorm(), j);
    }
    std::sort(all.begin(), all.end());
    for (int m = 0; m < k && m < static_cast<int>(all.size()); ++m) out[i].push_back(all[m].second);
  }
  return out;
}

}  // namespace

TEST_CASE("union-find") {
  UnionFind uf(6);
  CHECK(uf.set_count() == 6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(2, 3));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.unite(1, 3));
  CHECK(uf.find(0) == uf.find(2));
  CHECK(uf.find(4) != uf.find(5));
  CHECK(uf.set_count() == 3);
}

TEST_CASE("component examples") {
  Rng rng(21);
  std::vector<Vec> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(rng.normal_vec(3) * 0.1);
  for (int i = 0; i < 200; ++i) pts.push_back(rng.normal_vec(3) * 0.1 + Vec::Constant(3, 10.0));
  const Components c = components(cloud_of(pts), 10, KnnGraph::Symmetric);
  CHECK(c.count == 2);
  CHECK(c.labels.front() == 0);
  CHECK(c.labels.back() == 1);
  CHECK(c.sizes == std::vector<std::size_t>{200, 200});
  // Mutual edges can strand outliers but never join the clusters.
  const Components m = components(cloud_of(pts), 10, KnnGraph::Mutual);
  CHECK(m.count >= 2);
  CHECK(m.labels.front() != m.labels.back());
  std::vector<Vec> blob;
  for (int i = 0; i < 500; ++i) blob.push_back(rng.normal_vec(2));
  CHECK(components(cloud_of(blob), 10, KnnGraph::Symmetric).count == 1);
  CHECK(components(cloud_of({Vec::Zero(2)}), 3).count == 1);
}

TEST_CASE("component errors") {
  CHECK_THROWS_AS(components(cloud_of({}), 3), PreconditionError);
  CHECK_THROWS_AS(components(cloud_of({Vec::Zero(2)}), 0), PreconditionError);
  CHECK_THROWS_AS(knn_lists({Vec::Zero(2), Vec::Zero(3)}, 1), PreconditionError);
}

TEST_CASE("property: kNN matches brute force") {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<Vec> pts;
    for (int i = 0; i < 300; ++i) pts.push_back(rng.uniform_box(n, 1.0));
    // Duplicates and ties.
    pts.push_back(pts[5]);
    pts.push_back(pts[5]);
    for (int k : {1, 4, 10}) CHECK(knn_lists(pts, k) == brute_knn(pts, k));
  }
  std::vector<Vec> few{Vec::Zero(2), Vec::Ones(2)};
  CHECK(knn_lists(few, 5) == brute_knn(few, 5));
}

TEST_CASE("property: labels are independent of traversal and mutual refines symmetric") {
  Rng rng(23);
  std::vector<Vec> pts;
  for (int i = 0; i < 400; ++i) pts.push_back(rng.uniform_box(2, 1.0) + Vec::Constant(2, 3.0 * (i % 3)));
  const Components sym = components(cloud_of(pts), 4, KnnGraph::Symmetric);
  const Components mut = components(cloud_of(pts), 4, KnnGraph::Mutual);
  CHECK(mut.count >= sym.count);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); j += 37) {
      if (mut.labels[i] == mut.labels[j]) CHECK(sym.labels[i] == sym.labels[j]);
    }
  }
  std::set<int> seen;
  int next = 0;
  for (int l : sym.labels) {
    if (seen.insert(l).second) CHECK(l == next++);
  }
  CHECK(std::accumulate(sym.sizes.begin(), sym.sizes.end(), std::size_t{0}) == pts.size());
}
