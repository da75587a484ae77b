#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ein/models.hpp"

namespace ein {

/// Point cloud in chart coordinates, with the data needed to regenerate it.
struct SampleCloud {
  std::vector<Vec> points;
  std::uint64_t seed = 0;
  std::string meta;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t i);
  /// Returns true when the two sets were distinct.
  bool unite(std::size_t i, std::size_t j);
  std::size_t set_count() const { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t sets_;
};

enum class KnnGraph {
  Mutual,     // edge iff each point is among the other's k nearest
  Symmetric,  // edge iff either point is among the other's k nearest
};

struct Components {
  std::size_t count = 0;
  /// Component label per point; labels are numbered by first occurrence in
  /// input order, so they do not depend on traversal order.
  std::vector<int> labels;
  std::vector<std::size_t> sizes;
};

/// Indices of the k nearest neighbours of every point (ties broken by index).
std::vector<std::vector<std::size_t>> knn_lists(const std::vector<Vec>& points, int k);

/// Connected components of the kNN graph of `cloud`. Throws
/// PreconditionError when knn < 1 or the cloud is empty.
Components components(const SampleCloud& cloud, int knn, KnnGraph graph = KnnGraph::Mutual);

}  // namespace ein
