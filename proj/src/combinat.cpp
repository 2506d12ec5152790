#include "ginavg/combinat.hpp"

#include <algorithm>

namespace ginavg::combinat {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  k = std::min(k, n - k);
  std::vector<std::int64_t> row(k + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = std::min(i, k); j >= 1; --j) row[j] += row[j - 1];
  return row[k];
}

Permutation::Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
  const int n = static_cast<int>(map_.size());
  std::vector<bool> seen(n + 1, false);
  for (int v : map_) {
    if (v < 1 || v > n || seen[v])
      throw std::invalid_argument("Permutation: mapping is not a bijection on 1..n");
    seen[v] = true;
  }
}

int Permutation::sign() const {
  const int n = size();
  int inv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (map_[i] > map_[j]) ++inv;
  return (inv % 2 == 0) ? +1 : -1;
}

int Permutation::sign_by_transpositions() const {
  const int n = size();
  std::vector<bool> visited(n + 1, false);
  int transpositions = 0;
  for (int start = 1; start <= n; ++start) {
    if (visited[start]) continue;
    int len = 0;
    int v = start;
    while (!visited[v]) {
      visited[v] = true;
      v = map_[v - 1];
      ++len;
    }
    transpositions += len - 1;
  }
  return (transpositions % 2 == 0) ? +1 : -1;
}

IncreasingMap::IncreasingMap(int n, std::vector<int> image)
    : n_(n), image_(std::move(image)) {
  if (n_ < 0 || static_cast<int>(image_.size()) > n_)
    throw std::invalid_argument("IncreasingMap: need 0 <= k <= n");
  int prev = 0;
  for (int v : image_) {
    if (v <= prev || v > n_)
      throw std::invalid_argument(
          "IncreasingMap: image must be strictly increasing within 1..n");
    prev = v;
  }
}

IncreasingMap IncreasingMap::complement() const {
  std::vector<int> rest;
  rest.reserve(n_ - k());
  std::size_t pos = 0;
  for (int v = 1; v <= n_; ++v) {
    if (pos < image_.size() && image_[pos] == v)
      ++pos;
    else
      rest.push_back(v);
  }
  return IncreasingMap(n_, std::move(rest));
}

Permutation IncreasingMap::iota() const {
  std::vector<int> mapping = image_;
  const IncreasingMap rest = complement();
  mapping.insert(mapping.end(), rest.image().begin(), rest.image().end());
  return Permutation(std::move(mapping));
}

std::vector<IncreasingMap> enumerate_increasing(int k, int n) {
  std::vector<IncreasingMap> out;
  for_each_increasing(k, n, [&](const IncreasingMap& t) { out.push_back(t); });
  return out;
}

std::vector<Permutation> enumerate_pi(int j) {
  std::vector<Permutation> out;
  for_each_pi(j, [&](const std::vector<int>& mapping, int) {
    out.emplace_back(mapping);
  });
  return out;
}

}  // namespace ginavg::combinat
