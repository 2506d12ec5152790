#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ginavg::combinat {

// Values in Permutation and IncreasingMap are 1-based, matching the slot
// convention of the expansion formulas.  idx0 is the single conversion point
// to 0-based storage; every matrix lookup driven by these types goes through
// it.
constexpr int idx0(int one_based) { return one_based - 1; }

std::int64_t binomial(int n, int k);

class Permutation {
 public:
  Permutation() = default;  // empty permutation, sign +1
  explicit Permutation(std::vector<int> mapping);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int i) const { return map_[i - 1]; }
  const std::vector<int>& mapping() const { return map_; }

  // Parity of the inversion count.
  int sign() const;
  // Same parity via cycle decomposition; kept as an independent route.
  int sign_by_transpositions() const;

 private:
  std::vector<int> map_;
};

class IncreasingMap {
 public:
  IncreasingMap(int n, std::vector<int> image);

  int k() const { return static_cast<int>(image_.size()); }
  int n() const { return n_; }
  int operator()(int i) const { return image_[i - 1]; }
  const std::vector<int>& image() const { return image_; }

  IncreasingMap complement() const;
  // The permutation sending slots 1..k to image and slots k+1..n to the
  // complement image.
  Permutation iota() const;
  int sign() const { return iota().sign(); }

 private:
  int n_ = 0;
  std::vector<int> image_;
};

std::vector<IncreasingMap> enumerate_increasing(int k, int n);
std::vector<Permutation> enumerate_pi(int j);

// Streaming enumeration of increasing maps in lexicographic order.
template <typename Visitor>
void for_each_increasing(int k, int n, Visitor&& visit) {
  if (k < 0 || n < 0 || k > n)
    throw std::invalid_argument("for_each_increasing: need 0 <= k <= n");
  std::vector<int> image(k);
  for (int i = 0; i < k; ++i) image[i] = i + 1;
  while (true) {
    visit(IncreasingMap(n, image));
    if (k == 0) return;
    int i = k - 1;
    while (i >= 0 && image[i] == n - (k - 1 - i)) --i;
    if (i < 0) return;
    ++image[i];
    for (int j = i + 1; j < k; ++j) image[j] = image[j - 1] + 1;
  }
}

namespace detail {

// Fills position slots 2j-1, 2j with an unused pair (a, b), a < b, tracking
// the inversion parity incrementally: placing value v after `placed` values
// adds one inversion per already-placed value exceeding v.
template <typename Visitor>
void pi_recurse(int two_j, std::vector<int>& mapping, std::vector<bool>& used,
                int pos, int sign, Visitor& visit) {
  if (pos == two_j) {
    visit(const_cast<const std::vector<int>&>(mapping), sign);
    return;
  }
  for (int a = 1; a <= two_j; ++a) {
    if (used[a]) continue;
    int inv_a = 0;
    for (int v = a + 1; v <= two_j; ++v)
      if (used[v]) ++inv_a;
    used[a] = true;
    mapping[pos] = a;
    for (int b = a + 1; b <= two_j; ++b) {
      if (used[b]) continue;
      int inv_b = 0;
      for (int v = b + 1; v <= two_j; ++v)
        if (used[v]) ++inv_b;
      used[b] = true;
      mapping[pos + 1] = b;
      int s = ((inv_a + inv_b) % 2 == 0) ? sign : -sign;
      pi_recurse(two_j, mapping, used, pos + 2, s, visit);
      used[b] = false;
    }
    used[a] = false;
  }
}

}  // namespace detail

// Streams every sigma in S_{2j} with sigma(2i) > sigma(2i-1) for all i,
// together with its sign; (2j)!/2^j elements, never materialized.
template <typename Visitor>
void for_each_pi(int j, Visitor&& visit) {
  if (j < 0) throw std::invalid_argument("for_each_pi: j must be >= 0");
  std::vector<int> mapping(2 * j);
  std::vector<bool> used(2 * j + 1, false);
  detail::pi_recurse(2 * j, mapping, used, 0, +1, visit);
}

}  // namespace ginavg::combinat
