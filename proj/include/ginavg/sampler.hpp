#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <vector>

#include "ginavg/quadrature.hpp"
#include "ginavg/weights.hpp"

namespace ginavg::sampler {

using weights::cd;
using weights::PsiSpec;
using quadrature::QuadratureConfig;

inline constexpr double kClassifyThreshold = 1e-8;

// Counter-based stream: value i is a pure function of (seed, i), so workers
// can draw disjoint ranges in any order and the estimate depends only on
// (seed, samples), never on the worker count.
std::uint64_t mix64(std::uint64_t z);
double uniform_at(std::uint64_t seed, std::uint64_t counter);  // in (0, 1]
double normal_at(std::uint64_t seed, std::uint64_t counter);   // N(0, 1)

// Entries i.i.d. N(0,1); sample `index` owns counters [index n^2, ...).
Eigen::MatrixXd sample_ginoe(int n, std::uint64_t seed,
                             std::uint64_t index = 0);
// Real and imaginary parts i.i.d. N(0,1), so E|z|^2 = 2.
Eigen::MatrixXcd sample_ginue(int n, std::uint64_t seed,
                              std::uint64_t index = 0);

// L real eigenvalues plus M upper-half-plane pair representatives.
struct Spectrum {
  std::vector<double> reals;
  std::vector<cd> pairs;

  int l() const { return static_cast<int>(reals.size()); }
  int m() const { return static_cast<int>(pairs.size()); }
  int n() const { return l() + 2 * m(); }
};

// |Im| <= threshold (1 + |lambda|) goes to the real bucket; the rest must
// match into conjugate pairs or a numerical_error reports the spectrum as
// unclassifiable (threshold too small for the collision).
Spectrum classify_spectrum(const std::vector<cd>& eigenvalues,
                           double threshold = kClassifyThreshold);

struct McEstimate {
  double mean;
  double std_error;  // sample stddev / sqrt(effective samples)
  std::int64_t samples;
  std::uint64_t seed;
  std::int64_t skipped;
};

enum class Ensemble { ginoe, ginue };

// Mean of prod psi(lambda) over sampled spectra.  For the real ensemble the
// product is taken over the classified spectrum and its imaginary residue
// must stay below 1e-8 relative (conjugate pairing makes it ~0); violations
// and solver failures are skipped and counted, with a skip rate above 0.1%
// escalated to a numerical_error.  For the plane ensemble single samples
// are legitimately complex and the real part is averaged.  `csv`, when
// given, receives one "index,L,M,product" row per accepted sample (the
// plane ensemble has no L/M decomposition and writes 0,0).
McEstimate mc_average(Ensemble ensemble, int n, const PsiSpec& psi,
                      std::int64_t samples, std::uint64_t seed,
                      double classify_threshold = kClassifyThreshold,
                      std::ostream* csv = nullptr);

struct RealCountHistogram {
  std::vector<std::int64_t> counts;  // counts[l], size n + 1
  std::int64_t samples;
  std::int64_t skipped;

  double probability(int l) const;
};

RealCountHistogram real_count_distribution(
    int n, std::int64_t samples, std::uint64_t seed,
    double threshold = kClassifyThreshold);

// Partial eigenvalue density at (alpha, beta), L + 2M = n: the Vandermonde
// magnitude times Gaussian and erfcx-stabilized pair factors over C_n L! M!.
double jpdf_partial(const std::vector<double>& alpha,
                    const std::vector<cd>& beta, int n);

// Probability of the (L, M) sector by quadrature of the partial density;
// pair representatives live in both half planes, so each pair contributes
// twice its upper-half integral.  Implemented for n <= 2.
double jpdf_sector_probability(int n, int l, int m,
                               const QuadratureConfig& cfg);

}  // namespace ginavg::sampler
