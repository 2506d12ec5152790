#include "ginavg/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ginavg/averages.hpp"
#include "ginavg/errors.hpp"
#include "ginavg/special.hpp"

namespace ginavg::sampler {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::int64_t kChunk = 4096;

int env_thread_count() {
  if (const char* text = std::getenv("GINAVG_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(text, &end, 10);
    if (end != text && parsed >= 1)
      return static_cast<int>(std::min(parsed, 64L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SampleRow {
  double value;
  int l;
  int m;
};

bool eval_ginoe_sample(int n, const PsiSpec& psi, std::uint64_t seed,
                       std::int64_t index, double threshold, SampleRow* out) {
  const Eigen::MatrixXd mat =
      sample_ginoe(n, seed, static_cast<std::uint64_t>(index));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(mat, false);
  if (solver.info() != Eigen::Success) return false;

  std::vector<cd> eigenvalues(n);
  for (int i = 0; i < n; ++i) eigenvalues[i] = solver.eigenvalues()(i);
  Spectrum spectrum;
  try {
    spectrum = classify_spectrum(eigenvalues, threshold);
  } catch (const numerical_error&) {
    return false;
  }

  cd product = 1.0;
  for (double a : spectrum.reals) product *= psi.eval(cd(a, 0.0));
  for (const cd& b : spectrum.pairs) {
    product *= psi.eval(b);
    product *= psi.eval(std::conj(b));
  }
  const double scale = std::abs(product);
  if (!std::isfinite(scale)) return false;
  // Conjugate pairing keeps the product real up to roundoff.
  if (scale > 0.0 && std::abs(product.imag()) >= 1e-8 * scale) return false;
  *out = {product.real(), spectrum.l(), spectrum.m()};
  return true;
}

bool eval_ginue_sample(int n, const PsiSpec& psi, std::uint64_t seed,
                       std::int64_t index, SampleRow* out) {
  const Eigen::MatrixXcd mat =
      sample_ginue(n, seed, static_cast<std::uint64_t>(index));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mat, false);
  if (solver.info() != Eigen::Success) return false;

  cd product = 1.0;
  for (int i = 0; i < n; ++i) product *= psi.eval(solver.eigenvalues()(i));
  if (!std::isfinite(std::abs(product))) return false;
  *out = {product.real(), 0, 0};
  return true;
}

struct ChunkStat {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t accepted = 0;
  std::int64_t skipped = 0;
  std::vector<std::int64_t> counts;
  std::string csv;
};

// Chunk c always covers sample indices [c kChunk, (c+1) kChunk) and is
// accumulated in index order by exactly one worker, so the folded result is
// a pure function of (seed, samples) whatever GINAVG_THREADS says.
template <typename EvalFn>
std::vector<ChunkStat> run_chunks(std::int64_t samples, int n, bool want_csv,
                                  const EvalFn& eval) {
  const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkStat> stats(static_cast<std::size_t>(n_chunks));
  std::atomic<std::int64_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      ChunkStat& st = stats[static_cast<std::size_t>(c)];
      st.counts.assign(static_cast<std::size_t>(n) + 1, 0);
      std::ostringstream rows;
      const std::int64_t lo = c * kChunk;
      const std::int64_t hi = std::min(samples, lo + kChunk);
      for (std::int64_t s = lo; s < hi; ++s) {
        SampleRow row;
        if (!eval(s, &row)) {
          ++st.skipped;
          continue;
        }
        st.sum += row.value;
        st.sum_sq += row.value * row.value;
        ++st.accepted;
        ++st.counts[static_cast<std::size_t>(row.l)];
        if (want_csv)
          rows << s << ',' << row.l << ',' << row.m << ','
               << format_value(row.value) << '\n';
      }
      if (want_csv) st.csv = rows.str();
    }
  };

  const int workers =
      static_cast<int>(std::min<std::int64_t>(env_thread_count(), n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return stats;
}

void enforce_skip_rate(std::int64_t skipped, std::int64_t samples) {
  if (skipped * 1000 > samples)
    throw numerical_error("sampler: skip rate above 0.1% (" +
                          std::to_string(skipped) + " of " +
                          std::to_string(samples) + " samples)");
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double uniform_at(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = mix64(mix64(seed) + kGolden * (counter + 1));
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double normal_at(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t pair = counter >> 1;
  const double u1 = uniform_at(seed, 2 * pair);
  const double u2 = uniform_at(seed, 2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (counter & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
}

Eigen::MatrixXd sample_ginoe(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw std::invalid_argument("sample_ginoe: n must be positive");
  const std::uint64_t dim = static_cast<std::uint64_t>(n);
  const std::uint64_t base = index * dim * dim;
  Eigen::MatrixXd mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mat(i, j) = normal_at(seed, base + dim * static_cast<std::uint64_t>(i) +
                                      static_cast<std::uint64_t>(j));
  return mat;
}

Eigen::MatrixXcd sample_ginue(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw std::invalid_argument("sample_ginue: n must be positive");
  const std::uint64_t dim = static_cast<std::uint64_t>(n);
  const std::uint64_t base = 2 * index * dim * dim;
  Eigen::MatrixXcd mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::uint64_t entry =
          dim * static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(j);
      mat(i, j) = cd(normal_at(seed, base + 2 * entry),
                     normal_at(seed, base + 2 * entry + 1));
    }
  return mat;
}

Spectrum classify_spectrum(const std::vector<cd>& eigenvalues,
                           double threshold) {
  if (threshold <= 0.0)
    throw std::invalid_argument("classify_spectrum: threshold must be positive");
  Spectrum spectrum;
  std::vector<cd> upper, lower;
  for (const cd& lambda : eigenvalues) {
    if (std::abs(lambda.imag()) <= threshold * (1.0 + std::abs(lambda)))
      spectrum.reals.push_back(lambda.real());
    else if (lambda.imag() > 0.0)
      upper.push_back(lambda);
    else
      lower.push_back(lambda);
  }
  if (upper.size() != lower.size())
    throw numerical_error(
        "classify_spectrum: half planes unbalanced (threshold too small)");

  std::vector<bool> used(lower.size(), false);
  for (const cd& up : upper) {
    const cd want = std::conj(up);
    std::size_t best = lower.size();
    double best_dist = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(lower[i] - want);
      if (best == lower.size() || dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
    if (best == lower.size() ||
        best_dist > 2.0 * threshold * (1.0 + std::abs(up)))
      throw numerical_error(
          "classify_spectrum: unpaired complex eigenvalue (threshold too "
          "small)");
    used[best] = true;
    spectrum.pairs.push_back(up);
  }
  return spectrum;
}

McEstimate mc_average(Ensemble ensemble, int n, const PsiSpec& psi,
                      std::int64_t samples, std::uint64_t seed,
                      double classify_threshold, std::ostream* csv) {
  if (n < 1) throw std::invalid_argument("mc_average: n must be positive");
  if (samples < 1)
    throw std::invalid_argument("mc_average: samples must be positive");
  if (ensemble == Ensemble::ginoe && !psi.polynomial_type())
    throw std::invalid_argument(
        "mc_average: the modulus-squared seed is accepted by the plane "
        "ensemble only");

  auto eval = [&](std::int64_t s, SampleRow* out) {
    return ensemble == Ensemble::ginoe
               ? eval_ginoe_sample(n, psi, seed, s, classify_threshold, out)
               : eval_ginue_sample(n, psi, seed, s, out);
  };
  const std::vector<ChunkStat> stats =
      run_chunks(samples, n, csv != nullptr, eval);

  double sum = 0.0, sum_sq = 0.0;
  std::int64_t accepted = 0, skipped = 0;
  for (const ChunkStat& st : stats) {
    sum += st.sum;
    sum_sq += st.sum_sq;
    accepted += st.accepted;
    skipped += st.skipped;
  }
  enforce_skip_rate(skipped, samples);
  if (accepted == 0) throw numerical_error("mc_average: no accepted samples");
  if (csv)
    for (const ChunkStat& st : stats) *csv << st.csv;

  const double mean = sum / static_cast<double>(accepted);
  double variance = 0.0;
  if (accepted > 1) {
    const double count = static_cast<double>(accepted);
    variance = std::max(0.0, (sum_sq - sum * sum / count) / (count - 1.0));
  }
  const double std_error =
      std::sqrt(variance / static_cast<double>(accepted));
  return {mean, std_error, samples, seed, skipped};
}

double RealCountHistogram::probability(int l) const {
  if (l < 0 || l >= static_cast<int>(counts.size()))
    throw std::invalid_argument("RealCountHistogram: L out of range");
  std::int64_t accepted = 0;
  for (std::int64_t c : counts) accepted += c;
  if (accepted == 0)
    throw numerical_error("RealCountHistogram: no accepted samples");
  return static_cast<double>(counts[static_cast<std::size_t>(l)]) /
         static_cast<double>(accepted);
}

RealCountHistogram real_count_distribution(int n, std::int64_t samples,
                                           std::uint64_t seed,
                                           double threshold) {
  if (n < 1)
    throw std::invalid_argument("real_count_distribution: n must be positive");
  if (samples < 1)
    throw std::invalid_argument(
        "real_count_distribution: samples must be positive");

  const PsiSpec one = PsiSpec::one();
  auto eval = [&](std::int64_t s, SampleRow* out) {
    return eval_ginoe_sample(n, one, seed, s, threshold, out);
  };
  const std::vector<ChunkStat> stats = run_chunks(samples, n, false, eval);

  RealCountHistogram hist;
  hist.counts.assign(static_cast<std::size_t>(n) + 1, 0);
  hist.samples = samples;
  hist.skipped = 0;
  for (const ChunkStat& st : stats) {
    hist.skipped += st.skipped;
    for (std::size_t l = 0; l < hist.counts.size(); ++l)
      hist.counts[l] += st.counts[l];
  }
  enforce_skip_rate(hist.skipped, samples);
  return hist;
}

double jpdf_partial(const std::vector<double>& alpha,
                    const std::vector<cd>& beta, int n) {
  const int l = static_cast<int>(alpha.size());
  const int m = static_cast<int>(beta.size());
  if (n < 1 || l + 2 * m != n)
    throw std::invalid_argument("jpdf_partial: need L + 2M = n");

  const std::vector<cd> gamma = weights::ordered_spectrum(alpha, beta);
  const double abs_delta = std::abs(weights::vandermonde_delta(gamma));
  if (abs_delta == 0.0) return 0.0;

  double log_acc = std::log(abs_delta) - averages::constant_c(n).log_abs -
                   std::lgamma(l + 1.0) - std::lgamma(m + 1.0);
  for (double a : alpha) log_acc -= 0.5 * a * a;
  for (const cd& b : beta) {
    // erfc(sqrt2 |y|) e^{-(b^2 + conj(b)^2)/2} = erfcx(sqrt2 |y|) e^{-x^2-y^2}
    const double x = b.real(), y = b.imag();
    log_acc += std::log(special::erfcx(std::sqrt(2.0) * std::abs(y))) - x * x -
               y * y;
  }
  const double value = std::exp(log_acc);
  if (!std::isfinite(value))
    throw numerical_error("jpdf_partial: density overflow");
  return value;
}

double jpdf_sector_probability(int n, int l, int m,
                               const QuadratureConfig& cfg) {
  if (n < 1 || l < 0 || m < 0 || l + 2 * m != n)
    throw std::invalid_argument(
        "jpdf_sector_probability: sector must satisfy L + 2M = n");
  cfg.validate();

  if (n == 1)
    return quadrature::integrate_line(
        [](double a) { return jpdf_partial({a}, {}, 1); }, cfg);

  if (n == 2 && l == 2) {
    // The |a2 - a1| kink falls between quadrature panels only by luck, so
    // order the pair instead: P = C_2^{-1} int f(b) [b F(b) - G(b)] db with
    // F, G the prefix mass and first moment of f(a) = e^{-a^2/2}.
    auto f = [](double a) { return std::exp(-0.5 * a * a); };
    const quadrature::CumulativeIntegral mass(f, cfg);
    const quadrature::CumulativeIntegral first(
        [&](double a) { return a * f(a); }, cfg);
    const double ordered = quadrature::integrate_line(
        [&](double b) { return f(b) * (b * mass(b) - first(b)); }, cfg);
    return ordered / averages::constant_c(2).value();
  }

  if (n == 2 && m == 1) {
    // The density is invariant under conjugating the representative, so the
    // punctured-plane sector is twice its upper-half integral.
    const double upper = quadrature::integrate_halfplane(
        [](double x, double y) { return jpdf_partial({}, {cd(x, y)}, 2); },
        cfg);
    return 2.0 * upper;
  }

  throw std::invalid_argument(
      "jpdf_sector_probability: quadrature sectors are implemented for n <= "
      "2");
}

}  // namespace ginavg::sampler
