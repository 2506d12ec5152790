#include "ginavg/antisym.hpp"

#include <iomanip>
#include <istream>
#include <ostream>

namespace ginavg::antisym {

namespace {

double sgn(double x) { return (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

int padded_dim_for(int num_alpha) { return 2 * ((num_alpha + 1) / 2); }

}  // namespace

AntisymmetricMatrix<double> sign_matrix(const std::vector<double>& alpha) {
  const int l = static_cast<int>(alpha.size());
  const int dim = padded_dim_for(l);
  return AntisymmetricMatrix<double>::from_upper(dim, [&](int j, int k) {
    // 1-based row j+1, column k+1; padding column gets the index signs.
    if (k + 1 <= l) return sgn(alpha[k] - alpha[j]);
    return sgn(double(k - j));
  });
}

double sign_matrix_pf(const std::vector<double>& alpha) {
  const AntisymmetricMatrix<double> t = sign_matrix(alpha);
  if (t.dim() <= 12) return pfaffian_combinatorial(t).value;
  return pfaffian_elimination(t).value;
}

double sign_matrix_pf(const std::vector<double>& alpha, int padded_dim) {
  if (padded_dim != padded_dim_for(static_cast<int>(alpha.size())))
    throw std::invalid_argument(
        "sign_matrix_pf: padded_dim must be 2*floor((L+1)/2)");
  return sign_matrix_pf(alpha);
}

AntisymmetricMatrix<double> read_matrix(std::istream& in) {
  int n = -1;
  if (!(in >> n) || n < 0)
    throw std::invalid_argument("read_matrix: bad dimension line");
  std::vector<double> entries(size_t(n) * n);
  for (double& v : entries)
    if (!(in >> v)) throw std::invalid_argument("read_matrix: truncated matrix");
  return AntisymmetricMatrix<double>::from_entries(n, entries, 1e-12);
}

void write_matrix(std::ostream& out, const AntisymmetricMatrix<double>& a) {
  out << a.dim() << "\n";
  out << std::setprecision(17);
  for (int j = 0; j < a.dim(); ++j) {
    for (int k = 0; k < a.dim(); ++k) {
      if (k) out << " ";
      out << a.at(j, k);
    }
    out << "\n";
  }
}

}  // namespace ginavg::antisym
