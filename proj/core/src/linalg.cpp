#include "proxeq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace proxeq {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

bool Vector::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "Matrix initializer rows have unequal lengths");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diag(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Vector operator+(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "vector size mismatch in +");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "vector size mismatch in -");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(double s, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Vector operator-(const Vector& a) { return -1.0 * a; }

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "matrix shape mismatch in +: " + dims(a) + " vs " + dims(b));
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "matrix shape mismatch in -: " + dims(a) + " vs " + dims(b));
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

Matrix operator-(const Matrix& a) { return -1.0 * a; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(),
          "matmul shape mismatch: " + dims(a) + " * " + dims(b));
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Vector matvec(const Matrix& a, const Vector& x) {
  require(a.cols() == x.size(),
          "matvec shape mismatch: " + dims(a) + " * " + std::to_string(x.size()));
  Vector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

Matrix transpose(const Matrix& a) {
  Matrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

Matrix outer(const Vector& a, const Vector& b) {
  Matrix r(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r(i, j) = a[i] * b[j];
  return r;
}

double dot(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "vector size mismatch in dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

double trace(const Matrix& a) {
  require(a.rows() == a.cols(), "trace of non-square matrix " + dims(a));
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  double scale = 1.0;
  for (double x : a.data()) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol * scale) return false;
  return true;
}

Matrix symmetrize(const Matrix& a) {
  require(a.rows() == a.cols(), "symmetrize of non-square matrix " + dims(a));
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      r(i, j) = 0.5 * (a(i, j) + a(j, i));
  return r;
}

SymEig sym_eig(const Matrix& input, double sym_tol) {
  require(input.rows() == input.cols(), "sym_eig of non-square matrix " + dims(input));
  require(is_symmetric(input, sym_tol), "sym_eig input not symmetric within tolerance");
  const std::size_t n = input.rows();
  Matrix a = symmetrize(input);
  Matrix v = Matrix::identity(n);

  auto off_norm = [&a, n]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  const double scale = std::max(frobenius_norm(a), 1e-300);
  const int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-15 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Classic Jacobi rotation: pick tan(theta) with |t| <= 1 for stability.
        const double tau = (aqq - app) / (2.0 * apq);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort ascending, carrying eigenvector columns along.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEig out;
  out.values = Vector(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

// Fill zero columns of u (flagged by zero singular value) with unit vectors
// orthogonal to all other columns, so u always has k orthonormal columns.
void complete_orthonormal_columns(Matrix& u, const std::vector<bool>& needs_fill) {
  const std::size_t m = u.rows();
  const std::size_t k = u.cols();
  for (std::size_t j = 0; j < k; ++j) {
    if (!needs_fill[j]) continue;
    for (std::size_t attempt = 0; attempt < m; ++attempt) {
      Vector cand(m);
      cand[attempt] = 1.0;
      for (std::size_t c = 0; c < k; ++c) {
        if (c == j) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += cand[i] * u(i, c);
        for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * u(i, c);
      }
      const double nrm = norm2(cand);
      if (nrm > 1e-8) {
        for (std::size_t i = 0; i < m; ++i) u(i, j) = cand[i] / nrm;
        break;
      }
    }
  }
}

}  // namespace

Svd svd(const Matrix& input) {
  // Work with a tall matrix; if the input is wide, decompose the transpose
  // and swap the factors at the end.
  const bool transposed = input.rows() < input.cols();
  Matrix a = transposed ? transpose(input) : input;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  Matrix v = Matrix::identity(n);
  const double scale = std::max(frobenius_norm(a), 1e-300);
  const int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (std::abs(gamma) <= 1e-16 * scale * scale) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        double t;
        if (zeta >= 0.0)
          t = 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta));
        else
          t = -1.0 / (-zeta + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < m; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    if (!rotated) break;
  }

  Vector s(n);
  Matrix u = a;
  std::vector<bool> zero_col(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += a(i, j) * a(i, j);
    nrm = std::sqrt(nrm);
    s[j] = nrm;
    if (nrm > 1e-300) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = a(i, j) / nrm;
    } else {
      s[j] = 0.0;
      zero_col[j] = true;
      for (std::size_t i = 0; i < m; ++i) u(i, j) = 0.0;
    }
  }

  // Sort singular values descending.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&s](std::size_t i, std::size_t j) { return s[i] > s[j]; });
  Svd out;
  out.s = Vector(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  std::vector<bool> needs_fill(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    out.s[k] = s[order[k]];
    needs_fill[k] = zero_col[order[k]];
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = u(i, order[k]);
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, order[k]);
  }
  complete_orthonormal_columns(out.u, needs_fill);

  if (transposed) std::swap(out.u, out.v);
  return out;
}

Matrix matrix_sqrt_psd(const Matrix& m) {
  require(m.rows() == m.cols(), "matrix_sqrt_psd of non-square matrix " + dims(m));
  if (!is_symmetric(m, 1e-12))
    throw std::domain_error("matrix_sqrt_psd: input not symmetric within 1e-12");
  SymEig eig = sym_eig(m);
  Vector roots(eig.values.size());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    double lam = eig.values[i];
    if (lam < -1e-10)
      throw std::domain_error("matrix_sqrt_psd: indefinite input, eigenvalue " +
                              std::to_string(lam));
    roots[i] = std::sqrt(std::max(lam, 0.0));
  }
  Matrix s = matmul(matmul(eig.vectors, Matrix::diag(roots)), transpose(eig.vectors));
  return symmetrize(s);
}

Matrix pinv_psd(const Matrix& m, double rank_tol) {
  require(m.rows() == m.cols(), "pinv_psd of non-square matrix " + dims(m));
  SymEig eig = sym_eig(m);
  double lam_max = 0.0;
  for (std::size_t i = 0; i < eig.values.size(); ++i)
    lam_max = std::max(lam_max, std::abs(eig.values[i]));
  Vector inv(eig.values.size());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values[i];
    inv[i] = (lam > rank_tol * std::max(lam_max, 1.0)) ? 1.0 / lam : 0.0;
  }
  return symmetrize(
      matmul(matmul(eig.vectors, Matrix::diag(inv)), transpose(eig.vectors)));
}

Matrix inverse_spd(const Matrix& m, double min_eig) {
  require(m.rows() == m.cols(), "inverse_spd of non-square matrix " + dims(m));
  SymEig eig = sym_eig(m);
  Vector inv(eig.values.size());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values[i];
    if (lam <= min_eig)
      throw std::domain_error("inverse_spd: eigenvalue " + std::to_string(lam) +
                              " not positive definite (threshold " +
                              std::to_string(min_eig) + ")");
    inv[i] = 1.0 / lam;
  }
  return symmetrize(
      matmul(matmul(eig.vectors, Matrix::diag(inv)), transpose(eig.vectors)));
}

double log_det_spd(const Matrix& m, double min_eig) {
  SymEig eig = sym_eig(m);
  double ld = 0.0;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values[i];
    if (lam <= min_eig)
      throw std::domain_error("log_det_spd: eigenvalue " + std::to_string(lam) +
                              " below positive-definite threshold");
    ld += std::log(lam);
  }
  return ld;
}

std::string to_string(const Vector& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
  }
  os << "]";
  return os.str();
}

}  // namespace proxeq
