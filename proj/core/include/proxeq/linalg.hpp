#pragma once

// Dense row-major matrices and vectors for the small (dim <= ~16) problems
// this library works with. Decompositions are Jacobi-type: robustness and
// determinism matter here, speed does not.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace proxeq {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> xs) : data_(xs) {}

  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool all_finite() const;

 private:
  std::vector<double> data_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // Row-major nested initializer: Matrix{{1,2},{3,4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diag(const Vector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---- element-wise arithmetic (dimension mismatch throws) ------------------

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
Vector operator-(const Vector& a);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix operator-(const Matrix& a);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);
Matrix transpose(const Matrix& a);
Matrix outer(const Vector& a, const Vector& b);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double frobenius_norm(const Matrix& a);
double trace(const Matrix& a);

bool is_symmetric(const Matrix& a, double tol);
// (a + a^T)/2.
Matrix symmetrize(const Matrix& a);

// ---- decompositions --------------------------------------------------------

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // columns are the corresponding orthonormal eigenvectors
};

// Cyclic Jacobi eigensolver for symmetric input. Throws std::invalid_argument
// if the input is not symmetric within `sym_tol` (absolute, scaled by the
// largest entry magnitude).
SymEig sym_eig(const Matrix& a, double sym_tol = 1e-12);

struct Svd {
  Matrix u;   // rows() x k orthonormal columns, k = min(rows, cols)
  Vector s;   // singular values, descending, >= 0
  Matrix v;   // cols() x k orthonormal columns; a = u * diag(s) * v^T
};

// One-sided (Hestenes) Jacobi SVD. Columns of u belonging to zero singular
// values are completed to an orthonormal basis so callers may raise zero
// singular values and still reassemble a valid matrix.
Svd svd(const Matrix& a);

// Symmetric PSD square root: S with S*S = m, ||S*S - m||_F <= 1e-9.
// Eigenvalues in [-1e-10, 0) are clamped to zero; anything below -1e-10 is a
// domain error naming the offending eigenvalue.
Matrix matrix_sqrt_psd(const Matrix& m);

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix (eigenvalues below
// `rank_tol` treated as zero).
Matrix pinv_psd(const Matrix& m, double rank_tol = 1e-12);

// Inverse of a symmetric positive definite matrix; throws std::domain_error
// if the smallest eigenvalue is <= min_eig.
Matrix inverse_spd(const Matrix& m, double min_eig = 0.0);

// log(det(m)) for symmetric PD input; throws std::domain_error when an
// eigenvalue is <= min_eig.
double log_det_spd(const Matrix& m, double min_eig = 1e-10);

std::string to_string(const Vector& v);
std::string to_string(const Matrix& m);

}  // namespace proxeq
