#pragma once

// Dense complex linear-algebra helpers shared by every module. All routines
// take hermitian input where stated and never symmetrize silently.

#include <cstddef>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "cpdk/verdict.hpp"

namespace cpdk {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

struct HermitianEigen {
    Eigen::VectorXd values; ///< descending
    Matrix vectors;         ///< column i belongs to values(i)
};

/// Eigendecomposition of a hermitian matrix (lower triangle is read).
/// Eigenvalues are returned in descending order.
HermitianEigen hermitian_eigen(const Matrix &m);

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix &m);

/// True iff ||m - m*|| <= tol_rel * max(1, ||m||) in spectral norm.
bool is_hermitian_matrix(const Matrix &m, double tol_rel);

/// Smallest eigenvalue of a hermitian matrix and its unit eigenvector, when
/// it lies below -tol_rel * max(1, ||m||). Empty when m is PSD at tolerance.
std::optional<Witness> psd_violation(const Matrix &m, double tol_rel,
                                     std::size_t summand = 0);

/// Principal square root of a hermitian PSD matrix; eigenvalues below zero
/// are clamped to zero before taking roots.
Matrix psd_sqrt(const Matrix &m);

/// Moore-Penrose pseudoinverse; singular values at or below
/// rank_tol_rel * max(1, sigma_max) are discarded.
Matrix pseudo_inverse(const Matrix &m, double rank_tol_rel);

/// Largest entry modulus of a - b (shapes must agree).
double max_entry_difference(const Matrix &a, const Matrix &b);

/// Number of worker threads used for per-summand loops (default 1).
void set_summand_threads(unsigned threads);
unsigned summand_threads();

/// Runs fn(k) for k in [0, count). With more than one thread the calls may
/// run concurrently; callers write into slot k and reduce in order.
void for_each_summand(std::size_t count,
                      const std::function<void(std::size_t)> &fn);

} // namespace cpdk
