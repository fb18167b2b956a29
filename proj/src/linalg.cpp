#include "cpdk/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpdk {

namespace {
std::atomic<unsigned> g_summand_threads{1};
}

HermitianEigen hermitian_eigen(const Matrix &m)
{
    const auto n = m.rows();
    HermitianEigen out;
    if (n == 0) {
        out.values.resize(0);
        out.vectors.resize(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
    // Solver output is ascending; flip to descending.
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

double spectral_norm(const Matrix &m)
{
    if (m.size() == 0)
        return 0.0;
    if (m.rows() == 1 || m.cols() == 1)
        return m.norm();
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

bool is_hermitian_matrix(const Matrix &m, double tol_rel)
{
    if (m.rows() != m.cols())
        return false;
    const Matrix skew = m - m.adjoint();
    if (skew.cwiseAbs().maxCoeff() == 0.0)
        return true;
    return spectral_norm(skew) <= tol_rel * std::max(1.0, spectral_norm(m));
}

std::optional<Witness> psd_violation(const Matrix &m, double tol_rel,
                                     std::size_t summand)
{
    if (m.rows() == 0)
        return std::nullopt;
    const HermitianEigen eig = hermitian_eigen(m);
    const auto last = eig.values.size() - 1;
    const double lambda_min = eig.values(last);
    // For a hermitian matrix the spectral norm is the largest |eigenvalue|.
    const double norm = std::max(std::abs(eig.values(0)), std::abs(lambda_min));
    if (lambda_min >= -tol_rel * std::max(1.0, norm))
        return std::nullopt;
    return Witness{summand, eig.vectors.col(last), lambda_min};
}

Matrix psd_sqrt(const Matrix &m)
{
    if (m.rows() == 0)
        return m;
    const HermitianEigen eig = hermitian_eigen(m);
    const Eigen::VectorXd roots = eig.values.cwiseMax(0.0).cwiseSqrt();
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

Matrix pseudo_inverse(const Matrix &m, double rank_tol_rel)
{
    if (m.size() == 0)
        return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sigma = svd.singularValues();
    const double cutoff = rank_tol_rel * std::max(1.0, sigma(0));
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff)
            inv(i) = 1.0 / sigma(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double max_entry_difference(const Matrix &a, const Matrix &b)
{
    if (a.size() == 0)
        return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

void set_summand_threads(unsigned threads)
{
    g_summand_threads.store(std::max(1u, threads));
}

unsigned summand_threads() { return g_summand_threads.load(); }

void for_each_summand(std::size_t count,
                      const std::function<void(std::size_t)> &fn)
{
    const std::size_t workers =
        std::min<std::size_t>(summand_threads(), count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k)
            fn(k);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace cpdk
