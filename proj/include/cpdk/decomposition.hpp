#pragma once

// Kolmogorov factorizations of PD and CPD kernels, the sum-of-squared-
// differences form of zero-diagonal conditionally positive matrices, and
// majorization K' <= K with recovery of the contraction that realizes it.

#include <cstddef>
#include <string>
#include <vector>

#include "cpdk/algebra.hpp"
#include "cpdk/kernels.hpp"

namespace cpdk {

/// L(s,t) = V(s)* V(t) with V(s) in A^r. Ranks are the numerical ranks of
/// the Gram summands, so they are minimal. V is only defined up to a left
/// unitary per summand; compare module_inner values, never raw entries.
struct Factorization {
    IndexSet set;
    AlgebraDescriptor descriptor;
    std::vector<std::size_t> ranks;
    std::vector<ModuleElement> V; ///< in set order

    /// Per summand, the r_k x n*d_k matrix [V(s_1) ... V(s_n)].
    Matrix stacked(std::size_t summand) const;
    /// The kernel (s,t) -> V(s)* V(t).
    Kernel gram() const;
};

/// K(s,t) = 2 V(s)*V(t) - V(s)*V(s) - V(t)*V(t) - h(s) - h(t)*.
struct CPDDecomposition {
    Factorization factorization;
    std::vector<AlgebraElement> h; ///< in set order
    std::string base_point;
};

struct MajorizationCertificate {
    std::vector<Matrix> W;    ///< per summand, r'_k x r_k
    std::vector<Matrix> C;    ///< per summand, W* W
    double residual = 0.0;    ///< max_s ||V'(s) - W V(s)||
    double norm_W = 0.0;      ///< max_k ||W_k||
    double reconstruction_error = 0.0; ///< formula vs K', max entry modulus
    Factorization factor_K;
    Factorization factor_Kp;
};

/// Throws PreconditionError when L is not PD at tolerance.
Factorization factor_pd(const Kernel &l, const ToleranceConfig &tol = {});

/// Throws PreconditionError when K is not CPD at tolerance.
CPDDecomposition decompose_cpd(const Kernel &k, const std::string &base_point,
                               const ToleranceConfig &tol = {});
CPDDecomposition decompose_cpd(const Kernel &k, const ToleranceConfig &tol = {});

Kernel reconstruct_cpd(const CPDDecomposition &dec);

/// Evaluates 2 V(s)* C V(t) - V(s)* C V(s) - V(t)* C V(t) for a per-summand
/// r_k x r_k matrix C (C = C0* C0 for a contraction C0).
Kernel majorized_kernel(const Factorization &f, const std::vector<Matrix> &c);

/// Families e^k with K(s_i,s_j) = -sum_k |e^k_i - e^k_j|^2. Each family is
/// supported on a single summand. Throws InputError for non-self-adjoint
/// entries or a nonzero diagonal, PreconditionError when K is not CPD.
std::vector<std::vector<AlgebraElement>>
sum_sq_diff_decomposition(const Kernel &k, const ToleranceConfig &tol = {});

/// The matrix [-|e_i - e_j|^2] of one family.
Kernel sq_diff_kernel(const IndexSet &set,
                      const std::vector<AlgebraElement> &family);

/// K1 <= K2 iff K2 - K1 is CPD.
Verdict kernel_leq(const Kernel &k1, const Kernel &k2,
                   const ToleranceConfig &tol = {});

/// Solves V'(s) = W V(s) for the minimal factorizations of K and Kp.
/// Requires zero diagonals, self-adjoint K(s,s0) and Kp(s,s0), and Kp <= K.
/// Throws InputError / PreconditionError on violated hypotheses and
/// PreconditionError when the residual exceeds sqrt(tol_rel) times the
/// factor scale.
MajorizationCertificate recover_contraction(const Kernel &k, const Kernel &kp,
                                            const std::string &base_point,
                                            const ToleranceConfig &tol = {});

} // namespace cpdk
