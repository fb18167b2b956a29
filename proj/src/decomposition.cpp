#include "cpdk/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "cpdk/error.hpp"

namespace cpdk {

Matrix Factorization::stacked(std::size_t summand) const
{
    const auto d = static_cast<Eigen::Index>(descriptor.dim(summand));
    const auto r = static_cast<Eigen::Index>(ranks.at(summand));
    const auto n = static_cast<Eigen::Index>(V.size());
    Matrix f(r, n * d);
    for (Eigen::Index i = 0; i < n; ++i)
        f.middleCols(i * d, d) = V[static_cast<std::size_t>(i)].block(summand);
    return f;
}

Kernel Factorization::gram() const
{
    return Kernel::from_function(set, descriptor, [&](std::size_t i, std::size_t j) {
        return module_inner(V[i], V[j]);
    });
}

namespace {

/// Truncated eigen-factorization of each Gram summand. Eigenvalues at or
/// below rank_tol_rel * max(1, lambda_max) are dropped, negatives included.
Factorization factor_gram(const Kernel &l, const ToleranceConfig &tol)
{
    const std::size_t n = l.size();
    const std::size_t m = l.descriptor().summand_count();
    std::vector<Matrix> factors(m);
    for_each_summand(m, [&](std::size_t s) {
        const HermitianEigen eig = hermitian_eigen(assemble_gram_summand(l, s));
        const double lambda_max =
            eig.values.size() ? std::max(0.0, eig.values(0)) : 0.0;
        const double cutoff = tol.rank_tol_rel * std::max(1.0, lambda_max);
        Eigen::Index r = 0;
        while (r < eig.values.size() && eig.values(r) > cutoff)
            ++r;
        const Eigen::VectorXd roots = eig.values.head(r).cwiseSqrt();
        factors[s] = roots.asDiagonal() * eig.vectors.leftCols(r).adjoint();
    });

    std::vector<std::size_t> ranks(m);
    for (std::size_t s = 0; s < m; ++s)
        ranks[s] = static_cast<std::size_t>(factors[s].rows());

    std::vector<ModuleElement> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Matrix> blocks(m);
        for (std::size_t s = 0; s < m; ++s) {
            const auto d = static_cast<Eigen::Index>(l.descriptor().dim(s));
            blocks[s] = factors[s].middleCols(static_cast<Eigen::Index>(i) * d, d);
        }
        v.emplace_back(l.descriptor(), std::move(blocks));
    }
    return Factorization{l.set(), l.descriptor(), std::move(ranks), std::move(v)};
}

CPDDecomposition decompose_checked(const Kernel &k, const std::string &base_point,
                                   const ToleranceConfig &tol)
{
    const std::size_t p = k.set().index_of(base_point);
    Factorization f = factor_gram(shift_transform(k, base_point), tol);

    std::vector<AlgebraElement> h;
    h.reserve(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        // -1/2 K(s,s) - i Im K(s,s0), with i Im x = (x - x*)/2.
        const AlgebraElement &ks0 = k(i, p);
        h.push_back(-0.5 * k(i, i) - 0.5 * (ks0 - adjoint(ks0)));
    }
    return CPDDecomposition{std::move(f), std::move(h), base_point};
}

void require_zero_diagonal(const Kernel &k, const ToleranceConfig &tol,
                           const char *what)
{
    const double scale = std::max(1.0, kernel_norm(k));
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (op_norm(k(i, i)) > tol.tol_rel * scale)
            throw InputError(std::string(what) + ": diagonal entry at '" +
                             k.set().label(i) + "' is not zero");
    }
}

void require_self_adjoint_entries(const Kernel &k, const ToleranceConfig &tol,
                                  const char *what)
{
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j)
            if (!is_hermitian(k(i, j), tol))
                throw InputError(std::string(what) + ": entry (" +
                                 k.set().label(i) + "," + k.set().label(j) +
                                 ") is not self-adjoint");
}

void require_cpd(const Kernel &k, const ToleranceConfig &tol, const char *what)
{
    Verdict v = is_conditionally_positive_definite(k, tol);
    if (!v)
        throw PreconditionError(std::string(what) +
                                    ": kernel is not conditionally positive definite",
                                std::move(v));
}

} // namespace

Factorization factor_pd(const Kernel &l, const ToleranceConfig &tol)
{
    Verdict v = is_positive_definite(l, tol);
    if (!v)
        throw PreconditionError("factor_pd: kernel is not positive definite",
                                std::move(v));
    return factor_gram(l, tol);
}

CPDDecomposition decompose_cpd(const Kernel &k, const std::string &base_point,
                               const ToleranceConfig &tol)
{
    k.set().index_of(base_point);
    require_cpd(k, tol, "decompose_cpd");
    return decompose_checked(k, base_point, tol);
}

CPDDecomposition decompose_cpd(const Kernel &k, const ToleranceConfig &tol)
{
    return decompose_cpd(k, k.set().label(0), tol);
}

Kernel reconstruct_cpd(const CPDDecomposition &dec)
{
    const Factorization &f = dec.factorization;
    const std::size_t n = f.V.size();
    if (dec.h.size() != n || f.set.size() != n)
        throw InputError("reconstruct_cpd: decomposition sizes disagree");
    std::vector<AlgebraElement> norms;
    norms.reserve(n);
    for (const auto &v : f.V)
        norms.push_back(module_inner(v, v));
    return Kernel::from_function(f.set, f.descriptor, [&](std::size_t i, std::size_t j) {
        return 2.0 * module_inner(f.V[i], f.V[j]) - norms[i] - norms[j] - dec.h[i] -
               adjoint(dec.h[j]);
    });
}

Kernel majorized_kernel(const Factorization &f, const std::vector<Matrix> &c)
{
    const std::size_t m = f.descriptor.summand_count();
    if (c.size() != m)
        throw InputError("majorized_kernel: need one matrix per summand");
    for (std::size_t s = 0; s < m; ++s) {
        const auto r = static_cast<Eigen::Index>(f.ranks[s]);
        if (c[s].rows() != r || c[s].cols() != r)
            throw InputError("majorized_kernel: summand " + std::to_string(s) +
                             " matrix must be " + std::to_string(r) + "x" +
                             std::to_string(r));
    }

    const std::size_t n = f.V.size();
    // q(s,t) = V(s)* C V(t)
    std::vector<AlgebraElement> q;
    q.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Matrix> blocks(m);
            for (std::size_t s = 0; s < m; ++s)
                blocks[s] = f.V[i].block(s).adjoint() * c[s] * f.V[j].block(s);
            q.emplace_back(f.descriptor, std::move(blocks));
        }
    }
    return Kernel::from_function(f.set, f.descriptor, [&](std::size_t i, std::size_t j) {
        return (2.0 * q[i * n + j] - q[i * n + i]) - q[j * n + j];
    });
}

std::vector<std::vector<AlgebraElement>>
sum_sq_diff_decomposition(const Kernel &k, const ToleranceConfig &tol)
{
    require_hermitian(k, tol, "sum_sq_diff_decomposition");
    require_self_adjoint_entries(k, tol, "sum_sq_diff_decomposition");
    require_zero_diagonal(k, tol, "sum_sq_diff_decomposition");
    require_cpd(k, tol, "sum_sq_diff_decomposition");

    const std::size_t n = k.size();
    const AlgebraDescriptor &desc = k.descriptor();
    const Kernel b = anchored_shift_matrix(k, n - 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<std::vector<AlgebraElement>> families;
    for (std::size_t s = 0; s < desc.summand_count(); ++s) {
        const auto d = static_cast<Eigen::Index>(desc.dim(s));
        const HermitianEigen eig = hermitian_eigen(assemble_gram_summand(b, s));
        const double lambda_max = std::max(0.0, eig.values(0));
        const double cutoff = tol.rank_tol_rel * std::max(1.0, lambda_max);
        for (Eigen::Index e = 0; e < eig.values.size() && eig.values(e) > cutoff;
             ++e) {
            const Vector v = std::sqrt(eig.values(e)) * eig.vectors.col(e);
            std::vector<AlgebraElement> family;
            family.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                // First-row lifting: d_i = e_1 v_i*, so d_i* d_j = v_i v_j*.
                AlgebraElement x = AlgebraElement::zero(desc);
                std::vector<Matrix> blocks = x.blocks();
                blocks[s].row(0) =
                    inv_sqrt2 *
                    v.segment(static_cast<Eigen::Index>(i) * d, d).adjoint();
                family.emplace_back(desc, std::move(blocks));
            }
            families.push_back(std::move(family));
        }
    }
    return families;
}

Kernel sq_diff_kernel(const IndexSet &set,
                      const std::vector<AlgebraElement> &family)
{
    if (family.size() != set.size())
        throw InputError("sq_diff_kernel: family size does not match the set");
    const AlgebraDescriptor &desc = family.front().descriptor();
    return Kernel::from_function(set, desc, [&](std::size_t i, std::size_t j) {
        const AlgebraElement diff = family[i] - family[j];
        return -(adjoint(diff) * diff);
    });
}

Verdict kernel_leq(const Kernel &k1, const Kernel &k2, const ToleranceConfig &tol)
{
    require_same_shape(k1, k2, "kernel_leq");
    require_hermitian(k1, tol, "kernel_leq");
    require_hermitian(k2, tol, "kernel_leq");
    return is_conditionally_positive_definite(k2 - k1, tol);
}

MajorizationCertificate recover_contraction(const Kernel &k, const Kernel &kp,
                                            const std::string &base_point,
                                            const ToleranceConfig &tol)
{
    require_same_shape(k, kp, "recover_contraction");
    require_hermitian(k, tol, "recover_contraction");
    require_hermitian(kp, tol, "recover_contraction");
    const std::size_t p = k.set().index_of(base_point);
    require_zero_diagonal(k, tol, "recover_contraction (K)");
    require_zero_diagonal(kp, tol, "recover_contraction (K')");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!is_hermitian(k(i, p), tol) || !is_hermitian(kp(i, p), tol))
            throw InputError("recover_contraction: K(s,s0) and K'(s,s0) must be "
                             "self-adjoint; fails at '" +
                             k.set().label(i) + "'");
    }
    require_cpd(k, tol, "recover_contraction (K)");
    require_cpd(kp, tol, "recover_contraction (K')");
    Verdict dominated = kernel_leq(kp, k, tol);
    if (!dominated)
        throw PreconditionError("recover_contraction: K - K' is not conditionally "
                                "positive definite",
                                std::move(dominated));

    // With zero diagonals and self-adjoint K(s,s0) the correction h vanishes,
    // so only the factorizations are needed.
    MajorizationCertificate cert{{}, {}, 0.0, 0.0, 0.0,
                                 decompose_checked(k, base_point, tol).factorization,
                                 decompose_checked(kp, base_point, tol).factorization};
    const Factorization &f = cert.factor_K;
    const Factorization &fp = cert.factor_Kp;
    const std::size_t m = k.descriptor().summand_count();

    cert.W.resize(m);
    cert.C.resize(m);
    for (std::size_t s = 0; s < m; ++s) {
        cert.W[s] = fp.stacked(s) * pseudo_inverse(f.stacked(s), tol.rank_tol_rel);
        cert.C[s] = cert.W[s].adjoint() * cert.W[s];
        cert.norm_W = std::max(cert.norm_W, spectral_norm(cert.W[s]));
    }

    double scale = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        scale = std::max(scale, module_norm(fp.V[i]));
        for (std::size_t s = 0; s < m; ++s) {
            const Matrix diff = fp.V[i].block(s) - cert.W[s] * f.V[i].block(s);
            cert.residual = std::max(cert.residual, spectral_norm(diff));
        }
    }
    cert.reconstruction_error = max_entry_difference(majorized_kernel(f, cert.C), kp);

    // Factor entries scale like square roots of Gram entries, so the
    // admissible residual is sqrt(tol_rel) relative to the factor size.
    if (cert.residual > std::sqrt(tol.tol_rel) * scale) {
        throw PreconditionError(
            "recover_contraction: residual " + std::to_string(cert.residual) +
                " too large; K' is not dominated in the representable sense",
            Verdict::fail("contraction residual above tolerance"));
    }
    return cert;
}

} // namespace cpdk
