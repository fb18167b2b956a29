#include "cpdk/kernels.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "cpdk/error.hpp"

namespace cpdk {

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::vector<std::string> labels) : labels_(std::move(labels))
{
    if (labels_.empty())
        throw InputError("index set must be non-empty");
    std::set<std::string> seen;
    for (const auto &l : labels_) {
        if (!seen.insert(l).second)
            throw InputError("duplicate label '" + l + "'");
    }
}

std::size_t IndexSet::index_of(const std::string &label) const
{
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw InputError("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

// ---------------------------------------------------------------------------
// Kernel

Kernel::Kernel(IndexSet set, AlgebraDescriptor descriptor,
               std::vector<AlgebraElement> values)
    : set_(std::move(set)), descriptor_(std::move(descriptor)),
      values_(std::move(values))
{
    const std::size_t n = set_.size();
    if (values_.size() != n * n)
        throw InputError("kernel table has " + std::to_string(values_.size()) +
                         " entries, expected " + std::to_string(n * n));
    for (const auto &v : values_)
        require_same_descriptor(descriptor_, v.descriptor(), "kernel entry");
}

Kernel Kernel::zero(const IndexSet &set, const AlgebraDescriptor &descriptor)
{
    return Kernel(set, descriptor,
                  std::vector<AlgebraElement>(set.size() * set.size(),
                                              AlgebraElement::zero(descriptor)));
}

Kernel Kernel::from_function(
    const IndexSet &set, const AlgebraDescriptor &descriptor,
    const std::function<AlgebraElement(std::size_t, std::size_t)> &entry)
{
    const std::size_t n = set.size();
    std::vector<AlgebraElement> values;
    values.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            values.push_back(entry(i, j));
    return Kernel(set, descriptor, std::move(values));
}

const AlgebraElement &Kernel::operator()(std::size_t i, std::size_t j) const
{
    const std::size_t n = size();
    if (i >= n || j >= n)
        throw InputError("kernel index out of range");
    return values_[i * n + j];
}

const AlgebraElement &Kernel::at(const std::string &s, const std::string &t) const
{
    return (*this)(set_.index_of(s), set_.index_of(t));
}

bool Kernel::is_hermitian(const ToleranceConfig &tol) const
{
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const AlgebraElement &kij = (*this)(i, j);
            const AlgebraElement &kji = (*this)(j, i);
            const double scale =
                std::max({1.0, op_norm(kij), op_norm(kji)});
            if (op_norm(kji - adjoint(kij)) > tol.tol_rel * scale)
                return false;
        }
    }
    return true;
}

Kernel &Kernel::operator+=(const Kernel &rhs)
{
    require_same_shape(*this, rhs, "kernel addition");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += rhs.values_[i];
    return *this;
}

Kernel &Kernel::operator-=(const Kernel &rhs)
{
    require_same_shape(*this, rhs, "kernel subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= rhs.values_[i];
    return *this;
}

Kernel &Kernel::operator*=(Complex c)
{
    for (auto &v : values_)
        v *= c;
    return *this;
}

Kernel operator+(Kernel lhs, const Kernel &rhs)
{
    lhs += rhs;
    return lhs;
}

Kernel operator-(Kernel lhs, const Kernel &rhs)
{
    lhs -= rhs;
    return lhs;
}

Kernel operator*(Complex c, Kernel k)
{
    k *= c;
    return k;
}

void require_same_shape(const Kernel &a, const Kernel &b, const char *what)
{
    if (!(a.set() == b.set()))
        throw InputError(std::string(what) + ": index sets differ");
    require_same_descriptor(a.descriptor(), b.descriptor(), what);
}

void require_hermitian(const Kernel &k, const ToleranceConfig &tol,
                       const char *what)
{
    tol.validate();
    if (!k.is_hermitian(tol))
        throw InputError(std::string(what) + ": kernel is not hermitian");
}

double kernel_norm(const Kernel &k)
{
    double norm = 0.0;
    for (const auto &v : k.values())
        norm = std::max(norm, op_norm(v));
    return norm;
}

double max_entry_difference(const Kernel &a, const Kernel &b)
{
    require_same_shape(a, b, "kernel difference");
    double err = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        err = std::max(err, max_entry_difference(a.values()[i], b.values()[i]));
    return err;
}

// ---------------------------------------------------------------------------
// Gram assembly and decision procedures

Matrix assemble_gram_summand(const Kernel &k, std::size_t summand)
{
    const std::size_t n = k.size();
    const auto d = static_cast<Eigen::Index>(k.descriptor().dim(summand));
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix g(nn * d, nn * d);
    for (Eigen::Index i = 0; i < nn; ++i)
        for (Eigen::Index j = 0; j < nn; ++j)
            g.block(i * d, j * d, d, d) =
                k(static_cast<std::size_t>(i), static_cast<std::size_t>(j))
                    .block(summand);
    return g;
}

std::vector<Matrix> assemble_gram(const Kernel &k)
{
    require_hermitian(k, {}, "assemble_gram");
    std::vector<Matrix> out;
    out.reserve(k.descriptor().summand_count());
    for (std::size_t s = 0; s < k.descriptor().summand_count(); ++s)
        out.push_back(assemble_gram_summand(k, s));
    return out;
}

Matrix difference_basis(std::size_t n, std::size_t d)
{
    const auto nn = static_cast<Eigen::Index>(n);
    const auto dd = static_cast<Eigen::Index>(d);
    Matrix t = Matrix::Zero(nn * dd, (nn - 1) * dd);
    const Matrix eye = Matrix::Identity(dd, dd);
    for (Eigen::Index i = 0; i + 1 < nn; ++i) {
        t.block(i * dd, i * dd, dd, dd) = eye;
        t.block((nn - 1) * dd, i * dd, dd, dd) = -eye;
    }
    return t;
}

namespace {

/// Runs psd_violation on one matrix per summand and returns the first
/// failure in summand order.
Verdict psd_verdict_per_summand(std::size_t summands,
                                const std::function<Matrix(std::size_t)> &build,
                                double tol_rel, const std::string &what)
{
    std::vector<std::optional<Witness>> failures(summands);
    for_each_summand(summands, [&](std::size_t s) {
        failures[s] = psd_violation(build(s), tol_rel, s);
    });
    for (auto &f : failures) {
        if (f) {
            const std::size_t s = f->summand;
            return Verdict::fail(what + " has a negative eigenvalue in summand " +
                                     std::to_string(s),
                                 std::move(f));
        }
    }
    return Verdict::pass();
}

} // namespace

Verdict is_positive_definite(const Kernel &k, const ToleranceConfig &tol)
{
    require_hermitian(k, tol, "is_positive_definite");
    return psd_verdict_per_summand(
        k.descriptor().summand_count(),
        [&](std::size_t s) { return assemble_gram_summand(k, s); }, tol.tol_rel,
        "Gram matrix");
}

Verdict is_conditionally_positive_definite(const Kernel &k,
                                           const ToleranceConfig &tol)
{
    require_hermitian(k, tol, "is_conditionally_positive_definite");
    if (k.size() < 2)
        throw InputError("conditional positivity needs at least two points");
    return psd_verdict_per_summand(
        k.descriptor().summand_count(),
        [&](std::size_t s) {
            const Matrix t = difference_basis(k.size(), k.descriptor().dim(s));
            const Matrix compressed = t.adjoint() * assemble_gram_summand(k, s) * t;
            // Symmetrize the product only to remove rounding asymmetry; the
            // input itself was checked to be hermitian above.
            return Matrix(0.5 * (compressed + compressed.adjoint()));
        },
        tol.tol_rel, "compressed Gram matrix");
}

Vector lift_compression_witness(const Kernel &k, const Witness &w)
{
    const Matrix t = difference_basis(k.size(), k.descriptor().dim(w.summand));
    if (t.cols() != w.vector.size())
        throw InputError("witness does not match the compressed dimension");
    return t * w.vector;
}

Kernel shift_transform(const Kernel &k, const std::string &base_point)
{
    require_hermitian(k, {}, "shift_transform");
    const std::size_t p = k.set().index_of(base_point);
    // Grouped so that row and column p come out exactly zero.
    return Kernel::from_function(
        k.set(), k.descriptor(), [&](std::size_t i, std::size_t j) {
            return 0.5 * ((k(i, j) - k(i, p)) - (k(p, j) - k(p, p)));
        });
}

Kernel shift_transform(const Kernel &k)
{
    return shift_transform(k, k.set().label(0));
}

std::vector<AlgebraElement> recover_affine_part(const Kernel &k,
                                                const std::string &base_point)
{
    require_hermitian(k, {}, "recover_affine_part");
    const std::size_t p = k.set().index_of(base_point);
    std::vector<AlgebraElement> h;
    h.reserve(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        h.push_back(k(i, p) - 0.5 * k(p, p));
    return h;
}

Kernel anchored_shift_matrix(const Kernel &k, std::size_t m)
{
    if (m >= k.size())
        throw InputError("shift index " + std::to_string(m) +
                         " out of range for n = " + std::to_string(k.size()));
    return Kernel::from_function(
        k.set(), k.descriptor(), [&](std::size_t i, std::size_t j) {
            return (k(i, j) - k(i, m)) - (k(m, j) - k(m, m));
        });
}

Verdict cond_positive_matrix_check(const Kernel &k, std::size_t m,
                                   const ToleranceConfig &tol)
{
    require_hermitian(k, tol, "cond_positive_matrix_check");
    if (k.size() < 2)
        throw InputError("conditional positivity needs at least two points");
    return is_positive_definite(anchored_shift_matrix(k, m), tol);
}

bool two_by_two_check(const AlgebraElement &a, const AlgebraElement &b,
                      const AlgebraElement &c, const ToleranceConfig &tol)
{
    require_same_descriptor(a.descriptor(), b.descriptor(), "two_by_two_check");
    require_same_descriptor(a.descriptor(), c.descriptor(), "two_by_two_check");
    if (!is_hermitian(a, tol) || !is_hermitian(c, tol))
        throw InputError("two_by_two_check: diagonal blocks must be hermitian");
    return leq(b + adjoint(b), a + c, tol);
}

Kernel schur_product(const Kernel &k1, const Kernel &k2)
{
    require_same_shape(k1, k2, "schur_product");
    std::vector<AlgebraElement> values;
    values.reserve(k1.values().size());
    for (std::size_t i = 0; i < k1.values().size(); ++i)
        values.push_back(k1.values()[i] * k2.values()[i]);
    return Kernel(k1.set(), k1.descriptor(), std::move(values));
}

Verdict cauchy_schwarz_cpd_check(const Kernel &k, const ToleranceConfig &tol)
{
    require_hermitian(k, tol, "cauchy_schwarz_cpd_check");
    const std::size_t n = k.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const AlgebraElement lhs = k(i, j) + adjoint(k(i, j));
            Verdict v = leq_verdict(lhs, k(i, i) + k(j, j), tol);
            if (!v) {
                v.reason = "2 Re K(" + k.set().label(i) + "," + k.set().label(j) +
                           ") exceeds K(s,s) + K(t,t)";
                return v;
            }
        }
    }
    return Verdict::pass();
}

Verdict cauchy_schwarz_pd_check(const Kernel &l, const ToleranceConfig &tol)
{
    require_hermitian(l, tol, "cauchy_schwarz_pd_check");
    const std::size_t n = l.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const AlgebraElement lhs = l(i, j) * l(j, i);
            const AlgebraElement rhs = op_norm(l(j, j)) * l(i, i);
            Verdict v = leq_verdict(lhs, rhs, tol);
            if (!v) {
                v.reason = "L(" + l.set().label(i) + "," + l.set().label(j) +
                           ") L(t,s) exceeds ||L(t,t)|| L(s,s)";
                return v;
            }
        }
    }
    return Verdict::pass();
}

} // namespace cpdk
