#include "cpdk/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cpdk/error.hpp"

namespace cpdk {

AlgebraDescriptor::AlgebraDescriptor(std::vector<std::size_t> summand_dims)
    : dims_(std::move(summand_dims))
{
    if (dims_.empty())
        throw InputError("algebra descriptor needs at least one summand");
    for (std::size_t d : dims_) {
        if (d == 0)
            throw InputError("algebra summand dimensions must be positive");
    }
}

std::size_t AlgebraDescriptor::total_dim() const noexcept
{
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

std::string AlgebraDescriptor::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < dims_.size(); ++k)
        os << (k ? "," : "") << dims_[k];
    os << ']';
    return os.str();
}

void ToleranceConfig::validate() const
{
    const auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(tol_rel))
        throw InputError("tol_rel must be positive and finite");
    if (!ok(rank_tol_rel))
        throw InputError("rank_tol_rel must be positive and finite");
}

void require_same_descriptor(const AlgebraDescriptor &a,
                             const AlgebraDescriptor &b, const char *what)
{
    if (!(a == b)) {
        throw InputError(std::string(what) + ": algebra descriptors differ (" +
                         a.to_string() + " vs " + b.to_string() + ")");
    }
}

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(AlgebraDescriptor descriptor,
                               std::vector<Matrix> blocks)
    : descriptor_(std::move(descriptor)), blocks_(std::move(blocks))
{
    if (blocks_.size() != descriptor_.summand_count())
        throw InputError("algebra element has " +
                         std::to_string(blocks_.size()) + " blocks, expected " +
                         std::to_string(descriptor_.summand_count()));
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto d = static_cast<Eigen::Index>(descriptor_.dim(k));
        if (blocks_[k].rows() != d || blocks_[k].cols() != d)
            throw InputError("block " + std::to_string(k) +
                             " must be " + std::to_string(d) + "x" +
                             std::to_string(d));
    }
}

AlgebraElement AlgebraElement::zero(const AlgebraDescriptor &descriptor)
{
    return scalar(descriptor, 0.0);
}

AlgebraElement AlgebraElement::identity(const AlgebraDescriptor &descriptor)
{
    return scalar(descriptor, 1.0);
}

AlgebraElement AlgebraElement::scalar(const AlgebraDescriptor &descriptor,
                                      Complex c)
{
    std::vector<Matrix> blocks;
    blocks.reserve(descriptor.summand_count());
    for (std::size_t d : descriptor.dims()) {
        const auto n = static_cast<Eigen::Index>(d);
        blocks.push_back(c * Matrix::Identity(n, n));
    }
    return AlgebraElement(descriptor, std::move(blocks));
}

AlgebraElement &AlgebraElement::operator+=(const AlgebraElement &rhs)
{
    require_same_descriptor(descriptor_, rhs.descriptor_, "addition");
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        blocks_[k] += rhs.blocks_[k];
    return *this;
}

AlgebraElement &AlgebraElement::operator-=(const AlgebraElement &rhs)
{
    require_same_descriptor(descriptor_, rhs.descriptor_, "subtraction");
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        blocks_[k] -= rhs.blocks_[k];
    return *this;
}

AlgebraElement &AlgebraElement::operator*=(Complex c)
{
    for (auto &b : blocks_)
        b *= c;
    return *this;
}

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement &rhs)
{
    lhs += rhs;
    return lhs;
}

AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement &rhs)
{
    lhs -= rhs;
    return lhs;
}

AlgebraElement operator-(const AlgebraElement &x)
{
    std::vector<Matrix> blocks;
    blocks.reserve(x.blocks().size());
    for (const auto &b : x.blocks())
        blocks.push_back(-b);
    return AlgebraElement(x.descriptor(), std::move(blocks));
}

AlgebraElement operator*(const AlgebraElement &lhs, const AlgebraElement &rhs)
{
    require_same_descriptor(lhs.descriptor(), rhs.descriptor(), "product");
    std::vector<Matrix> blocks;
    blocks.reserve(lhs.blocks().size());
    for (std::size_t k = 0; k < lhs.blocks().size(); ++k)
        blocks.push_back(lhs.block(k) * rhs.block(k));
    return AlgebraElement(lhs.descriptor(), std::move(blocks));
}

AlgebraElement operator*(Complex c, AlgebraElement x)
{
    x *= c;
    return x;
}

AlgebraElement operator*(AlgebraElement x, Complex c)
{
    x *= c;
    return x;
}

AlgebraElement adjoint(const AlgebraElement &x)
{
    std::vector<Matrix> blocks;
    blocks.reserve(x.blocks().size());
    for (const auto &b : x.blocks())
        blocks.push_back(b.adjoint());
    return AlgebraElement(x.descriptor(), std::move(blocks));
}

bool is_hermitian(const AlgebraElement &x, const ToleranceConfig &tol)
{
    return std::all_of(x.blocks().begin(), x.blocks().end(),
                       [&](const Matrix &b) {
                           return is_hermitian_matrix(b, tol.tol_rel);
                       });
}

Verdict positivity_verdict(const AlgebraElement &x, const ToleranceConfig &tol)
{
    if (!is_hermitian(x, tol))
        return Verdict::fail("element is not hermitian");
    for (std::size_t k = 0; k < x.blocks().size(); ++k) {
        if (auto w = psd_violation(x.block(k), tol.tol_rel, k))
            return Verdict::fail("negative eigenvalue in summand " +
                                     std::to_string(k),
                                 std::move(w));
    }
    return Verdict::pass();
}

bool is_positive(const AlgebraElement &x, const ToleranceConfig &tol)
{
    return positivity_verdict(x, tol).holds;
}

Verdict leq_verdict(const AlgebraElement &x, const AlgebraElement &y,
                    const ToleranceConfig &tol)
{
    require_same_descriptor(x.descriptor(), y.descriptor(), "leq");
    return positivity_verdict(y - x, tol);
}

bool leq(const AlgebraElement &x, const AlgebraElement &y,
         const ToleranceConfig &tol)
{
    return leq_verdict(x, y, tol).holds;
}

AlgebraElement sqrt_positive(const AlgebraElement &x)
{
    std::vector<Matrix> blocks;
    blocks.reserve(x.blocks().size());
    for (const auto &b : x.blocks())
        blocks.push_back(psd_sqrt(b));
    return AlgebraElement(x.descriptor(), std::move(blocks));
}

AlgebraElement abs_value(const AlgebraElement &x)
{
    return sqrt_positive(adjoint(x) * x);
}

double op_norm(const AlgebraElement &x)
{
    double norm = 0.0;
    for (const auto &b : x.blocks())
        norm = std::max(norm, spectral_norm(b));
    return norm;
}

AlgebraElement re_part(const AlgebraElement &x)
{
    return 0.5 * (x + adjoint(x));
}

AlgebraElement im_part(const AlgebraElement &x)
{
    return Complex(0.0, -0.5) * (x - adjoint(x));
}

double max_entry_difference(const AlgebraElement &x, const AlgebraElement &y)
{
    require_same_descriptor(x.descriptor(), y.descriptor(), "difference");
    double err = 0.0;
    for (std::size_t k = 0; k < x.blocks().size(); ++k)
        err = std::max(err, max_entry_difference(x.block(k), y.block(k)));
    return err;
}

// ---------------------------------------------------------------------------
// ModuleElement

ModuleElement::ModuleElement(AlgebraDescriptor descriptor,
                             std::vector<Matrix> blocks)
    : descriptor_(std::move(descriptor)), blocks_(std::move(blocks))
{
    if (blocks_.size() != descriptor_.summand_count())
        throw InputError("module element has " +
                         std::to_string(blocks_.size()) + " blocks, expected " +
                         std::to_string(descriptor_.summand_count()));
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].cols() != static_cast<Eigen::Index>(descriptor_.dim(k)))
            throw InputError("module block " + std::to_string(k) + " must have " +
                             std::to_string(descriptor_.dim(k)) + " columns");
    }
}

ModuleElement ModuleElement::zero(const AlgebraDescriptor &descriptor,
                                  const std::vector<std::size_t> &ranks)
{
    if (ranks.size() != descriptor.summand_count())
        throw InputError("rank list does not match the descriptor");
    std::vector<Matrix> blocks;
    blocks.reserve(ranks.size());
    for (std::size_t k = 0; k < ranks.size(); ++k)
        blocks.push_back(Matrix::Zero(static_cast<Eigen::Index>(ranks[k]),
                                      static_cast<Eigen::Index>(descriptor.dim(k))));
    return ModuleElement(descriptor, std::move(blocks));
}

std::vector<std::size_t> ModuleElement::ranks() const
{
    std::vector<std::size_t> r;
    r.reserve(blocks_.size());
    for (const auto &b : blocks_)
        r.push_back(static_cast<std::size_t>(b.rows()));
    return r;
}

namespace {
void require_same_shape(const ModuleElement &x, const ModuleElement &y,
                        const char *what)
{
    require_same_descriptor(x.descriptor(), y.descriptor(), what);
    if (x.ranks() != y.ranks())
        throw InputError(std::string(what) + ": module ranks differ");
}
} // namespace

ModuleElement &ModuleElement::operator+=(const ModuleElement &rhs)
{
    require_same_shape(*this, rhs, "module addition");
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        blocks_[k] += rhs.blocks_[k];
    return *this;
}

ModuleElement &ModuleElement::operator-=(const ModuleElement &rhs)
{
    require_same_shape(*this, rhs, "module subtraction");
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        blocks_[k] -= rhs.blocks_[k];
    return *this;
}

ModuleElement operator+(ModuleElement lhs, const ModuleElement &rhs)
{
    lhs += rhs;
    return lhs;
}

ModuleElement operator-(ModuleElement lhs, const ModuleElement &rhs)
{
    lhs -= rhs;
    return lhs;
}

ModuleElement operator*(Complex c, ModuleElement x)
{
    std::vector<Matrix> blocks = x.blocks();
    for (auto &b : blocks)
        b *= c;
    return ModuleElement(x.descriptor(), std::move(blocks));
}

ModuleElement operator*(const ModuleElement &x, const AlgebraElement &a)
{
    require_same_descriptor(x.descriptor(), a.descriptor(), "module action");
    std::vector<Matrix> blocks;
    blocks.reserve(x.blocks().size());
    for (std::size_t k = 0; k < x.blocks().size(); ++k)
        blocks.push_back(x.block(k) * a.block(k));
    return ModuleElement(x.descriptor(), std::move(blocks));
}

AlgebraElement module_inner(const ModuleElement &x, const ModuleElement &y)
{
    require_same_shape(x, y, "module inner product");
    std::vector<Matrix> blocks;
    blocks.reserve(x.blocks().size());
    for (std::size_t k = 0; k < x.blocks().size(); ++k) {
        const auto d = static_cast<Eigen::Index>(x.descriptor().dim(k));
        if (x.block(k).rows() == 0)
            blocks.push_back(Matrix::Zero(d, d));
        else
            blocks.push_back(x.block(k).adjoint() * y.block(k));
    }
    return AlgebraElement(x.descriptor(), std::move(blocks));
}

AlgebraElement module_abs(const ModuleElement &x)
{
    return sqrt_positive(module_inner(x, x));
}

double module_norm(const ModuleElement &x)
{
    return std::sqrt(op_norm(module_inner(x, x)));
}

} // namespace cpdk
