#pragma once

// The C*-algebra A = M_{d_1}(C) + ... + M_{d_m}(C) and the column Hilbert
// module A^r over it. Every operation acts blockwise per summand.

#include <cstddef>
#include <string>
#include <vector>

#include "cpdk/linalg.hpp"
#include "cpdk/verdict.hpp"

namespace cpdk {

class AlgebraDescriptor {
  public:
    /// Throws InputError when the list is empty or holds a zero.
    explicit AlgebraDescriptor(std::vector<std::size_t> summand_dims);

    const std::vector<std::size_t> &dims() const noexcept { return dims_; }
    std::size_t summand_count() const noexcept { return dims_.size(); }
    std::size_t dim(std::size_t k) const { return dims_.at(k); }
    std::size_t total_dim() const noexcept;
    std::string to_string() const;

    friend bool operator==(const AlgebraDescriptor &,
                           const AlgebraDescriptor &) = default;

  private:
    std::vector<std::size_t> dims_;
};

struct ToleranceConfig {
    double tol_rel = 1e-9;
    double rank_tol_rel = 1e-10;

    /// Throws InputError unless both values are strictly positive and finite.
    void validate() const;
};

class AlgebraElement {
  public:
    /// Throws InputError when the blocks do not conform to the descriptor.
    AlgebraElement(AlgebraDescriptor descriptor, std::vector<Matrix> blocks);

    static AlgebraElement zero(const AlgebraDescriptor &descriptor);
    static AlgebraElement identity(const AlgebraDescriptor &descriptor);
    static AlgebraElement scalar(const AlgebraDescriptor &descriptor, Complex c);

    const AlgebraDescriptor &descriptor() const noexcept { return descriptor_; }
    const std::vector<Matrix> &blocks() const noexcept { return blocks_; }
    const Matrix &block(std::size_t k) const { return blocks_.at(k); }

    AlgebraElement &operator+=(const AlgebraElement &rhs);
    AlgebraElement &operator-=(const AlgebraElement &rhs);
    AlgebraElement &operator*=(Complex c);

  private:
    AlgebraDescriptor descriptor_;
    std::vector<Matrix> blocks_;
};

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement &rhs);
AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement &rhs);
AlgebraElement operator-(const AlgebraElement &x);
/// Algebra product (blockwise matrix product).
AlgebraElement operator*(const AlgebraElement &lhs, const AlgebraElement &rhs);
AlgebraElement operator*(Complex c, AlgebraElement x);
AlgebraElement operator*(AlgebraElement x, Complex c);

/// Throws InputError unless both descriptors are equal.
void require_same_descriptor(const AlgebraDescriptor &a,
                             const AlgebraDescriptor &b, const char *what);

AlgebraElement adjoint(const AlgebraElement &x);
bool is_hermitian(const AlgebraElement &x, const ToleranceConfig &tol = {});

/// x is hermitian at tolerance and every block has
/// lambda_min >= -tol_rel * max(1, ||block||).
bool is_positive(const AlgebraElement &x, const ToleranceConfig &tol = {});
/// Same test, with the failing summand's eigenvector as witness.
Verdict positivity_verdict(const AlgebraElement &x,
                           const ToleranceConfig &tol = {});

/// x <= y in the order induced by the positive cone.
bool leq(const AlgebraElement &x, const AlgebraElement &y,
         const ToleranceConfig &tol = {});
Verdict leq_verdict(const AlgebraElement &x, const AlgebraElement &y,
                    const ToleranceConfig &tol = {});

/// |x| = (x* x)^{1/2}
AlgebraElement abs_value(const AlgebraElement &x);
/// Principal square root of a (numerically) positive element.
AlgebraElement sqrt_positive(const AlgebraElement &x);
/// C*-norm: the largest singular value over all blocks.
double op_norm(const AlgebraElement &x);

AlgebraElement re_part(const AlgebraElement &x);
AlgebraElement im_part(const AlgebraElement &x);

/// Largest entry modulus of x - y over all blocks.
double max_entry_difference(const AlgebraElement &x, const AlgebraElement &y);

/// Element of the right Hilbert module A^r: per summand an r_k x d_k matrix.
class ModuleElement {
  public:
    ModuleElement(AlgebraDescriptor descriptor, std::vector<Matrix> blocks);

    static ModuleElement zero(const AlgebraDescriptor &descriptor,
                              const std::vector<std::size_t> &ranks);

    const AlgebraDescriptor &descriptor() const noexcept { return descriptor_; }
    const std::vector<Matrix> &blocks() const noexcept { return blocks_; }
    const Matrix &block(std::size_t k) const { return blocks_.at(k); }
    std::vector<std::size_t> ranks() const;

    ModuleElement &operator+=(const ModuleElement &rhs);
    ModuleElement &operator-=(const ModuleElement &rhs);

  private:
    AlgebraDescriptor descriptor_;
    std::vector<Matrix> blocks_;
};

ModuleElement operator+(ModuleElement lhs, const ModuleElement &rhs);
ModuleElement operator-(ModuleElement lhs, const ModuleElement &rhs);
ModuleElement operator*(Complex c, ModuleElement x);
/// Right action of the algebra: (x a)_k = x_k a_k.
ModuleElement operator*(const ModuleElement &x, const AlgebraElement &a);

/// <x, y> = x* y blockwise. Throws InputError on descriptor or rank mismatch.
AlgebraElement module_inner(const ModuleElement &x, const ModuleElement &y);
/// |x| = <x, x>^{1/2}
AlgebraElement module_abs(const ModuleElement &x);
/// ||x|| = ||<x, x>||^{1/2}
double module_norm(const ModuleElement &x);

} // namespace cpdk
