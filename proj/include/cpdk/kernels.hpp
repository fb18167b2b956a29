#pragma once

// Algebra-valued kernels on a finite labeled set and the decision procedures
// for positive definiteness (PD) and conditional positive definiteness (CPD).
//
// Reduction used by the CPD test. The defining condition quantifies over
// algebra coefficients a_1..a_n with sum a_i = 0 and asks that
// sum a_i* K(s_i,s_j) a_j >= 0. In summand k this is the statement that for
// every unit xi and every block vector (x_1..x_n) with sum x_i = 0,
// sum x_i* K_k(s_i,s_j) x_j >= 0: given such x, the rank-one coefficients
// a_i = x_i xi* realize it (a_i* K a_j = xi (x_i* K x_j) xi*), and conversely
// any admissible coefficients produce such vectors column by column. The
// zero-sum block vectors are exactly the range of T whose column groups are
// (e_i - e_n) (x) I_d, i = 1..n-1, so the condition is T* G_k T >= 0.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cpdk/algebra.hpp"
#include "cpdk/verdict.hpp"

namespace cpdk {

class IndexSet {
  public:
    /// Throws InputError for an empty list or repeated labels.
    explicit IndexSet(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string &label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    /// Throws InputError for an unknown label.
    std::size_t index_of(const std::string &label) const;

    friend bool operator==(const IndexSet &, const IndexSet &) = default;

  private:
    std::vector<std::string> labels_;
};

/// n x n table of algebra elements. Construction only checks shapes; a
/// non-hermitian table can be held but every decision procedure rejects it.
class Kernel {
  public:
    /// `values` is row-major: values[i * n + j] = K(s_i, s_j).
    Kernel(IndexSet set, AlgebraDescriptor descriptor,
           std::vector<AlgebraElement> values);

    static Kernel zero(const IndexSet &set, const AlgebraDescriptor &descriptor);
    static Kernel from_function(
        const IndexSet &set, const AlgebraDescriptor &descriptor,
        const std::function<AlgebraElement(std::size_t, std::size_t)> &entry);

    const IndexSet &set() const noexcept { return set_; }
    const AlgebraDescriptor &descriptor() const noexcept { return descriptor_; }
    std::size_t size() const noexcept { return set_.size(); }

    const AlgebraElement &operator()(std::size_t i, std::size_t j) const;
    const AlgebraElement &at(const std::string &s, const std::string &t) const;
    const std::vector<AlgebraElement> &values() const noexcept { return values_; }

    /// values[t][s] = values[s][t]* within tolerance.
    bool is_hermitian(const ToleranceConfig &tol = {}) const;

    Kernel &operator+=(const Kernel &rhs);
    Kernel &operator-=(const Kernel &rhs);
    Kernel &operator*=(Complex c);

  private:
    IndexSet set_;
    AlgebraDescriptor descriptor_;
    std::vector<AlgebraElement> values_;
};

Kernel operator+(Kernel lhs, const Kernel &rhs);
Kernel operator-(Kernel lhs, const Kernel &rhs);
Kernel operator*(Complex c, Kernel k);

/// Throws InputError unless the kernels share set and descriptor.
void require_same_shape(const Kernel &a, const Kernel &b, const char *what);
/// Throws InputError when K is not hermitian at tolerance.
void require_hermitian(const Kernel &k, const ToleranceConfig &tol,
                       const char *what);

/// max over entries of op_norm(K(s,t)); the scale used by reconstruction
/// tolerances.
double kernel_norm(const Kernel &k);
/// Largest entry modulus of a - b over every block of every entry.
double max_entry_difference(const Kernel &a, const Kernel &b);

/// Per summand k, the n*d_k square matrix whose (i,j) block is block k of
/// K(s_i, s_j).
std::vector<Matrix> assemble_gram(const Kernel &k);
Matrix assemble_gram_summand(const Kernel &k, std::size_t summand);

/// Difference basis T (n*d x (n-1)*d) with column groups (e_i - e_n) (x) I_d.
Matrix difference_basis(std::size_t n, std::size_t d);

Verdict is_positive_definite(const Kernel &k, const ToleranceConfig &tol = {});

/// Decides CPD by compressing each assembled Gram matrix onto the zero-sum
/// subspace. On failure the witness lives in the compressed coordinates
/// ((n-1)*d_k entries); lift_compression_witness maps it back.
/// Throws InputError when n < 2.
Verdict is_conditionally_positive_definite(const Kernel &k,
                                           const ToleranceConfig &tol = {});

/// T v for a compression witness: a zero-sum block vector x with
/// x* G_k x equal to the witness eigenvalue.
Vector lift_compression_witness(const Kernel &k, const Witness &w);

/// L(s,t) = 1/2 [K(s,t) - K(s,s0) - K(s0,t) + K(s0,s0)]
Kernel shift_transform(const Kernel &k, const std::string &base_point);
Kernel shift_transform(const Kernel &k);

/// h(s) = K(s,s0) - 1/2 K(s0,s0), in set order.
std::vector<AlgebraElement> recover_affine_part(const Kernel &k,
                                                const std::string &base_point);

/// [a_ij - a_im - a_mj + a_mm] for a zero-based index m.
Kernel anchored_shift_matrix(const Kernel &k, std::size_t m);
/// PD verdict of anchored_shift_matrix(K, m). Throws InputError when m >= n or
/// n < 2.
Verdict cond_positive_matrix_check(const Kernel &k, std::size_t m,
                                   const ToleranceConfig &tol = {});

/// [[A, B], [B*, C]] is conditionally positive iff A + C >= B + B*.
bool two_by_two_check(const AlgebraElement &a, const AlgebraElement &b,
                      const AlgebraElement &c, const ToleranceConfig &tol = {});

/// Entrywise algebra product. Hermitian only when the entries commute.
Kernel schur_product(const Kernel &k1, const Kernel &k2);

/// 2 Re K(s,t) <= K(s,s) + K(t,t) for every ordered pair.
Verdict cauchy_schwarz_cpd_check(const Kernel &k,
                                 const ToleranceConfig &tol = {});
/// L(s,t) L(t,s) <= ||L(t,t)|| L(s,s) for every ordered pair.
Verdict cauchy_schwarz_pd_check(const Kernel &l,
                                const ToleranceConfig &tol = {});

} // namespace cpdk
