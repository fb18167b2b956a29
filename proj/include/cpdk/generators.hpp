#pragma once

// Seeded instance generators for every class the checks quantify over.
//
// Random stream "cpdk-stream-v1": every draw comes from a std::mt19937_64
// engine seeded with derive_seed(seed, path), where path names the purpose
// (FNV-1a hash of a tag such as "gram.g") followed by the label index and the
// summand index. Each (purpose, label, summand) therefore owns an independent
// stream and the output does not depend on evaluation order or thread count.
// Uniforms use the top 53 bits of an engine word; normals use Box-Muller;
// complex Gaussians have independent N(0, 1/2) real and imaginary parts.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cpdk/algebra.hpp"
#include "cpdk/decomposition.hpp"
#include "cpdk/embedding.hpp"
#include "cpdk/kernels.hpp"

namespace cpdk {

struct GenConfig {
    std::uint64_t seed = 0;
    std::size_t n = 4;
    AlgebraDescriptor descriptor{{1}};
    /// Target factor rank; 0 means "full" (the summand dimension).
    std::size_t rank = 0;
    double magnitude = 1.0;

    void validate() const;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t tag_hash(std::string_view tag);
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path);

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::string_view tag,
                 std::uint64_t label = 0, std::uint64_t summand = 0);

    double uniform();  ///< in [0, 1)
    double normal();
    Complex complex_normal();
    Matrix complex_matrix(Eigen::Index rows, Eigen::Index cols);

  private:
    std::mt19937_64 engine_;
};

/// Default labels "s1".."sn".
IndexSet default_index_set(std::size_t n);

/// L(s,t) = g(s)* g(t) with g(s) in A^rank.
Kernel random_gram_kernel(const GenConfig &cfg);

/// alpha * Gram + c(s) + c(t)*; with zero_diagonal, the subclass
/// K(s,t) = -sum_k |x_k(s) - x_k(t)|^2 P_k with x_k(s) in R^2 and real P_k >= 0,
/// which is real-symmetric valued and CPD even though the P_k do not commute.
Kernel random_cpd_kernel(const GenConfig &cfg, bool zero_diagonal = false);

/// Random hermitian kernel with no structure (mostly not CPD).
Kernel random_hermitian_kernel(const GenConfig &cfg);

/// A CPD kernel perturbed by hermitian noise of doubling size until the CPD
/// check fails at the relative tolerance `margin`, so the verdict is robust.
Kernel random_non_cpd_kernel(const GenConfig &cfg, double margin = 1e-3);

/// Metric of module points built from a commuting family so that the
/// triangle inequality holds in the C*-order; always valid and embeddable.
CStarMetric random_metric(const GenConfig &cfg);

/// Points behind random_metric (same seed gives the same points).
std::vector<ModuleElement> random_metric_points(const GenConfig &cfg);

ModuleElement random_module_element(RandomStream &rs,
                                    const AlgebraDescriptor &descriptor,
                                    const std::vector<std::size_t> &ranks,
                                    double magnitude);
AlgebraElement random_algebra_element(RandomStream &rs,
                                      const AlgebraDescriptor &descriptor,
                                      double magnitude);
AlgebraElement random_self_adjoint(RandomStream &rs,
                                   const AlgebraDescriptor &descriptor,
                                   double magnitude);
/// Positive r x r matrix with spectral norm in (0, 1].
Matrix random_positive_contraction(RandomStream &rs, Eigen::Index r);

struct MajorizedPair {
    Kernel K;
    Kernel Kp;
    std::vector<Matrix> C0; ///< per-summand positive contraction
};

/// K from the zero-diagonal CPD class and K' = formula(K, C0* C0) for a
/// random positive contraction C0, using the base point s1.
MajorizedPair random_majorized_pair(const GenConfig &cfg);

using Fixture = std::variant<Kernel, CStarMetric>;

/// "schur-counterexample", "star-metric", "collinear-3", "two-point".
/// Throws InputError for other names.
Fixture fixture(const std::string &name);
std::vector<std::string> fixture_names();

} // namespace cpdk
