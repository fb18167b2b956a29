#pragma once

// C*-metrics on finite sets, the embeddability criterion (K = -d^2 must be
// conditionally positive definite) and the explicit C*-isometric embedding
// into the column module A^r.

#include <string>
#include <vector>

#include "cpdk/algebra.hpp"
#include "cpdk/kernels.hpp"

namespace cpdk {

/// n x n table of positive algebra elements. The metric axioms are checked by
/// validate_metric, not by the constructor.
class CStarMetric {
  public:
    CStarMetric(IndexSet set, AlgebraDescriptor descriptor,
                std::vector<AlgebraElement> values);

    const IndexSet &set() const noexcept { return set_; }
    const AlgebraDescriptor &descriptor() const noexcept { return descriptor_; }
    std::size_t size() const noexcept { return set_.size(); }
    const AlgebraElement &operator()(std::size_t i, std::size_t j) const;
    const std::vector<AlgebraElement> &values() const noexcept { return values_; }

  private:
    IndexSet set_;
    AlgebraDescriptor descriptor_;
    std::vector<AlgebraElement> values_;
};

struct EmbeddingResult {
    std::vector<ModuleElement> V; ///< in set order; V(s0) = 0
    Verdict certificate;          ///< CPD verdict of -d^2
    double max_distance_error = 0.0; ///< max entry modulus of |V(s)-V(t)| - d(s,t)
};

/// Zero diagonal, symmetry, positivity, definiteness (op_norm(d(s,t)) above
/// tolerance for s != t) and the triangle inequality in the C*-order.
Verdict validate_metric(const CStarMetric &d, const ToleranceConfig &tol = {});

/// K(s,t) = -d(s,t) d(s,t). Throws InputError for an invalid metric.
Kernel metric_to_kernel(const CStarMetric &d, const ToleranceConfig &tol = {});

Verdict is_embeddable(const CStarMetric &d, const ToleranceConfig &tol = {});

/// Throws PreconditionError when the metric is not embeddable.
EmbeddingResult embed(const CStarMetric &d, const std::string &base_point,
                      const ToleranceConfig &tol = {});

/// max over pairs of the entry modulus of |V(s) - V(t)| - d(s,t).
double embedding_distance_error(const CStarMetric &d,
                                const std::vector<ModuleElement> &points);

/// d(s,t) = |p(s) - p(t)|. Throws InputError for mismatched shapes or
/// coincident points. With non-scalar summands the triangle inequality can
/// fail in the C*-order, so the result is not guaranteed to validate.
CStarMetric distance_matrix_from_points(const IndexSet &set,
                                        const std::vector<ModuleElement> &points,
                                        const ToleranceConfig &tol = {});

} // namespace cpdk
