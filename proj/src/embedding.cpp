#include "cpdk/embedding.hpp"

#include <algorithm>

#include "cpdk/decomposition.hpp"
#include "cpdk/error.hpp"

namespace cpdk {

CStarMetric::CStarMetric(IndexSet set, AlgebraDescriptor descriptor,
                         std::vector<AlgebraElement> values)
    : set_(std::move(set)), descriptor_(std::move(descriptor)),
      values_(std::move(values))
{
    const std::size_t n = set_.size();
    if (values_.size() != n * n)
        throw InputError("metric table has " + std::to_string(values_.size()) +
                         " entries, expected " + std::to_string(n * n));
    for (const auto &v : values_)
        require_same_descriptor(descriptor_, v.descriptor(), "metric entry");
}

const AlgebraElement &CStarMetric::operator()(std::size_t i, std::size_t j) const
{
    const std::size_t n = size();
    if (i >= n || j >= n)
        throw InputError("metric index out of range");
    return values_[i * n + j];
}

Verdict validate_metric(const CStarMetric &d, const ToleranceConfig &tol)
{
    tol.validate();
    const std::size_t n = d.size();
    const auto &lbl = [&](std::size_t i) -> const std::string & {
        return d.set().label(i);
    };
    double scale = 1.0;
    for (const auto &v : d.values())
        scale = std::max(scale, op_norm(v));
    const double zero_tol = tol.tol_rel * scale;

    for (std::size_t i = 0; i < n; ++i) {
        if (op_norm(d(i, i)) > zero_tol)
            return Verdict::fail("zero diagonal fails at (" + lbl(i) + "," +
                                 lbl(i) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (op_norm(d(i, j) - d(j, i)) > zero_tol)
                return Verdict::fail("symmetry fails at (" + lbl(i) + "," +
                                     lbl(j) + ")");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Verdict v = positivity_verdict(d(i, j), tol);
            if (!v) {
                v.reason = "positivity fails at (" + lbl(i) + "," + lbl(j) +
                           "): " + v.reason;
                return v;
            }
            if (i != j && op_norm(d(i, j)) <= zero_tol)
                return Verdict::fail("definiteness fails: d(" + lbl(i) + "," +
                                     lbl(j) + ") = 0");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t u = 0; u < n; ++u) {
                if (u == i || u == j || i == j)
                    continue;
                Verdict v = leq_verdict(d(i, j), d(i, u) + d(u, j), tol);
                if (!v) {
                    v.reason = "triangle inequality fails: d(" + lbl(i) + "," +
                               lbl(j) + ") > d(" + lbl(i) + "," + lbl(u) +
                               ") + d(" + lbl(u) + "," + lbl(j) + ")";
                    return v;
                }
            }
        }
    }
    return Verdict::pass();
}

namespace {
void require_valid(const CStarMetric &d, const ToleranceConfig &tol,
                   const char *what)
{
    const Verdict v = validate_metric(d, tol);
    if (!v)
        throw InputError(std::string(what) + ": invalid C*-metric: " + v.reason);
}
} // namespace

Kernel metric_to_kernel(const CStarMetric &d, const ToleranceConfig &tol)
{
    require_valid(d, tol, "metric_to_kernel");
    std::vector<AlgebraElement> values;
    values.reserve(d.values().size());
    for (const auto &v : d.values())
        values.push_back(-(v * v));
    return Kernel(d.set(), d.descriptor(), std::move(values));
}

Verdict is_embeddable(const CStarMetric &d, const ToleranceConfig &tol)
{
    return is_conditionally_positive_definite(metric_to_kernel(d, tol), tol);
}

double embedding_distance_error(const CStarMetric &d,
                                const std::vector<ModuleElement> &points)
{
    const std::size_t n = d.size();
    if (points.size() != n)
        throw InputError("embedding has the wrong number of points");
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            err = std::max(err, max_entry_difference(
                                    module_abs(points[i] - points[j]), d(i, j)));
    return err;
}

EmbeddingResult embed(const CStarMetric &d, const std::string &base_point,
                      const ToleranceConfig &tol)
{
    d.set().index_of(base_point);
    const Kernel k = metric_to_kernel(d, tol);
    Verdict cert = is_conditionally_positive_definite(k, tol);
    if (!cert)
        throw PreconditionError("embed: -d^2 is not conditionally positive definite",
                                std::move(cert));
    // The shift transform of a CPD kernel is PD; its factor is the embedding.
    CPDDecomposition dec = decompose_cpd(k, base_point, tol);
    EmbeddingResult out{std::move(dec.factorization.V), std::move(cert), 0.0};
    out.max_distance_error = embedding_distance_error(d, out.V);
    return out;
}

CStarMetric distance_matrix_from_points(const IndexSet &set,
                                        const std::vector<ModuleElement> &points,
                                        const ToleranceConfig &tol)
{
    const std::size_t n = set.size();
    if (points.size() != n)
        throw InputError("need one point per label");
    const AlgebraDescriptor &desc = points.front().descriptor();
    const auto ranks = points.front().ranks();
    double scale = 1.0;
    for (const auto &p : points) {
        require_same_descriptor(desc, p.descriptor(), "distance_matrix_from_points");
        if (p.ranks() != ranks)
            throw InputError("distance_matrix_from_points: module ranks differ");
        scale = std::max(scale, module_norm(p));
    }

    std::vector<AlgebraElement> values(n * n, AlgebraElement::zero(desc));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const ModuleElement diff = points[i] - points[j];
            if (module_norm(diff) <= tol.tol_rel * scale)
                throw InputError("points '" + set.label(i) + "' and '" +
                                 set.label(j) + "' coincide");
            values[i * n + j] = module_abs(diff);
            values[j * n + i] = values[i * n + j];
        }
    }
    return CStarMetric(set, desc, std::move(values));
}

} // namespace cpdk
