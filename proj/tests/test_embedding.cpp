#include <cmath>

#include <gtest/gtest.h>

#include "cpdk/embedding.hpp"
#include "cpdk/error.hpp"
#include "cpdk/generators.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace cpdk;
using testutil::mat;
using testutil::scalar;
using testutil::value;

namespace {

CStarMetric scalar_metric(std::vector<std::string> labels,
                          std::initializer_list<std::initializer_list<double>> rows)
{
    std::vector<AlgebraElement> values;
    for (const auto &row : rows)
        for (double v : row)
            values.push_back(scalar(v));
    return CStarMetric(IndexSet(std::move(labels)), AlgebraDescriptor({1}), values);
}

CStarMetric star() { return std::get<CStarMetric>(fixture("star-metric")); }

} // namespace

TEST(ValidateMetric, Examples)
{
    EXPECT_TRUE(validate_metric(star()));
    EXPECT_TRUE(validate_metric(std::get<CStarMetric>(fixture("collinear-3"))));

    const Verdict triangle = validate_metric(scalar_metric({"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
    EXPECT_FALSE(triangle.holds);
    EXPECT_NE(triangle.reason.find("triangle"), std::string::npos);

    const Verdict definite = validate_metric(scalar_metric({"a", "b"}, {{0, 0}, {0, 0}}));
    EXPECT_FALSE(definite.holds);

    EXPECT_FALSE(validate_metric(scalar_metric({"a", "b"}, {{1, 1}, {1, 0}})));
    EXPECT_FALSE(validate_metric(scalar_metric({"a", "b"}, {{0, 1}, {2, 0}})));
    EXPECT_FALSE(validate_metric(scalar_metric({"a", "b"}, {{0, -1}, {-1, 0}})));
}

TEST(ValidateMetric, OperatorTriangle)
{
    const AlgebraDescriptor d({2});
    const AlgebraElement zero = AlgebraElement::zero(d);
    const AlgebraElement a = testutil::single(mat({{1.0, 0.0}, {0.0, 2.0}}));
    const AlgebraElement b = testutil::single(mat({{2.0, 0.0}, {0.0, 1.0}}));
    const AlgebraElement big = testutil::single(mat({{3.0, 0.0}, {0.0, 3.5}}));
    const CStarMetric bad(IndexSet({"x", "y", "z"}), d, {zero, a, big, a, zero, b, big, b, zero});
    EXPECT_FALSE(validate_metric(bad));
    const AlgebraElement ok = testutil::single(mat({{3.0, 0.0}, {0.0, 3.0}}));
    const CStarMetric good(IndexSet({"x", "y", "z"}), d, {zero, a, ok, a, zero, b, ok, b, zero});
    EXPECT_TRUE(validate_metric(good));
}

TEST(MetricToKernel, Examples)
{
    const Kernel two = metric_to_kernel(scalar_metric({"a", "b"}, {{0, 1.5}, {1.5, 0}}));
    EXPECT_DOUBLE_EQ(value(two(0, 1)), -2.25);

    const Kernel k = metric_to_kernel(star());
    const double expected[4][4] = {{0, 1, 1, 1}, {1, 0, 4, 4}, {1, 4, 0, 4}, {1, 4, 4, 0}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_DOUBLE_EQ(value(k(i, j)), -expected[i][j]);

    const AlgebraDescriptor d({2});
    const AlgebraElement zero = AlgebraElement::zero(d);
    const AlgebraElement dd = testutil::single(mat({{1.0, 0.0}, {0.0, 2.0}}));
    const Kernel op = metric_to_kernel(CStarMetric(IndexSet({"a", "b"}), d, {zero, dd, dd, zero}));
    EXPECT_EQ(op(0, 1).block(0), mat({{-1.0, 0.0}, {0.0, -4.0}}));

    EXPECT_THROW(metric_to_kernel(scalar_metric({"a", "b"}, {{0, 0}, {0, 0}})), InputError);
}

TEST(Embeddable, CollinearThreeAccepted)
{
    const CStarMetric d = std::get<CStarMetric>(fixture("collinear-3"));
    EXPECT_TRUE(is_embeddable(d));
    // compressed 2L at p0 is [[2, 4], [4, 8]]: determinant 0, trace 10
    const oracle::Dense c = oracle::compressed(metric_to_kernel(d), 0);
    EXPECT_NEAR(std::abs(oracle::determinant(c)), 0.0, 1e-12);
    EXPECT_TRUE(oracle::psd_by_minors(c));
}

TEST(Embeddable, StarMetricRejected)
{
    const CStarMetric d = star();
    const Verdict v = is_embeddable(d);
    ASSERT_FALSE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_LE(v.witness->eigenvalue, -0.1);

    // Compression anchored at the leaf l1 reproduces 2L exactly.
    const oracle::Dense c = oracle::compressed(metric_to_kernel(d), 0, 1);
    const double expected[3][3] = {{2, 4, 4}, {4, 8, 4}, {4, 4, 8}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_DOUBLE_EQ(c[i][j].real(), expected[i][j]);
    EXPECT_NEAR(oracle::determinant(c).real(), -32.0, 1e-12);
    EXPECT_FALSE(oracle::psd_by_minors(c));

    const Kernel k = metric_to_kernel(d);
    const Vector x = lift_compression_witness(k, *v.witness);
    EXPECT_NEAR(x.dot(assemble_gram_summand(k, 0) * x).real(), v.witness->eigenvalue, 1e-12);
    EXPECT_THROW(embed(d, "c"), PreconditionError);
}

TEST(Embed, TwoPoint)
{
    const CStarMetric d = std::get<CStarMetric>(fixture("two-point"));
    const EmbeddingResult e = embed(d, "a");
    EXPECT_EQ(module_norm(e.V[0]), 0.0);
    EXPECT_NEAR(module_norm(e.V[1]), 1.0, 1e-14);
    EXPECT_NEAR(value(module_abs(e.V[0] - e.V[1])), 1.0, 1e-14);
    EXPECT_TRUE(e.certificate.holds);
}

TEST(Embed, CollinearDistances)
{
    const CStarMetric d = std::get<CStarMetric>(fixture("collinear-3"));
    for (const auto &s0 : d.set().labels()) {
        const EmbeddingResult e = embed(d, s0);
        EXPECT_NEAR(value(module_abs(e.V[0] - e.V[1])), 1.0, 1e-12);
        EXPECT_NEAR(value(module_abs(e.V[1] - e.V[2])), 1.0, 1e-12);
        EXPECT_NEAR(value(module_abs(e.V[0] - e.V[2])), 2.0, 1e-12);
        EXPECT_LE(e.max_distance_error, 1e-12);
    }
}

TEST(Embed, GeneratedMetricsRoundtrip)
{
    const std::vector<std::vector<std::size_t>> algebras{{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 2}};
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.n = 2 + seed % 5;
        cfg.descriptor = AlgebraDescriptor(algebras[seed % algebras.size()]);
        cfg.rank = seed % 3;
        const CStarMetric d = random_metric(cfg);
        ASSERT_TRUE(validate_metric(d)) << seed;
        ASSERT_TRUE(is_embeddable(d)) << seed;
        double max_d = 0.0;
        for (const auto &v : d.values())
            max_d = std::max(max_d, op_norm(v));
        const EmbeddingResult e = embed(d, d.set().label(seed % cfg.n));
        EXPECT_LE(e.max_distance_error, 1e-8 * (1.0 + max_d)) << seed;
        EXPECT_NEAR(embedding_distance_error(d, e.V), e.max_distance_error, 1e-15);
    }
}

TEST(DistanceMatrix, ScalarLine)
{
    const AlgebraDescriptor d({1});
    std::vector<ModuleElement> pts;
    for (double x : {0.0, 1.0, 2.0})
        pts.emplace_back(d, std::vector<Matrix>{mat({{x}})});
    const CStarMetric m = distance_matrix_from_points(IndexSet({"a", "b", "c"}), pts);
    EXPECT_NEAR(value(m(0, 1)), 1.0, 1e-14);
    EXPECT_NEAR(value(m(1, 2)), 1.0, 1e-14);
    EXPECT_NEAR(value(m(0, 2)), 2.0, 1e-14);

    const double delta = 0.75;
    const CStarMetric two = distance_matrix_from_points(
        IndexSet({"a", "b"}),
        {ModuleElement(d, {mat({{0.0}, {0.0}})}), ModuleElement(d, {mat({{0.6 * delta}, {0.8 * delta}})})});
    EXPECT_NEAR(value(two(0, 1)), delta, 1e-14);

    EXPECT_THROW(distance_matrix_from_points(IndexSet({"a", "b"}), {pts[0], pts[0]}), InputError);
    EXPECT_THROW(distance_matrix_from_points(IndexSet({"a", "b"}), {pts[0]}), InputError);
}

TEST(DistanceMatrix, ScalarPointSetsAreEmbeddable)
{
    const std::vector<std::vector<std::size_t>> algebras{{1}, {1, 1}, {1, 1, 1}};
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const AlgebraDescriptor d(algebras[seed % 3]);
        const std::size_t n = 2 + seed % 5;
        RandomStream rs(seed, "test.points");
        std::vector<ModuleElement> pts;
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back(random_module_element(rs, d, std::vector<std::size_t>(d.summand_count(), 3), 1.0));
        const CStarMetric m = distance_matrix_from_points(IndexSet(testutil::labels(n)), pts);
        EXPECT_TRUE(validate_metric(m)) << seed;
        EXPECT_TRUE(is_embeddable(m)) << seed;
        EXPECT_LE(embed(m, "s1").max_distance_error, 1e-8 * (1.0 + kernel_norm(metric_to_kernel(m))));
    }
}

TEST(DistanceMatrix, CommutingOperatorPointsAreEmbeddable)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.n = 3 + seed % 3;
        cfg.descriptor = AlgebraDescriptor({2, 3});
        const auto pts = random_metric_points(cfg);
        const CStarMetric m = distance_matrix_from_points(default_index_set(cfg.n), pts);
        EXPECT_TRUE(validate_metric(m)) << seed;
        EXPECT_TRUE(is_embeddable(m)) << seed;
    }
}
