#include <gtest/gtest.h>

#include "cpdk/error.hpp"
#include "cpdk/generators.hpp"
#include "cpdk/io.hpp"

#include "helpers.hpp"

using namespace cpdk;
using testutil::value;

namespace {

GenConfig config(std::uint64_t seed, std::size_t n, std::vector<std::size_t> dims,
                 std::size_t rank = 0)
{
    GenConfig cfg;
    cfg.seed = seed;
    cfg.n = n;
    cfg.descriptor = AlgebraDescriptor(std::move(dims));
    cfg.rank = rank;
    return cfg;
}

} // namespace

TEST(Stream, Deterministic)
{
    RandomStream a(42, "tag", 3, 1);
    RandomStream b(42, "tag", 3, 1);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a.uniform(), b.uniform());
    RandomStream c(42, "tag", 3, 2);
    RandomStream d(42, "tag", 3, 1);
    EXPECT_NE(c.uniform(), d.uniform());
    EXPECT_NE(tag_hash("gram.g"), tag_hash("cpd.c"));
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}

TEST(Stream, UniformRangeAndMoments)
{
    RandomStream rs(7, "moments");
    double sum = 0.0, sq = 0.0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
        const double u = rs.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double z = rs.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / count, 0.0, 0.05);
    EXPECT_NEAR(sq / count, 1.0, 0.05);
}

TEST(Config, Validation)
{
    GenConfig cfg;
    cfg.n = 0;
    EXPECT_THROW(random_gram_kernel(cfg), InputError);
    cfg.n = 3;
    cfg.magnitude = -1.0;
    EXPECT_THROW(random_gram_kernel(cfg), InputError);
}

TEST(Gram, AlwaysPositiveDefinite)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
        EXPECT_TRUE(is_positive_definite(random_gram_kernel(config(seed, 2 + seed % 5, {1 + seed % 3, 2}))));
}

TEST(Gram, ZeroMagnitude)
{
    GenConfig cfg = config(1, 3, {2});
    cfg.magnitude = 0.0;
    EXPECT_EQ(kernel_norm(random_gram_kernel(cfg)), 0.0);
}

TEST(Gram, SameSeedSameKernel)
{
    const GenConfig cfg = config(5, 4, {1, 2}, 2);
    EXPECT_EQ(max_entry_difference(random_gram_kernel(cfg), random_gram_kernel(cfg)), 0.0);
    GenConfig other = cfg;
    other.seed = 6;
    EXPECT_GT(max_entry_difference(random_gram_kernel(cfg), random_gram_kernel(other)), 0.0);
}

TEST(Cpd, AlwaysConditionallyPositive)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const GenConfig cfg = config(seed, 2 + seed % 5, {1 + seed % 3}, seed % 3);
        EXPECT_TRUE(is_conditionally_positive_definite(random_cpd_kernel(cfg)));
        EXPECT_TRUE(is_conditionally_positive_definite(random_cpd_kernel(cfg, true)));
    }
}

TEST(Cpd, ZeroDiagonalFlag)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Kernel k = random_cpd_kernel(config(seed, 2 + seed % 5, {2, 1}, 2), true);
        for (std::size_t i = 0; i < k.size(); ++i)
            EXPECT_EQ(op_norm(k(i, i)), 0.0);
        for (const auto &v : k.values()) {
            EXPECT_LT(max_entry_difference(v, adjoint(v)), 1e-14);
            for (const auto &b : v.blocks())
                EXPECT_EQ(b.imag().cwiseAbs().maxCoeff(), 0.0);
        }
    }
}

TEST(NonCpd, FailsCheck)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Kernel k = random_non_cpd_kernel(config(seed, 2 + seed % 5, {1 + seed % 3}, 1));
        EXPECT_TRUE(k.is_hermitian());
        EXPECT_FALSE(is_conditionally_positive_definite(k));
    }
}

TEST(Hermitian, IsHermitian)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        EXPECT_TRUE(random_hermitian_kernel(config(seed, 4, {2, 3})).is_hermitian());
}

TEST(Metric, ValidAndEmbeddable)
{
    const std::vector<std::vector<std::size_t>> algebras{{1}, {2}, {3}, {1, 3}};
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const CStarMetric d = random_metric(config(seed, 2 + seed % 5, algebras[seed % 4], seed % 3));
        EXPECT_TRUE(validate_metric(d)) << seed;
        EXPECT_TRUE(is_embeddable(d)) << seed;
    }
}

TEST(Metric, TwoPointsGiveTheirDistance)
{
    const GenConfig cfg = config(8, 2, {1});
    const auto pts = random_metric_points(cfg);
    const CStarMetric d = random_metric(cfg);
    EXPECT_NEAR(value(d(0, 1)), module_norm(pts[0] - pts[1]), 1e-12);
}

TEST(Metric, SameSeedSameMetric)
{
    const GenConfig cfg = config(9, 4, {2, 1});
    const Json a = metric_to_json(random_metric(cfg));
    const Json b = metric_to_json(random_metric(cfg));
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Fixtures, Contents)
{
    const Kernel a = std::get<Kernel>(fixture("schur-counterexample"));
    EXPECT_EQ(a.set().labels(), (std::vector<std::string>{"1", "2"}));
    EXPECT_EQ(value(a(0, 1)), -1.0);
    EXPECT_EQ(value(a(0, 0)), 0.0);

    const CStarMetric star = std::get<CStarMetric>(fixture("star-metric"));
    EXPECT_EQ(star.size(), 4u);
    EXPECT_EQ(value(star(0, 1)), 1.0);
    EXPECT_EQ(value(star(1, 2)), 2.0);

    const CStarMetric line = std::get<CStarMetric>(fixture("collinear-3"));
    EXPECT_EQ(value(line(0, 1)), 1.0);
    EXPECT_EQ(value(line(1, 2)), 1.0);
    EXPECT_EQ(value(line(0, 2)), 2.0);

    EXPECT_THROW(fixture("nope"), InputError);
    EXPECT_EQ(fixture_names().size(), 4u);
}

TEST(MajorizedPairs, Ordered)
{
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const MajorizedPair p = random_majorized_pair(config(seed, 2 + seed % 4, {1 + seed % 2, 1}, 2));
        EXPECT_TRUE(kernel_leq(p.Kp, p.K)) << seed;
        for (const auto &c : p.C0)
            if (c.size() > 0)
                EXPECT_LE(spectral_norm(c), 1.0);
    }
}

TEST(Threads, GeneratorsIndependentOfThreadCount)
{
    const GenConfig cfg = config(12, 5, {1, 2, 3}, 2);
    set_summand_threads(1);
    const std::string a = kernel_to_json(random_non_cpd_kernel(cfg)).dump();
    set_summand_threads(3);
    const std::string b = kernel_to_json(random_non_cpd_kernel(cfg)).dump();
    set_summand_threads(1);
    EXPECT_EQ(a, b);
}
