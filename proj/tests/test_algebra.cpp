#include <gtest/gtest.h>

#include "cpdk/algebra.hpp"
#include "cpdk/error.hpp"
#include "cpdk/generators.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace cpdk;
using testutil::mat;
using testutil::single;

namespace {

const Complex I(0.0, 1.0);

AlgebraElement diag2(double a, double b) { return single(mat({{a, 0.0}, {0.0, b}})); }

} // namespace

TEST(Descriptor, RejectsEmptyAndZero)
{
    EXPECT_THROW(AlgebraDescriptor({}), InputError);
    EXPECT_THROW(AlgebraDescriptor({2, 0}), InputError);
    const AlgebraDescriptor d({1, 2, 3});
    EXPECT_EQ(d.summand_count(), 3u);
    EXPECT_EQ(d.total_dim(), 6u);
}

TEST(Element, ShapeValidated)
{
    EXPECT_THROW(AlgebraElement(AlgebraDescriptor({2}), {Matrix::Zero(3, 3)}), InputError);
    EXPECT_THROW(AlgebraElement(AlgebraDescriptor({1, 2}), {Matrix::Zero(1, 1)}), InputError);
    const AlgebraElement a = AlgebraElement::zero(AlgebraDescriptor({1}));
    const AlgebraElement b = AlgebraElement::zero(AlgebraDescriptor({2}));
    EXPECT_THROW(a + b, InputError);
}

TEST(Adjoint, Examples)
{
    const AlgebraElement x = single(mat({{0.0, 1.0}, {0.0, 0.0}}));
    EXPECT_EQ(adjoint(x).block(0), mat({{0.0, 0.0}, {1.0, 0.0}}));

    const AlgebraElement h = single(mat({{1.0, Complex(2.0, 1.0)}, {Complex(2.0, -1.0), 3.0}}));
    EXPECT_EQ(adjoint(h).block(0), h.block(0));

    const AlgebraElement y = single(mat({{0.0, Complex(2.0, 3.0)}, {0.0, 0.0}}));
    EXPECT_EQ(adjoint(y).block(0)(1, 0), Complex(2.0, -3.0));
}

TEST(Positivity, Examples)
{
    EXPECT_TRUE(is_positive(AlgebraElement::zero(AlgebraDescriptor({2}))));

    const Matrix m = mat({{2.0, 1.0}, {1.0, 2.0}});
    EXPECT_TRUE(is_positive(single(m)));
    const auto [lo, hi] = oracle::eig2(2.0, 1.0, 2.0);
    EXPECT_NEAR(lo, 1.0, 1e-12);
    EXPECT_NEAR(hi, 3.0, 1e-12);
    const HermitianEigen e = hermitian_eigen(m);
    EXPECT_NEAR(e.values(0), hi, 1e-12);
    EXPECT_NEAR(e.values(1), lo, 1e-12);

    const Verdict v = positivity_verdict(single(mat({{0.0, 1.0}, {1.0, 0.0}})));
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_NEAR(v.witness->eigenvalue, -1.0, 1e-12);
}

TEST(Positivity, NonHermitianIsNotPositive)
{
    EXPECT_FALSE(is_positive(single(mat({{1.0, 1.0}, {0.0, 1.0}}))));
}

TEST(Order, Examples)
{
    const AlgebraDescriptor d({2});
    EXPECT_TRUE(leq(AlgebraElement::zero(d), AlgebraElement::identity(d)));
    EXPECT_FALSE(leq(AlgebraElement::identity(d), AlgebraElement::zero(d)));
    EXPECT_TRUE(leq(diag2(1, 2), diag2(2, 2)));
    EXPECT_FALSE(leq(diag2(1, 3), diag2(2, 2)));
}

TEST(AbsValue, Examples)
{
    EXPECT_TRUE(abs_value(diag2(-3, 2)).block(0).isApprox(diag2(3, 2).block(0)));
    const AlgebraElement x = single(mat({{0.0, 1.0}, {0.0, 0.0}}));
    EXPECT_LT(max_entry_difference(abs_value(x), diag2(0, 1)), 1e-12);
    const AlgebraElement z = AlgebraElement::zero(AlgebraDescriptor({3}));
    EXPECT_EQ(op_norm(abs_value(z)), 0.0);
}

TEST(AbsValue, SquaresBack)
{
    RandomStream rs(11, "test.abs");
    const AlgebraDescriptor d({1, 3});
    for (int t = 0; t < 20; ++t) {
        const AlgebraElement x = random_algebra_element(rs, d, 1.0);
        const AlgebraElement a = abs_value(x);
        EXPECT_TRUE(is_positive(a));
        EXPECT_LT(max_entry_difference(a * a, adjoint(x) * x), 1e-10);
    }
}

TEST(SqrtPositive, SquaresBack)
{
    RandomStream rs(12, "test.sqrt");
    const AlgebraDescriptor d({2, 2});
    for (int t = 0; t < 20; ++t) {
        const AlgebraElement y = random_algebra_element(rs, d, 1.0);
        const AlgebraElement p = adjoint(y) * y;
        const AlgebraElement r = sqrt_positive(p);
        EXPECT_TRUE(is_positive(r));
        EXPECT_LT(max_entry_difference(r * r, p), 1e-10);
    }
}

TEST(OpNorm, Examples)
{
    EXPECT_DOUBLE_EQ(op_norm(AlgebraElement::identity(AlgebraDescriptor({3}))), 1.0);
    const AlgebraElement x(AlgebraDescriptor({1, 1}), {mat({{2.0}}), mat({{-5.0}})});
    EXPECT_DOUBLE_EQ(op_norm(x), 5.0);
    EXPECT_NEAR(op_norm(single(mat({{0.0, 1.0}, {0.0, 0.0}}))), 1.0, 1e-14);
}

TEST(OpNorm, CStarIdentity)
{
    RandomStream rs(13, "test.cstar");
    const AlgebraDescriptor d({1, 2, 3});
    for (int t = 0; t < 20; ++t) {
        const AlgebraElement x = random_algebra_element(rs, d, 1.5);
        const double n = op_norm(x);
        EXPECT_NEAR(op_norm(adjoint(x) * x), n * n, 1e-10 * (1 + n * n));
    }
}

TEST(RealImag, Examples)
{
    const AlgebraElement h = single(mat({{1.0, Complex(0.0, 2.0)}, {Complex(0.0, -2.0), 3.0}}));
    EXPECT_LT(max_entry_difference(re_part(h), h), 1e-15);
    EXPECT_LT(op_norm(im_part(h)), 1e-15);

    const AlgebraElement ii = I * AlgebraElement::identity(AlgebraDescriptor({2}));
    EXPECT_LT(op_norm(re_part(ii)), 1e-15);
    EXPECT_LT(max_entry_difference(im_part(ii), AlgebraElement::identity(AlgebraDescriptor({2}))),
              1e-15);

    const Matrix x = mat({{0.0, 1.0}, {0.0, 0.0}});
    const AlgebraElement e = single(x);
    EXPECT_LT(max_entry_difference(re_part(e), single(0.5 * mat({{0.0, 1.0}, {1.0, 0.0}}))),
              1e-15);
    const Matrix expected_im = (x - x.adjoint()) / (2.0 * I);
    EXPECT_LT(max_entry_difference(im_part(e), single(expected_im)), 1e-15);
    EXPECT_LT(max_entry_difference(re_part(e) + I * im_part(e), e), 1e-15);
}

TEST(Module, InnerProductExamples)
{
    const AlgebraDescriptor d({1});
    const ModuleElement x(d, {mat({{1.0}, {0.0}})});
    const ModuleElement y(d, {mat({{0.0}, {1.0}})});
    EXPECT_EQ(op_norm(module_inner(x, y)), 0.0);
    EXPECT_EQ(op_norm(module_inner(ModuleElement::zero(d, {2}), y)), 0.0);
    EXPECT_THROW(module_inner(x, ModuleElement::zero(d, {3})), InputError);
}

TEST(Module, InnerProductAxioms)
{
    RandomStream rs(14, "test.module");
    const AlgebraDescriptor d({1, 2});
    const std::vector<std::size_t> ranks{2, 3};
    for (int t = 0; t < 30; ++t) {
        const ModuleElement x = random_module_element(rs, d, ranks, 1.0);
        const ModuleElement y = random_module_element(rs, d, ranks, 1.0);
        const AlgebraElement a = random_algebra_element(rs, d, 1.0);
        const AlgebraElement xx = module_inner(x, x);
        EXPECT_TRUE(is_positive(xx));
        for (std::size_t k = 0; k < d.summand_count(); ++k)
            EXPECT_TRUE(oracle::psd_by_minors(oracle::to_dense(xx.block(k))));
        EXPECT_LT(max_entry_difference(module_inner(x, y), adjoint(module_inner(y, x))), 1e-12);
        EXPECT_LT(max_entry_difference(module_inner(x, y * a), module_inner(x, y) * a), 1e-12);
        EXPECT_LT(max_entry_difference(module_inner(x, x + y),
                                       module_inner(x, x) + module_inner(x, y)),
                  1e-12);
        EXPECT_NEAR(module_norm(x) * module_norm(x), op_norm(xx), 1e-10);
        EXPECT_LT(max_entry_difference(module_abs(x) * module_abs(x), xx), 1e-10);
    }
}

TEST(Module, CauchySchwarz)
{
    RandomStream rs(15, "test.cs");
    const AlgebraDescriptor d({2, 1});
    const std::vector<std::size_t> ranks{3, 2};
    for (int t = 0; t < 200; ++t) {
        const ModuleElement x = random_module_element(rs, d, ranks, 1.0);
        const ModuleElement y = random_module_element(rs, d, ranks, 1.0);
        const AlgebraElement xy = module_inner(x, y);
        const AlgebraElement lhs = adjoint(xy) * xy;
        const AlgebraElement rhs = op_norm(module_inner(x, x)) * module_inner(y, y);
        EXPECT_TRUE(leq(lhs, rhs));
    }
}

TEST(Module, LanceLemma)
{
    RandomStream rs(16, "test.lance");
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index dim = 1 + t % 3;
        const Matrix f = rs.complex_matrix(2 * dim, 2 * dim);
        const Matrix m = f.adjoint() * f;
        const AlgebraElement a = single(m.topLeftCorner(dim, dim));
        const AlgebraElement b = single(m.topRightCorner(dim, dim));
        const AlgebraElement c = single(m.bottomRightCorner(dim, dim));
        EXPECT_TRUE(leq(adjoint(b) * b, op_norm(a) * c));
    }
}

TEST(Tolerance, Validate)
{
    EXPECT_NO_THROW(ToleranceConfig{}.validate());
    EXPECT_THROW((ToleranceConfig{0.0, 1e-10}).validate(), InputError);
    EXPECT_THROW((ToleranceConfig{1e-9, -1.0}).validate(), InputError);
}
