#pragma once

#include <initializer_list>
#include <vector>

#include "cpdk/algebra.hpp"
#include "cpdk/kernels.hpp"

namespace testutil {

using cpdk::AlgebraDescriptor;
using cpdk::AlgebraElement;
using cpdk::Complex;
using cpdk::Kernel;
using cpdk::Matrix;

inline AlgebraElement scalar(double v)
{
    return AlgebraElement::scalar(AlgebraDescriptor({1}), Complex(v, 0.0));
}

inline AlgebraElement single(const Matrix &m)
{
    return AlgebraElement(AlgebraDescriptor({static_cast<std::size_t>(m.rows())}), {m});
}

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows)
{
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto &row : rows) {
        Eigen::Index j = 0;
        for (const auto &v : row)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

inline std::vector<std::string> labels(std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back("s" + std::to_string(i));
    return out;
}

/// Scalar kernel from a real symmetric table.
inline Kernel scalar_kernel(std::initializer_list<std::initializer_list<double>> rows)
{
    std::vector<AlgebraElement> values;
    for (const auto &row : rows)
        for (double v : row)
            values.push_back(scalar(v));
    return Kernel(cpdk::IndexSet(labels(rows.size())), AlgebraDescriptor({1}), values);
}

inline double value(const AlgebraElement &x) { return x.block(0)(0, 0).real(); }

} // namespace testutil
