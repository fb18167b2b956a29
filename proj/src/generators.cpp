#include "cpdk/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpdk/error.hpp"

namespace cpdk {

void GenConfig::validate() const
{
    if (n == 0)
        throw InputError("generator needs n >= 1");
    if (!std::isfinite(magnitude) || magnitude < 0.0)
        throw InputError("generator magnitude must be finite and nonnegative");
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t tag_hash(std::string_view tag)
{
    std::uint64_t h = 0xCBF29CE484222325ULL; // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t x : path)
        h = splitmix64(h ^ splitmix64(x));
    return h;
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view tag,
                           std::uint64_t label, std::uint64_t summand)
    : engine_(derive_seed(seed, {tag_hash(tag), label, summand}))
{
}

double RandomStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal()
{
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex RandomStream::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix RandomStream::complex_matrix(Eigen::Index rows, Eigen::Index cols)
{
    Matrix m(rows, cols);
    // Column-major fill order is part of the stream definition.
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = complex_normal();
    return m;
}

IndexSet default_index_set(std::size_t n)
{
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 1; i <= n; ++i)
        labels.push_back("s" + std::to_string(i));
    return IndexSet(std::move(labels));
}

ModuleElement random_module_element(RandomStream &rs,
                                    const AlgebraDescriptor &descriptor,
                                    const std::vector<std::size_t> &ranks,
                                    double magnitude)
{
    std::vector<Matrix> blocks;
    blocks.reserve(descriptor.summand_count());
    for (std::size_t k = 0; k < descriptor.summand_count(); ++k)
        blocks.push_back(magnitude *
                         rs.complex_matrix(static_cast<Eigen::Index>(ranks.at(k)),
                                           static_cast<Eigen::Index>(descriptor.dim(k))));
    return ModuleElement(descriptor, std::move(blocks));
}

AlgebraElement random_algebra_element(RandomStream &rs,
                                      const AlgebraDescriptor &descriptor,
                                      double magnitude)
{
    std::vector<Matrix> blocks;
    blocks.reserve(descriptor.summand_count());
    for (std::size_t d : descriptor.dims()) {
        const auto n = static_cast<Eigen::Index>(d);
        blocks.push_back(magnitude * rs.complex_matrix(n, n));
    }
    return AlgebraElement(descriptor, std::move(blocks));
}

AlgebraElement random_self_adjoint(RandomStream &rs,
                                   const AlgebraDescriptor &descriptor,
                                   double magnitude)
{
    return re_part(random_algebra_element(rs, descriptor, magnitude));
}

Matrix random_positive_contraction(RandomStream &rs, Eigen::Index r)
{
    if (r == 0)
        return Matrix(0, 0);
    const Matrix g = rs.complex_matrix(r, r);
    const Matrix p = g.adjoint() * g;
    const double scale = 0.25 + 0.75 * rs.uniform(); // final norm in [0.25, 1)
    Matrix c = (scale / spectral_norm(p)) * p;
    return 0.5 * (c + c.adjoint());
}

namespace {

std::vector<std::size_t> factor_ranks(const GenConfig &cfg)
{
    std::vector<std::size_t> ranks;
    for (std::size_t d : cfg.descriptor.dims())
        ranks.push_back(cfg.rank == 0 ? d : cfg.rank);
    return ranks;
}

/// g(s) per label, each label on its own stream.
std::vector<ModuleElement> random_points(const GenConfig &cfg, std::string_view tag,
                                         const std::vector<std::size_t> &ranks)
{
    std::vector<ModuleElement> g;
    g.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        std::vector<Matrix> blocks;
        for (std::size_t k = 0; k < cfg.descriptor.summand_count(); ++k) {
            RandomStream rs(cfg.seed, tag, i, k);
            blocks.push_back(cfg.magnitude *
                             rs.complex_matrix(static_cast<Eigen::Index>(ranks[k]),
                                               static_cast<Eigen::Index>(
                                                   cfg.descriptor.dim(k))));
        }
        g.emplace_back(cfg.descriptor, std::move(blocks));
    }
    return g;
}

AlgebraElement element_on_streams(const GenConfig &cfg, std::string_view tag,
                                  std::uint64_t label, double magnitude)
{
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < cfg.descriptor.summand_count(); ++k) {
        RandomStream rs(cfg.seed, tag, label, k);
        const auto d = static_cast<Eigen::Index>(cfg.descriptor.dim(k));
        blocks.push_back(magnitude * rs.complex_matrix(d, d));
    }
    return AlgebraElement(cfg.descriptor, std::move(blocks));
}

} // namespace

Kernel random_gram_kernel(const GenConfig &cfg)
{
    cfg.validate();
    const auto g = random_points(cfg, "gram.g", factor_ranks(cfg));
    return Kernel::from_function(default_index_set(cfg.n), cfg.descriptor,
                                 [&](std::size_t i, std::size_t j) {
                                     return module_inner(g[i], g[j]);
                                 });
}

Kernel random_cpd_kernel(const GenConfig &cfg, bool zero_diagonal)
{
    cfg.validate();
    const IndexSet set = default_index_set(cfg.n);

    if (zero_diagonal) {
        const std::size_t families = cfg.rank == 0 ? 2 : cfg.rank;
        Kernel k = Kernel::zero(set, cfg.descriptor);
        for (std::size_t f = 0; f < families; ++f) {
            std::vector<Matrix> y = element_on_streams(cfg, "cpd.sqdiff.p", f, 1.0).blocks();
            for (auto &b : y)
                b = b.real().cast<Complex>();
            const AlgebraElement real_y(cfg.descriptor, std::move(y));
            const AlgebraElement weight = adjoint(real_y) * real_y;
            std::vector<Eigen::Vector2d> x;
            for (std::size_t i = 0; i < cfg.n; ++i) {
                RandomStream rs(cfg.seed, "cpd.sqdiff.x", f * cfg.n + i);
                const double a = rs.normal();
                x.emplace_back(cfg.magnitude * a, cfg.magnitude * rs.normal());
            }
            k += Kernel::from_function(set, cfg.descriptor, [&](std::size_t i, std::size_t j) {
                return Complex(-(x[i] - x[j]).squaredNorm()) * weight;
            });
        }
        return k;
    }

    RandomStream alpha_stream(cfg.seed, "cpd.alpha");
    const double alpha = 0.5 + alpha_stream.uniform();
    const Kernel gram = random_gram_kernel(cfg);
    std::vector<AlgebraElement> c;
    for (std::size_t i = 0; i < cfg.n; ++i)
        c.push_back(element_on_streams(cfg, "cpd.c", i, cfg.magnitude));
    return Kernel::from_function(set, cfg.descriptor, [&](std::size_t i, std::size_t j) {
        return alpha * gram(i, j) + (c[i] + adjoint(c[j]));
    });
}

Kernel random_hermitian_kernel(const GenConfig &cfg)
{
    cfg.validate();
    const std::size_t n = cfg.n;
    std::vector<AlgebraElement> upper;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            upper.push_back(element_on_streams(cfg, "hermitian", i * n + j,
                                               cfg.magnitude));
    return Kernel::from_function(default_index_set(n), cfg.descriptor,
                                 [&](std::size_t i, std::size_t j) {
                                     if (i == j)
                                         return re_part(upper[i * n + i]);
                                     return i < j ? upper[i * n + j]
                                                  : adjoint(upper[j * n + i]);
                                 });
}

Kernel random_non_cpd_kernel(const GenConfig &cfg, double margin)
{
    cfg.validate();
    if (cfg.n < 2)
        throw InputError("non-CPD kernels need n >= 2");
    const Kernel base = random_cpd_kernel(cfg);
    const double scale = std::max(1.0, kernel_norm(base));
    const ToleranceConfig strict{margin, 1e-10};
    GenConfig noise_cfg = cfg;
    noise_cfg.magnitude = 1.0;

    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        noise_cfg.seed = derive_seed(cfg.seed, {tag_hash("noncpd.noise"), attempt});
        const Kernel noise = random_hermitian_kernel(noise_cfg);
        const double noise_norm = std::max(kernel_norm(noise), 1e-300);
        for (double eps = 1e-3 * scale / noise_norm; eps * noise_norm < 1e4 * scale;
             eps *= 2.0) {
            Kernel k = base + eps * noise;
            if (!is_conditionally_positive_definite(k, strict))
                return k;
        }
    }
    throw InputError("random_non_cpd_kernel: no failing perturbation found");
}

std::vector<ModuleElement> random_metric_points(const GenConfig &cfg)
{
    cfg.validate();
    if (cfg.n < 2)
        throw InputError("metrics need n >= 2");
    if (cfg.magnitude <= 0.0)
        throw InputError("metrics need a positive magnitude");
    const std::size_t m = cfg.rank == 0 ? 2 : cfg.rank;
    const auto mm = static_cast<Eigen::Index>(m);
    const std::size_t summands = cfg.descriptor.summand_count();

    // Point block in summand k: blockdiag(v^1, ..., v^d) U with v^j in C^m and
    // U unitary. Then |p - q| = U* diag(||v^j_p - v^j_q||) U, a commuting
    // family, so the triangle inequality holds in the C*-order.
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::vector<Matrix> unitaries(summands);
        for (std::size_t k = 0; k < summands; ++k) {
            RandomStream rs(derive_seed(cfg.seed, {attempt}), "metric.unitary", 0, k);
            const auto d = static_cast<Eigen::Index>(cfg.descriptor.dim(k));
            Eigen::HouseholderQR<Matrix> qr(rs.complex_matrix(d, d));
            unitaries[k] = qr.householderQ() * Matrix::Identity(d, d);
        }

        std::vector<ModuleElement> points;
        double min_gap = std::numeric_limits<double>::infinity();
        std::vector<std::vector<Matrix>> columns(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) {
            std::vector<Matrix> blocks;
            for (std::size_t k = 0; k < summands; ++k) {
                RandomStream rs(derive_seed(cfg.seed, {attempt}), "metric.point", i, k);
                const auto d = static_cast<Eigen::Index>(cfg.descriptor.dim(k));
                const Matrix v = cfg.magnitude * rs.complex_matrix(mm, d);
                Matrix block = Matrix::Zero(mm * d, d);
                for (Eigen::Index j = 0; j < d; ++j)
                    block.block(j * mm, j, mm, 1) = v.col(j);
                columns[i].push_back(v);
                blocks.push_back(block * unitaries[k]);
            }
            points.emplace_back(cfg.descriptor, std::move(blocks));
        }
        for (std::size_t i = 0; i < cfg.n; ++i)
            for (std::size_t j = i + 1; j < cfg.n; ++j)
                for (std::size_t k = 0; k < summands; ++k)
                    min_gap = std::min(
                        min_gap,
                        (columns[i][k] - columns[j][k]).colwise().norm().minCoeff());
        // Redraw near-coincident points so every distance is well conditioned.
        if (min_gap >= 0.05 * cfg.magnitude || attempt >= 1000)
            return points;
    }
}

CStarMetric random_metric(const GenConfig &cfg)
{
    return distance_matrix_from_points(default_index_set(cfg.n),
                                       random_metric_points(cfg));
}

MajorizedPair random_majorized_pair(const GenConfig &cfg)
{
    Kernel k = random_cpd_kernel(cfg, true);
    const Factorization f = decompose_cpd(k, k.set().label(0)).factorization;
    std::vector<Matrix> c0;
    std::vector<Matrix> c;
    for (std::size_t s = 0; s < f.ranks.size(); ++s) {
        RandomStream rs(cfg.seed, "pair.contraction", 0, s);
        c0.push_back(random_positive_contraction(rs, static_cast<Eigen::Index>(f.ranks[s])));
        c.push_back(c0.back().adjoint() * c0.back());
    }
    Kernel kp = majorized_kernel(f, c);
    return MajorizedPair{std::move(k), std::move(kp), std::move(c0)};
}

namespace {

AlgebraElement scalar1(double v)
{
    return AlgebraElement::scalar(AlgebraDescriptor({1}), v);
}

CStarMetric scalar_metric(std::vector<std::string> labels,
                          const std::vector<std::vector<double>> &table)
{
    std::vector<AlgebraElement> values;
    for (const auto &row : table)
        for (double v : row)
            values.push_back(scalar1(v));
    return CStarMetric(IndexSet(std::move(labels)), AlgebraDescriptor({1}),
                       std::move(values));
}

} // namespace

std::vector<std::string> fixture_names()
{
    return {"schur-counterexample", "star-metric", "collinear-3", "two-point"};
}

Fixture fixture(const std::string &name)
{
    if (name == "schur-counterexample") {
        return Kernel(IndexSet({"1", "2"}), AlgebraDescriptor({1}),
                      {scalar1(0), scalar1(-1), scalar1(-1), scalar1(0)});
    }
    if (name == "star-metric") {
        return scalar_metric({"c", "l1", "l2", "l3"}, {{0, 1, 1, 1},
                                                       {1, 0, 2, 2},
                                                       {1, 2, 0, 2},
                                                       {1, 2, 2, 0}});
    }
    if (name == "collinear-3")
        return scalar_metric({"p0", "p1", "p2"}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    if (name == "two-point")
        return scalar_metric({"a", "b"}, {{0, 1}, {1, 0}});
    throw InputError("unknown fixture '" + name + "'");
}

} // namespace cpdk
