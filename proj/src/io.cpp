#include "cpdk/io.hpp"

namespace cpdk {

namespace {

std::string child(const std::string &path, const std::string &key)
{
    return path + "/" + key;
}

std::string child(const std::string &path, std::size_t index)
{
    return path + "/" + std::to_string(index);
}

const Json &require_key(const Json &j, const std::string &key, const std::string &path)
{
    if (!j.is_object())
        throw SchemaError(path.empty() ? "/" : path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(path.empty() ? "/" : path, "missing key '" + key + "'");
    return *it;
}

const Json &require_array(const Json &j, const std::string &path)
{
    if (!j.is_array())
        throw SchemaError(path, "expected an array");
    return j;
}

const Json &require_array(const Json &j, std::size_t size, const std::string &path)
{
    require_array(j, path);
    if (j.size() != size)
        throw SchemaError(path, "expected " + std::to_string(size) +
                                    " entries, found " + std::to_string(j.size()));
    return j;
}

double require_number(const Json &j, const std::string &path)
{
    if (!j.is_number())
        throw SchemaError(path, "expected a number");
    return j.get<double>();
}

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json &j, const std::string &path)
{
    if (!j.is_array() || j.size() != 2)
        throw SchemaError(path, "expected a [re, im] pair");
    return {require_number(j[0], child(path, 0)), require_number(j[1], child(path, 1))};
}

AlgebraDescriptor descriptor_from_json(const Json &j, const std::string &path)
{
    const std::string p = child(path, "summands");
    const Json &dims = require_array(require_key(j, "summands", path), p);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!dims[k].is_number_integer() || dims[k].get<long long>() < 1)
            throw SchemaError(child(p, k), "expected a positive integer");
        out.push_back(dims[k].get<std::size_t>());
    }
    if (out.empty())
        throw SchemaError(p, "expected at least one summand");
    return AlgebraDescriptor(std::move(out));
}

IndexSet set_from_json(const Json &j, const std::string &path)
{
    require_array(j, path);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string())
            throw SchemaError(child(path, i), "expected a string label");
        labels.push_back(j[i].get<std::string>());
    }
    try {
        return IndexSet(std::move(labels));
    } catch (const InputError &e) {
        throw SchemaError(path, e.what());
    }
}

Json set_to_json(const IndexSet &s) { return Json(s.labels()); }

std::vector<AlgebraElement> table_from_json(const Json &j, const IndexSet &set,
                                            const AlgebraDescriptor &desc,
                                            const std::string &path)
{
    const std::size_t n = set.size();
    require_array(j, n, path);
    std::vector<AlgebraElement> values;
    values.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row_path = child(path, i);
        require_array(j[i], n, row_path);
        for (std::size_t t = 0; t < n; ++t)
            values.push_back(element_from_json(j[i][t], desc, child(row_path, t)));
    }
    return values;
}

Json table_to_json(const std::vector<AlgebraElement> &values, std::size_t n)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::size_t t = 0; t < n; ++t)
            row.push_back(element_to_json(values[i * n + t]));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json labeled_points_to_json(const std::vector<ModuleElement> &points, const IndexSet &set)
{
    Json out = Json::object();
    for (std::size_t i = 0; i < points.size(); ++i)
        out[set.label(i)] = module_element_to_json(points[i]);
    return out;
}

std::vector<ModuleElement> labeled_points_from_json(const Json &j, const IndexSet &set,
                                                    const AlgebraDescriptor &desc,
                                                    const std::string &path)
{
    if (!j.is_object())
        throw SchemaError(path, "expected an object keyed by label");
    std::vector<ModuleElement> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const std::string &label = set.label(i);
        out.push_back(module_element_from_json(require_key(j, label, path), desc,
                                               child(path, label)));
    }
    return out;
}

} // namespace

Json matrix_to_json(const Matrix &m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j, Eigen::Index cols, const std::string &path)
{
    require_array(j, path);
    const auto rows = static_cast<Eigen::Index>(j.size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::string row_path = child(path, static_cast<std::size_t>(i));
        const Json &row = require_array(j[static_cast<std::size_t>(i)],
                                        static_cast<std::size_t>(cols), row_path);
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                        child(row_path, static_cast<std::size_t>(c)));
    }
    return m;
}

Json vector_to_json(const Vector &v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(complex_to_json(v(i)));
    return out;
}

Vector vector_from_json(const Json &j, const std::string &path)
{
    require_array(j, path);
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], child(path, i));
    return v;
}

Json element_to_json(const AlgebraElement &x)
{
    Json blocks = Json::array();
    for (const auto &b : x.blocks())
        blocks.push_back(matrix_to_json(b));
    return blocks;
}

AlgebraElement element_from_json(const Json &j, const AlgebraDescriptor &desc,
                                 const std::string &path)
{
    require_array(j, desc.summand_count(), path);
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < desc.summand_count(); ++k) {
        const auto d = static_cast<Eigen::Index>(desc.dim(k));
        const std::string p = child(path, k);
        require_array(j[k], desc.dim(k), p);
        blocks.push_back(matrix_from_json(j[k], d, p));
    }
    return AlgebraElement(desc, std::move(blocks));
}

Json module_element_to_json(const ModuleElement &x)
{
    Json blocks = Json::array();
    for (const auto &b : x.blocks())
        blocks.push_back(matrix_to_json(b));
    return blocks;
}

ModuleElement module_element_from_json(const Json &j, const AlgebraDescriptor &desc,
                                       const std::string &path)
{
    require_array(j, desc.summand_count(), path);
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < desc.summand_count(); ++k)
        blocks.push_back(matrix_from_json(
            j[k], static_cast<Eigen::Index>(desc.dim(k)), child(path, k)));
    return ModuleElement(desc, std::move(blocks));
}

Json descriptor_to_json(const AlgebraDescriptor &d)
{
    return Json{{"summands", d.dims()}};
}

Json kernel_to_json(const Kernel &k)
{
    return Json{{"algebra", descriptor_to_json(k.descriptor())},
                {"set", set_to_json(k.set())},
                {"values", table_to_json(k.values(), k.size())}};
}

Kernel kernel_from_json(const Json &j)
{
    const AlgebraDescriptor desc =
        descriptor_from_json(require_key(j, "algebra", ""), "/algebra");
    const IndexSet set = set_from_json(require_key(j, "set", ""), "/set");
    return Kernel(set, desc,
                  table_from_json(require_key(j, "values", ""), set, desc, "/values"));
}

Json metric_to_json(const CStarMetric &d)
{
    return Json{{"algebra", descriptor_to_json(d.descriptor())},
                {"set", set_to_json(d.set())},
                {"metric", table_to_json(d.values(), d.size())}};
}

CStarMetric metric_from_json(const Json &j)
{
    const AlgebraDescriptor desc =
        descriptor_from_json(require_key(j, "algebra", ""), "/algebra");
    const IndexSet set = set_from_json(require_key(j, "set", ""), "/set");
    return CStarMetric(set, desc,
                       table_from_json(require_key(j, "metric", ""), set, desc, "/metric"));
}

Json verdict_to_json(const Verdict &v)
{
    Json out{{"holds", v.holds}};
    if (!v.reason.empty())
        out["reason"] = v.reason;
    if (v.witness) {
        out["witness"] = Json{{"summand", v.witness->summand},
                              {"vector", vector_to_json(v.witness->vector)},
                              {"eigenvalue", v.witness->eigenvalue}};
    }
    return out;
}

Verdict verdict_from_json(const Json &j)
{
    Verdict v;
    const Json &holds = require_key(j, "holds", "/verdict");
    if (!holds.is_boolean())
        throw SchemaError("/verdict/holds", "expected a boolean");
    v.holds = holds.get<bool>();
    if (j.contains("reason"))
        v.reason = j.at("reason").get<std::string>();
    if (j.contains("witness")) {
        const Json &w = j.at("witness");
        Witness wit;
        wit.summand = require_key(w, "summand", "/witness").get<std::size_t>();
        wit.vector = vector_from_json(require_key(w, "vector", "/witness"), "/witness/vector");
        wit.eigenvalue = require_number(require_key(w, "eigenvalue", "/witness"),
                                        "/witness/eigenvalue");
        v.witness = std::move(wit);
    }
    return v;
}

Json factorization_to_json(const Factorization &f)
{
    return Json{{"ranks", f.ranks}, {"V", labeled_points_to_json(f.V, f.set)}};
}

Factorization factorization_from_json(const Json &j, const IndexSet &set,
                                      const AlgebraDescriptor &desc,
                                      const std::string &path)
{
    auto v = labeled_points_from_json(require_key(j, "V", path), set, desc,
                                       child(path, "V"));
    std::vector<std::size_t> ranks = v.empty() ? std::vector<std::size_t>{} : v[0].ranks();
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i].ranks() != ranks)
            throw SchemaError(child(path, "V"), "points have different ranks");
    return Factorization{set, desc, std::move(ranks), std::move(v)};
}

Json decomposition_to_json(const CPDDecomposition &d)
{
    Json h = Json::object();
    for (std::size_t i = 0; i < d.h.size(); ++i)
        h[d.factorization.set.label(i)] = element_to_json(d.h[i]);
    return Json{{"base_point", d.base_point},
                {"factorization", factorization_to_json(d.factorization)},
                {"h", std::move(h)}};
}

CPDDecomposition decomposition_from_json(const Json &j, const IndexSet &set,
                                         const AlgebraDescriptor &desc,
                                         const std::string &path)
{
    Factorization f = factorization_from_json(require_key(j, "factorization", path), set,
                                              desc, child(path, "factorization"));
    const Json &hj = require_key(j, "h", path);
    std::vector<AlgebraElement> h;
    for (std::size_t i = 0; i < set.size(); ++i)
        h.push_back(element_from_json(require_key(hj, set.label(i), child(path, "h")),
                                      desc, child(child(path, "h"), set.label(i))));
    const Json &bp = require_key(j, "base_point", path);
    if (!bp.is_string())
        throw SchemaError(child(path, "base_point"), "expected a label");
    return CPDDecomposition{std::move(f), std::move(h), bp.get<std::string>()};
}

Json embedding_to_json(const EmbeddingResult &e, const IndexSet &set)
{
    return Json{{"V", labeled_points_to_json(e.V, set)},
                {"ranks", e.V.empty() ? std::vector<std::size_t>{} : e.V[0].ranks()},
                {"max_distance_error", e.max_distance_error}};
}

std::vector<ModuleElement> embedding_points_from_json(const Json &j, const IndexSet &set,
                                                      const AlgebraDescriptor &desc,
                                                      const std::string &path)
{
    return labeled_points_from_json(require_key(j, "V", path), set, desc,
                                    child(path, "V"));
}

Json families_to_json(const std::vector<std::vector<AlgebraElement>> &families,
                      const IndexSet &set)
{
    Json out = Json::array();
    for (const auto &family : families) {
        Json f = Json::object();
        for (std::size_t i = 0; i < family.size(); ++i)
            f[set.label(i)] = element_to_json(family[i]);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<std::vector<AlgebraElement>>
families_from_json(const Json &j, const IndexSet &set, const AlgebraDescriptor &desc,
                   const std::string &path)
{
    require_array(j, path);
    std::vector<std::vector<AlgebraElement>> out;
    for (std::size_t f = 0; f < j.size(); ++f) {
        const std::string fp = child(path, f);
        std::vector<AlgebraElement> family;
        for (std::size_t i = 0; i < set.size(); ++i)
            family.push_back(element_from_json(require_key(j[f], set.label(i), fp), desc,
                                               child(fp, set.label(i))));
        out.push_back(std::move(family));
    }
    return out;
}

Json certificate_to_json(const MajorizationCertificate &c)
{
    Json w = Json::array();
    Json cc = Json::array();
    for (std::size_t s = 0; s < c.W.size(); ++s) {
        w.push_back(matrix_to_json(c.W[s]));
        cc.push_back(matrix_to_json(c.C[s]));
    }
    return Json{{"W", std::move(w)},
                {"C", std::move(cc)},
                {"residual", c.residual},
                {"norm_W", c.norm_W},
                {"reconstruction_error", c.reconstruction_error},
                {"factor_K", factorization_to_json(c.factor_K)},
                {"factor_Kp", factorization_to_json(c.factor_Kp)}};
}

Json tolerance_to_json(const ToleranceConfig &t)
{
    return Json{{"tol_rel", t.tol_rel}, {"rank_tol_rel", t.rank_tol_rel}};
}

// ---------------------------------------------------------------------------
// Report

Json Report::to_json(bool include_timings) const
{
    Json out{{"command", command},
             {"verdict", verdict ? Json(*verdict) : Json("n/a")},
             {"tolerances", tolerance_to_json(tolerances)}};
    if (witness)
        out["witness"] = *witness;
    if (artifacts)
        out["artifacts"] = *artifacts;
    if (include_timings)
        out["timings"] = timings;
    return out;
}

Report Report::from_json(const Json &j)
{
    Report r;
    const Json &cmd = require_key(j, "command", "");
    if (!cmd.is_string())
        throw SchemaError("/command", "expected a string");
    r.command = cmd.get<std::string>();

    const Json &v = require_key(j, "verdict", "");
    if (v.is_boolean())
        r.verdict = v.get<bool>();
    else if (!(v.is_string() && v.get<std::string>() == "n/a"))
        throw SchemaError("/verdict", "expected a boolean or \"n/a\"");

    if (j.contains("witness"))
        r.witness = j.at("witness");
    if (j.contains("artifacts"))
        r.artifacts = j.at("artifacts");
    if (j.contains("timings")) {
        const Json &t = j.at("timings");
        if (!t.is_object())
            throw SchemaError("/timings", "expected an object");
        for (const auto &[phase, ms] : t.items())
            r.timings[phase] = require_number(ms, "/timings/" + phase);
    }
    const Json &tol = require_key(j, "tolerances", "");
    r.tolerances.tol_rel = require_number(require_key(tol, "tol_rel", "/tolerances"),
                                          "/tolerances/tol_rel");
    r.tolerances.rank_tol_rel =
        require_number(require_key(tol, "rank_tol_rel", "/tolerances"),
                       "/tolerances/rank_tol_rel");
    return r;
}

bool operator==(const Report &a, const Report &b)
{
    return a.command == b.command && a.verdict == b.verdict && a.witness == b.witness &&
           a.artifacts == b.artifacts && a.timings == b.timings &&
           a.tolerances.tol_rel == b.tolerances.tol_rel &&
           a.tolerances.rank_tol_rel == b.tolerances.rank_tol_rel;
}

} // namespace cpdk
