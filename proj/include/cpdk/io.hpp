#pragma once

// JSON documents for kernels, metrics and the artifacts the CLI emits.
//
// Kernel document:
//   {"algebra": {"summands": [d_1, ...]}, "set": [labels...],
//    "values": [[element, ...], ...]}            (n rows of n elements)
// Metric documents use the key "metric" instead of "values".
// An element is an array of blocks, one per summand; a block is a row-major
// array of rows, each row an array of [re, im] pairs.

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "cpdk/algebra.hpp"
#include "cpdk/decomposition.hpp"
#include "cpdk/embedding.hpp"
#include "cpdk/error.hpp"
#include "cpdk/kernels.hpp"

namespace cpdk {

using Json = nlohmann::json;

/// Schema violation; the message starts with the JSON pointer of the
/// offending node.
class SchemaError : public InputError {
  public:
    SchemaError(const std::string &path, const std::string &message)
        : InputError(path + ": " + message), path_(path) {}
    const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

Json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j, Eigen::Index cols, const std::string &path);
Json vector_to_json(const Vector &v);
Vector vector_from_json(const Json &j, const std::string &path);

Json element_to_json(const AlgebraElement &x);
AlgebraElement element_from_json(const Json &j, const AlgebraDescriptor &desc,
                                 const std::string &path);
Json module_element_to_json(const ModuleElement &x);
ModuleElement module_element_from_json(const Json &j, const AlgebraDescriptor &desc,
                                       const std::string &path);

Json descriptor_to_json(const AlgebraDescriptor &d);

Json kernel_to_json(const Kernel &k);
Kernel kernel_from_json(const Json &j);
Json metric_to_json(const CStarMetric &d);
CStarMetric metric_from_json(const Json &j);

Json verdict_to_json(const Verdict &v);
Verdict verdict_from_json(const Json &j);

Json factorization_to_json(const Factorization &f);
Factorization factorization_from_json(const Json &j, const IndexSet &set,
                                      const AlgebraDescriptor &desc,
                                      const std::string &path);
Json decomposition_to_json(const CPDDecomposition &d);
CPDDecomposition decomposition_from_json(const Json &j, const IndexSet &set,
                                         const AlgebraDescriptor &desc,
                                         const std::string &path);
Json embedding_to_json(const EmbeddingResult &e, const IndexSet &set);
std::vector<ModuleElement> embedding_points_from_json(const Json &j,
                                                      const IndexSet &set,
                                                      const AlgebraDescriptor &desc,
                                                      const std::string &path);
Json families_to_json(const std::vector<std::vector<AlgebraElement>> &families,
                      const IndexSet &set);
std::vector<std::vector<AlgebraElement>>
families_from_json(const Json &j, const IndexSet &set, const AlgebraDescriptor &desc,
                   const std::string &path);
Json certificate_to_json(const MajorizationCertificate &c);

Json tolerance_to_json(const ToleranceConfig &t);

/// Machine-readable result of one CLI command.
struct Report {
    std::string command;
    std::optional<bool> verdict; ///< empty serializes as "n/a"
    std::optional<Json> witness;
    std::optional<Json> artifacts;
    std::map<std::string, double> timings; ///< milliseconds per phase
    ToleranceConfig tolerances;

    Json to_json(bool include_timings = true) const;
    static Report from_json(const Json &j);

    friend bool operator==(const Report &a, const Report &b);
};

} // namespace cpdk
