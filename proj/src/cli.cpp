#include "cpdk/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cpdk/decomposition.hpp"
#include "cpdk/embedding.hpp"
#include "cpdk/error.hpp"
#include "cpdk/generators.hpp"
#include "cpdk/io.hpp"
#include "cpdk/kernels.hpp"

namespace cpdk {

namespace {

struct GlobalOptions {
    ToleranceConfig tol;
    unsigned threads = 1;
    bool timings = false;
};

/// Threshold for reconstructions checked by --verify and fuzz:
/// 10 tol_rel (1 + scale), i.e. 1e-8 (1 + scale) at the default tolerance.
double reconstruction_tolerance(const ToleranceConfig &tol, double scale)
{
    return 10.0 * tol.tol_rel * (1.0 + scale);
}

class Session {
  public:
    Session(const GlobalOptions &opts, std::istream &in, std::ostream &out)
        : opts_(opts), in_(in), out_(out)
    {
    }

    Report make_report(const std::string &command) const
    {
        Report r;
        r.command = command;
        r.tolerances = opts_.tol;
        return r;
    }

    template <class F>
    auto timed(Report &r, const std::string &phase, F &&fn)
    {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(r, phase, start);
        } else {
            auto result = fn();
            record(r, phase, start);
            return result;
        }
    }

    Json read_json(const std::string &path) const
    {
        std::string text;
        if (path == "-") {
            std::ostringstream ss;
            ss << in_.rdbuf();
            text = ss.str();
        } else {
            std::ifstream file(path);
            if (!file)
                throw InputError("cannot open '" + path + "'");
            std::ostringstream ss;
            ss << file.rdbuf();
            text = ss.str();
        }
        try {
            return Json::parse(text);
        } catch (const Json::parse_error &e) {
            throw SchemaError("/", "invalid JSON in '" + path + "': " + e.what());
        }
    }

    int emit(const Report &r, int code) const
    {
        out_ << r.to_json(opts_.timings).dump(2) << '\n';
        return code;
    }

    int emit_verdict(Report &r, const Verdict &v) const
    {
        r.verdict = v.holds;
        if (!v.holds)
            r.witness = verdict_to_json(v);
        return emit(r, v.holds ? kHolds : kFails);
    }

    const ToleranceConfig &tol() const { return opts_.tol; }

  private:
    static void record(Report &r, const std::string &phase,
                       std::chrono::steady_clock::time_point start)
    {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        r.timings[phase] +=
            std::chrono::duration<double, std::milli>(elapsed).count();
    }

    const GlobalOptions &opts_;
    std::istream &in_;
    std::ostream &out_;
};

std::string base_or_first(const std::string &base, const IndexSet &set)
{
    if (base.empty())
        return set.label(0);
    set.index_of(base);
    return base;
}

const Json &artifact(const Json &report, const std::string &key, const std::string &file)
{
    if (!report.contains("artifacts") || !report["artifacts"].contains(key))
        throw SchemaError("/artifacts", "report '" + file + "' has no '" + key +
                                            "' artifact");
    return report["artifacts"][key];
}

// ---------------------------------------------------------------------------
// Commands

int cmd_check_pd(Session &s, const std::string &file)
{
    Report r = s.make_report("check-pd");
    const Kernel k = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(file)); });
    const Verdict v = s.timed(r, "check", [&] { return is_positive_definite(k, s.tol()); });
    return s.emit_verdict(r, v);
}

int cmd_check_cpd(Session &s, const std::string &file, const std::string &method,
                  const std::string &base)
{
    Report r = s.make_report("check-cpd");
    const Kernel k = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(file)); });
    const std::string bp = base_or_first(base, k.set());
    const Verdict v = s.timed(r, "check", [&] {
        if (method == "shift")
            return is_positive_definite(shift_transform(k, bp), s.tol());
        if (method == "corm")
            return cond_positive_matrix_check(k, k.set().index_of(bp), s.tol());
        return is_conditionally_positive_definite(k, s.tol());
    });
    r.artifacts = Json{{"method", method}};
    if (method != "compression")
        (*r.artifacts)["base_point"] = bp;
    return s.emit_verdict(r, v);
}

int cmd_transform(Session &s, const std::string &file, const std::string &base)
{
    Report r = s.make_report("transform");
    const Kernel k = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(file)); });
    const std::string bp = base_or_first(base, k.set());
    const Kernel l = s.timed(r, "transform", [&] { return shift_transform(k, bp); });
    r.artifacts = Json{{"base_point", bp}, {"kernel", kernel_to_json(l)}};
    return s.emit(r, kHolds);
}

int cmd_decompose(Session &s, const std::string &file, const std::string &base,
                  const std::string &verify)
{
    Report r = s.make_report("decompose");
    const Kernel k = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(file)); });
    const double limit = reconstruction_tolerance(s.tol(), kernel_norm(k));

    if (!verify.empty()) {
        const Json source = s.read_json(verify);
        const CPDDecomposition dec = decomposition_from_json(
            artifact(source, "decomposition", verify), k.set(), k.descriptor(),
            "/artifacts/decomposition");
        const double err = s.timed(r, "verify", [&] {
            return max_entry_difference(reconstruct_cpd(dec), k);
        });
        r.verdict = err <= limit;
        r.artifacts = Json{{"verify", {{"reconstruction_error", err}, {"tolerance", limit}}}};
        return s.emit(r, *r.verdict ? kHolds : kFails);
    }

    const Verdict v =
        s.timed(r, "check", [&] { return is_conditionally_positive_definite(k, s.tol()); });
    if (!v)
        return s.emit_verdict(r, v);
    const std::string bp = base_or_first(base, k.set());
    const CPDDecomposition dec = s.timed(r, "decompose", [&] {
        return decompose_cpd(k, bp, s.tol());
    });
    const double err = s.timed(r, "reconstruct", [&] {
        return max_entry_difference(reconstruct_cpd(dec), k);
    });
    r.artifacts = Json{{"decomposition", decomposition_to_json(dec)},
                       {"ranks", dec.factorization.ranks},
                       {"reconstruction_error", err},
                       {"reconstruction_tolerance", limit}};
    r.verdict = err <= limit;
    return s.emit(r, *r.verdict ? kHolds : kFails);
}

Kernel sum_of_families(const Kernel &k,
                       const std::vector<std::vector<AlgebraElement>> &families)
{
    Kernel total = Kernel::zero(k.set(), k.descriptor());
    for (const auto &f : families)
        total += sq_diff_kernel(k.set(), f);
    return total;
}

int cmd_ssd_decompose(Session &s, const std::string &file, const std::string &verify)
{
    Report r = s.make_report("ssd-decompose");
    const Kernel k = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(file)); });
    const double limit = reconstruction_tolerance(s.tol(), kernel_norm(k));

    if (!verify.empty()) {
        const Json source = s.read_json(verify);
        const auto families = families_from_json(artifact(source, "families", verify),
                                                 k.set(), k.descriptor(),
                                                 "/artifacts/families");
        const double err = s.timed(r, "verify", [&] {
            return max_entry_difference(sum_of_families(k, families), k);
        });
        r.verdict = err <= limit;
        r.artifacts = Json{{"verify", {{"reconstruction_error", err}, {"tolerance", limit}}}};
        return s.emit(r, *r.verdict ? kHolds : kFails);
    }

    const auto families = s.timed(r, "decompose", [&] {
        return sum_sq_diff_decomposition(k, s.tol());
    });
    const double err = s.timed(r, "reconstruct", [&] {
        return max_entry_difference(sum_of_families(k, families), k);
    });
    r.artifacts = Json{{"families", families_to_json(families, k.set())},
                       {"reconstruction_error", err},
                       {"reconstruction_tolerance", limit}};
    r.verdict = err <= limit;
    return s.emit(r, *r.verdict ? kHolds : kFails);
}

double max_distance(const CStarMetric &d)
{
    double m = 0.0;
    for (const auto &v : d.values())
        m = std::max(m, op_norm(v));
    return m;
}

int cmd_embed(Session &s, const std::string &file, const std::string &base,
              const std::string &verify)
{
    Report r = s.make_report("embed");
    const CStarMetric d = s.timed(r, "parse", [&] { return metric_from_json(s.read_json(file)); });
    const double limit = reconstruction_tolerance(s.tol(), max_distance(d));

    if (!verify.empty()) {
        const Json source = s.read_json(verify);
        const auto points = embedding_points_from_json(artifact(source, "embedding", verify),
                                                       d.set(), d.descriptor(),
                                                       "/artifacts/embedding");
        const double err =
            s.timed(r, "verify", [&] { return embedding_distance_error(d, points); });
        r.verdict = err <= limit;
        r.artifacts = Json{{"verify", {{"distance_error", err}, {"tolerance", limit}}}};
        return s.emit(r, *r.verdict ? kHolds : kFails);
    }

    const Verdict v = s.timed(r, "check", [&] { return is_embeddable(d, s.tol()); });
    if (!v)
        return s.emit_verdict(r, v);
    const std::string bp = base_or_first(base, d.set());
    const EmbeddingResult e = s.timed(r, "embed", [&] { return embed(d, bp, s.tol()); });
    r.artifacts = Json{{"base_point", bp},
                       {"embedding", embedding_to_json(e, d.set())},
                       {"distance_tolerance", limit}};
    r.verdict = e.max_distance_error <= limit;
    return s.emit(r, *r.verdict ? kHolds : kFails);
}

int cmd_check_metric(Session &s, const std::string &file)
{
    Report r = s.make_report("check-metric");
    const CStarMetric d = s.timed(r, "parse", [&] { return metric_from_json(s.read_json(file)); });
    const Verdict v = s.timed(r, "check", [&] { return validate_metric(d, s.tol()); });
    return s.emit_verdict(r, v);
}

int cmd_majorize(Session &s, const std::string &k_file, const std::string &kp_file,
                 const std::string &base)
{
    Report r = s.make_report("majorize");
    const Kernel k = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(k_file)); });
    const Kernel kp = s.timed(r, "parse", [&] { return kernel_from_json(s.read_json(kp_file)); });
    const std::string bp = base_or_first(base, k.set());
    try {
        const MajorizationCertificate c = s.timed(r, "recover", [&] {
            return recover_contraction(k, kp, bp, s.tol());
        });
        const double limit = reconstruction_tolerance(s.tol(), kernel_norm(k));
        r.artifacts = Json{{"base_point", bp},
                           {"certificate", certificate_to_json(c)},
                           {"reconstruction_tolerance", limit}};
        r.verdict = c.norm_W <= 1.0 + std::sqrt(s.tol().tol_rel) &&
                    c.reconstruction_error <= limit;
        return s.emit(r, *r.verdict ? kHolds : kFails);
    } catch (const PreconditionError &e) {
        Verdict v = e.verdict();
        v.reason = e.what();
        return s.emit_verdict(r, v);
    }
}

int cmd_demo(Session &s, const std::string &name)
{
    if (name != "schur-counterexample")
        throw InputError("unknown demo '" + name + "' (available: schur-counterexample)");
    Report r = s.make_report("demo schur-counterexample");
    const Kernel a = std::get<Kernel>(fixture(name));
    const Kernel product = schur_product(a, a);
    const Verdict va = s.timed(r, "check", [&] {
        return is_conditionally_positive_definite(a, s.tol());
    });
    const Verdict vp = s.timed(r, "check", [&] {
        return is_conditionally_positive_definite(product, s.tol());
    });
    r.artifacts = Json{
        {"A", kernel_to_json(a)},
        {"A_verdict", verdict_to_json(va)},
        {"A_two_by_two", two_by_two_check(a(0, 0), a(0, 1), a(1, 1), s.tol())},
        {"product", kernel_to_json(product)},
        {"product_two_by_two",
         two_by_two_check(product(0, 0), product(0, 1), product(1, 1), s.tol())}};
    return s.emit_verdict(r, vp);
}

struct GenArgs {
    std::string kind;
    std::uint64_t seed = 0;
    std::size_t n = 4;
    std::vector<std::size_t> summands{1};
    std::size_t rank = 0;
    double magnitude = 1.0;
    std::string output;
    std::string output_prime;
};

void write_json_file(const std::string &path, const Json &doc)
{
    std::ofstream file(path);
    if (!file)
        throw InputError("cannot write '" + path + "'");
    file << doc.dump(2) << '\n';
}

int cmd_gen(Session &s, const GenArgs &g)
{
    Report r = s.make_report("gen " + g.kind);
    GenConfig cfg{g.seed, g.n, AlgebraDescriptor(g.summands), g.rank, g.magnitude};
    Json doc;
    std::string key = "kernel";
    s.timed(r, "generate", [&] {
        const auto names = fixture_names();
        if (std::find(names.begin(), names.end(), g.kind) != names.end()) {
            const Fixture f = fixture(g.kind);
            if (const auto *k = std::get_if<Kernel>(&f)) {
                doc = kernel_to_json(*k);
            } else {
                doc = metric_to_json(std::get<CStarMetric>(f));
                key = "metric";
            }
        } else if (g.kind == "gram") {
            doc = kernel_to_json(random_gram_kernel(cfg));
        } else if (g.kind == "cpd") {
            doc = kernel_to_json(random_cpd_kernel(cfg));
        } else if (g.kind == "cpd-zero-diag") {
            doc = kernel_to_json(random_cpd_kernel(cfg, true));
        } else if (g.kind == "non-cpd") {
            doc = kernel_to_json(random_non_cpd_kernel(cfg));
        } else if (g.kind == "hermitian") {
            doc = kernel_to_json(random_hermitian_kernel(cfg));
        } else if (g.kind == "metric") {
            doc = metric_to_json(random_metric(cfg));
            key = "metric";
        } else if (g.kind == "majorized-pair") {
            const MajorizedPair p = random_majorized_pair(cfg);
            doc = kernel_to_json(p.K);
            r.artifacts = Json{{"K", doc}, {"Kp", kernel_to_json(p.Kp)}};
            if (!g.output_prime.empty())
                write_json_file(g.output_prime, (*r.artifacts)["Kp"]);
            return;
        } else {
            throw InputError("unknown generator class '" + g.kind + "'");
        }
        r.artifacts = Json{{key, doc}};
    });
    if (!g.output.empty())
        write_json_file(g.output, doc);
    return s.emit(r, kHolds);
}

int cmd_fuzz(Session &s, std::size_t count, std::uint64_t seed)
{
    Report r = s.make_report("fuzz");
    std::size_t disagreements = 0;
    std::size_t cpd_instances = 0;
    double worst_roundtrip = 0.0;
    bool roundtrip_ok = true;
    const std::vector<std::vector<std::size_t>> algebras{{1}, {2}, {1, 2}, {3}, {2, 1, 1}};

    s.timed(r, "fuzz", [&] {
        for (std::size_t i = 0; i < count; ++i) {
            RandomStream rs(seed, "fuzz.shape", i);
            GenConfig cfg;
            cfg.seed = derive_seed(seed, {i});
            cfg.n = 2 + static_cast<std::size_t>(rs.uniform() * 5);
            cfg.descriptor = AlgebraDescriptor(
                algebras[static_cast<std::size_t>(rs.uniform() * algebras.size())]);
            cfg.rank = 1 + static_cast<std::size_t>(rs.uniform() * 3);
            const Kernel k = (i % 2 == 0) ? random_cpd_kernel(cfg)
                                          : random_non_cpd_kernel(cfg);
            const bool reference = is_conditionally_positive_definite(k, s.tol()).holds;
            for (std::size_t p = 0; p < k.size(); ++p) {
                const std::string &bp = k.set().label(p);
                if (is_positive_definite(shift_transform(k, bp), s.tol()).holds != reference)
                    ++disagreements;
                if (cond_positive_matrix_check(k, p, s.tol()).holds != reference)
                    ++disagreements;
            }
            if (!reference)
                continue;
            ++cpd_instances;
            const double err = max_entry_difference(
                reconstruct_cpd(decompose_cpd(k, k.set().label(0), s.tol())), k);
            worst_roundtrip = std::max(worst_roundtrip, err);
            if (err > reconstruction_tolerance(s.tol(), kernel_norm(k)))
                roundtrip_ok = false;
        }
    });
    r.artifacts = Json{{"instances", count},
                       {"cpd_instances", cpd_instances},
                       {"disagreements", disagreements},
                       {"max_roundtrip_error", worst_roundtrip}};
    r.verdict = disagreements == 0 && roundtrip_ok;
    return s.emit(r, *r.verdict ? kHolds : kFails);
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
            std::ostream &err)
{
    CLI::App app{"Conditionally positive definite kernels over finite-dimensional "
                 "C*-algebras"};
    app.require_subcommand(1);
    GlobalOptions opts;
    app.add_option("--tol", opts.tol.tol_rel, "relative positivity tolerance")
        ->capture_default_str();
    app.add_option("--rank-tol", opts.tol.rank_tol_rel, "relative rank tolerance")
        ->capture_default_str();
    app.add_option("--threads", opts.threads, "worker threads for per-summand work")
        ->check(CLI::PositiveNumber);
    app.add_flag("--timings", opts.timings, "include per-phase timings in the report");

    std::string file, file2, base, method = "compression", verify, demo_name;
    GenArgs gen;
    std::size_t fuzz_count = 50;
    std::uint64_t fuzz_seed = 0;

    auto *check_pd = app.add_subcommand("check-pd", "positive definiteness");
    check_pd->add_option("file", file, "kernel JSON ('-' for stdin)")->required();

    auto *check_cpd = app.add_subcommand("check-cpd", "conditional positive definiteness");
    check_cpd->add_option("file", file, "kernel JSON ('-' for stdin)")->required();
    check_cpd->add_option("--method", method, "compression | shift | corm")
        ->check(CLI::IsMember({"compression", "shift", "corm"}));
    check_cpd->add_option("--base-point", base, "base point label for shift / corm");

    auto *transform = app.add_subcommand("transform", "shift transform K -> L");
    transform->add_option("file", file)->required();
    transform->add_option("--base-point", base);

    auto *decompose = app.add_subcommand("decompose", "Kolmogorov decomposition");
    decompose->add_option("file", file)->required();
    decompose->add_option("--base-point", base);
    decompose->add_option("--verify", verify, "check the decomposition in a report");

    auto *ssd = app.add_subcommand("ssd-decompose", "sum of squared differences");
    ssd->add_option("file", file)->required();
    ssd->add_option("--verify", verify, "check the families in a report");

    auto *embed_cmd = app.add_subcommand("embed", "C*-isometric embedding of a metric");
    embed_cmd->add_option("file", file, "metric JSON")->required();
    embed_cmd->add_option("--base-point", base);
    embed_cmd->add_option("--verify", verify, "check the embedding in a report");

    auto *check_metric = app.add_subcommand("check-metric", "C*-metric axioms");
    check_metric->add_option("file", file, "metric JSON")->required();

    auto *majorize = app.add_subcommand("majorize", "recover the contraction for K' <= K");
    majorize->add_option("kernel", file, "K")->required();
    majorize->add_option("dominated", file2, "K'")->required();
    majorize->add_option("--base-point", base);

    auto *demo = app.add_subcommand("demo", "worked examples");
    demo->add_option("name", demo_name, "schur-counterexample")->required();

    auto *gen_cmd = app.add_subcommand("gen", "generate an instance");
    gen_cmd->add_option("class", gen.kind,
                        "gram | cpd | cpd-zero-diag | non-cpd | hermitian | metric | "
                        "majorized-pair | fixture name")
        ->required();
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--n", gen.n);
    gen_cmd->add_option("--summands", gen.summands, "block sizes, e.g. 1,2")
        ->delimiter(',');
    gen_cmd->add_option("--rank", gen.rank);
    gen_cmd->add_option("--magnitude", gen.magnitude);
    gen_cmd->add_option("-o,--output", gen.output, "also write the document to a file");
    gen_cmd->add_option("--output-prime", gen.output_prime,
                        "majorized-pair: write K' to a file");

    auto *fuzz = app.add_subcommand("fuzz", "random equivalence and roundtrip checks");
    fuzz->add_option("--count", fuzz_count);
    fuzz->add_option("--seed", fuzz_seed);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kHolds : kInputError;
    }

    try {
        opts.tol.validate();
        set_summand_threads(opts.threads);
        Session s(opts, in, out);
        if (*check_pd)
            return cmd_check_pd(s, file);
        if (*check_cpd)
            return cmd_check_cpd(s, file, method, base);
        if (*transform)
            return cmd_transform(s, file, base);
        if (*decompose)
            return cmd_decompose(s, file, base, verify);
        if (*ssd)
            return cmd_ssd_decompose(s, file, verify);
        if (*embed_cmd)
            return cmd_embed(s, file, base, verify);
        if (*check_metric)
            return cmd_check_metric(s, file);
        if (*majorize)
            return cmd_majorize(s, file, file2, base);
        if (*demo)
            return cmd_demo(s, demo_name);
        if (*gen_cmd)
            return cmd_gen(s, gen);
        if (*fuzz)
            return cmd_fuzz(s, fuzz_count, fuzz_seed);
    } catch (const PreconditionError &e) {
        // Commands check their preconditions up front; this covers the rest.
        Report r;
        r.command = args.front();
        r.tolerances = opts.tol;
        r.verdict = false;
        Verdict v = e.verdict();
        v.reason = e.what();
        r.witness = verdict_to_json(v);
        out << r.to_json(opts.timings).dump(2) << '\n';
        return kFails;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace cpdk
