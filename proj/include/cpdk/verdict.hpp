#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace cpdk {

/// Certificate of a failed positivity test: a unit vector v in summand
/// `summand` with v* M v = `eigenvalue` for the matrix M checked by the
/// operation that produced it.
struct Witness {
    std::size_t summand = 0;
    Eigen::VectorXcd vector;
    double eigenvalue = 0.0;
};

struct Verdict {
    bool holds = true;
    std::optional<Witness> witness;
    /// Human-readable reason on failure; empty when the property holds.
    std::string reason;

    static Verdict pass() { return Verdict{}; }
    static Verdict fail(std::string reason,
                        std::optional<Witness> witness = std::nullopt) {
        return Verdict{false, std::move(witness), std::move(reason)};
    }

    explicit operator bool() const noexcept { return holds; }
};

} // namespace cpdk
