#include <graphmatch/regularizers.hpp>

#include <graphmatch/trace.hpp>

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace gm {

namespace {

constexpr double kFeasibilitySlack = 1e-12;

void require_nonnegative_iterate(const Matrix& X, const char* what) {
    if ((X.array() < -kFeasibilitySlack).any())
        throw std::invalid_argument(std::string(what) + ": iterate has an entry below -1e-12 (infeasible)");
}

}  // namespace

Matrix weights_from_iterate(const Matrix& X, double epsilon) {
    require_square(X, "weights_from_iterate");
    if (!(epsilon > 0.0)) throw std::invalid_argument("weights_from_iterate: epsilon must be > 0");
    require_nonnegative_iterate(X, "weights_from_iterate");
    // Entries in (-1e-12, 0) are treated as exact zeros so W stays in (0, 1/eps].
    return (X.array().max(0.0) + epsilon).inverse().matrix();
}

double lambda_threshold(double a, double epsilon, double lipschitz) {
    if (!(a >= 0.0 && a < 0.5)) throw std::invalid_argument("lambda_threshold: a must lie in [0, 1/2)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("lambda_threshold: epsilon must be > 0");
    return 2.0 * (a + epsilon) * (1.0 - a + epsilon) / (1.0 - 2.0 * a) * lipschitz;
}

std::string to_string(const RegularizerChoice& c) {
    switch (c.kind) {
        case RegularizerKind::LinearReweighted: return "linear";
        case RegularizerKind::Quartic: return "quartic";
        case RegularizerKind::Lp: return "lp" + format_double(c.p);
    }
    return "unknown";
}

RegularizerChoice parse_regularizer(std::string_view name) {
    if (name == "linear") return {RegularizerKind::LinearReweighted, 0.5};
    if (name == "quartic") return {RegularizerKind::Quartic, 0.5};
    if (name.substr(0, 2) == "lp") {
        RegularizerChoice c{RegularizerKind::Lp, 0.5};
        if (name.size() > 2) {
            const auto res = std::from_chars(name.data() + 2, name.data() + name.size(), c.p);
            if (res.ec != std::errc() || res.ptr != name.data() + name.size())
                throw std::invalid_argument("regularizer: cannot parse exponent in '" + std::string(name) + "'");
        }
        if (!(c.p > 0.0 && c.p < 1.0)) throw std::invalid_argument("regularizer: Lp exponent must lie in (0,1)");
        return c;
    }
    throw std::invalid_argument("regularizer: unknown name '" + std::string(name) + "' (expected linear, lp<p>, quartic)");
}

Regularizer Regularizer::linear_reweighted(Matrix W) {
    require_square(W, "Regularizer::linear_reweighted");
    if (!(W.array() > 0.0).all())
        throw std::invalid_argument("Regularizer::linear_reweighted: weights must be strictly positive");
    return Regularizer(std::variant<LinearReweighted, LpNorm, Quartic>(LinearReweighted{std::move(W)}));
}

Regularizer Regularizer::lp(double p, double epsilon) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Regularizer::lp: p must lie in (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("Regularizer::lp: epsilon must be > 0");
    return Regularizer(std::variant<LinearReweighted, LpNorm, Quartic>(LpNorm{p, epsilon}));
}

Regularizer Regularizer::quartic() { return Regularizer(std::variant<LinearReweighted, LpNorm, Quartic>(Quartic{})); }

double Regularizer::value(const Matrix& X) const {
    require_square(X, "Regularizer::value");
    if (const auto* lin = std::get_if<LinearReweighted>(&v_)) {
        require_same_order(lin->W, X, "Regularizer::value");
        return lin->W.cwiseProduct(X).sum();
    }
    if (const auto* lp = std::get_if<LpNorm>(&v_)) {
        require_nonnegative_iterate(X, "Regularizer::value (Lp)");
        return (X.array().max(0.0) + lp->epsilon).pow(lp->p).sum();
    }
    return X.cwiseProduct(Matrix::Ones(X.rows(), X.cols()) - X).squaredNorm();
}

Matrix Regularizer::gradient(const Matrix& X) const {
    require_square(X, "Regularizer::gradient");
    if (const auto* lin = std::get_if<LinearReweighted>(&v_)) {
        require_same_order(lin->W, X, "Regularizer::gradient");
        return lin->W;
    }
    if (const auto* lp = std::get_if<LpNorm>(&v_)) {
        require_nonnegative_iterate(X, "Regularizer::gradient (Lp)");
        return (lp->p * (X.array().max(0.0) + lp->epsilon).pow(lp->p - 1.0)).matrix();
    }
    const auto x = X.array();
    return (2.0 * x * (1.0 - x) * (1.0 - 2.0 * x)).matrix();
}

RegularizerKind Regularizer::kind() const {
    if (std::holds_alternative<LinearReweighted>(v_)) return RegularizerKind::LinearReweighted;
    if (std::holds_alternative<LpNorm>(v_)) return RegularizerKind::Lp;
    return RegularizerKind::Quartic;
}

const Matrix* Regularizer::weights() const {
    if (const auto* lin = std::get_if<LinearReweighted>(&v_)) return &lin->W;
    return nullptr;
}

}  // namespace gm
