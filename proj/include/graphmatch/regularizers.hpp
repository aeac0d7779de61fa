#pragma once

#include <graphmatch/matrix.hpp>

#include <string>
#include <string_view>
#include <variant>

namespace gm {

/// W_ij = 1/(X_ij + epsilon) for a feasible iterate X. Entries land in
/// (0, 1/epsilon]. Throws std::invalid_argument if epsilon <= 0 or an entry
/// of X is below -1e-12.
Matrix weights_from_iterate(const Matrix& X, double epsilon);

/// Smallest lambda certified by the equivalence theorem for an iterate
/// within Frobenius distance a of the optimal vertex:
/// 2*(a+eps)*(1-a+eps)/(1-2a) * L. Requires a in [0, 1/2).
double lambda_threshold(double a, double epsilon, double lipschitz);

enum class RegularizerKind { LinearReweighted, Lp, Quartic };

/// Which regularizer a solve should run; `p` applies to Lp only.
struct RegularizerChoice {
    RegularizerKind kind = RegularizerKind::LinearReweighted;
    double p = 0.5;
};

std::string to_string(const RegularizerChoice& c);
/// Parses "linear", "quartic", "lp<value>" (e.g. "lp0.75"), or "lp".
RegularizerChoice parse_regularizer(std::string_view name);

/// A concrete sparsity term h(X) with value and gradient:
///   linear reweighted  h(X) = sum_ij W_ij X_ij          grad = W
///   Lp                 h(X) = sum_ij (X_ij + eps)^p     grad = p*(X+eps)^(p-1)
///   quartic            h(X) = ||X .* (1 - X)||_F^2      grad = 2X(1-X)(1-2X)
/// Linear weights must be strictly positive; Lp needs p in (0,1) and eps > 0
/// (the gradient is unbounded at a zero entry otherwise).
class Regularizer {
public:
    struct LinearReweighted {
        Matrix W;
    };
    struct LpNorm {
        double p;
        double epsilon;
    };
    struct Quartic {};

    static Regularizer linear_reweighted(Matrix W);
    static Regularizer lp(double p, double epsilon);
    static Regularizer quartic();

    double value(const Matrix& X) const;
    Matrix gradient(const Matrix& X) const;

    RegularizerKind kind() const;
    const Matrix* weights() const;  // nullptr unless linear reweighted

private:
    explicit Regularizer(std::variant<LinearReweighted, LpNorm, Quartic> v) : v_(std::move(v)) {}
    std::variant<LinearReweighted, LpNorm, Quartic> v_;
};

}  // namespace gm
