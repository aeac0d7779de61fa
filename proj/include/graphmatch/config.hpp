#pragma once

#include <stdexcept>
#include <string>

namespace gm {

/// Hyperparameters of the reweighted outer loop, the projected-gradient
/// inner loop and its nonmonotone line search, and the stopping rules.
/// epsilon0 = 1, epsilon_min = 1e-3, lambda_max = 1e6 and gamma = 0.9 are
/// the reference experimental settings; lambda0 and tau_inner have no
/// published value and default as below.
struct SolverConfig {
    double lambda0 = 1e-2;         // initial regularization weight, >= 0
    double epsilon0 = 1.0;         // initial reweighting offset, > 0
    double gamma = 0.9;            // additive lambda increment, in (0,1)
    double delta_ls = 0.5;         // line-search backtracking factor, in (0,1)
    double delta_eps = 0.5;        // epsilon shrink factor, in (0,1)
    double theta = 1e-4;           // sufficient-decrease parameter, in (0,1)
    double eta = 0.85;             // nonmonotone reference mixing, in (0,1)
    double tau_inner = 1e-6;       // inner stop: ||X_i - X_{i-1}||_F / sqrt(n) <= tau_inner
    double tau_sparsity = 0.5;     // outer stop: nnz(X) <= n + tau_sparsity
    double epsilon_min = 1e-3;     // epsilon floor, > 0
    double lambda_max = 1e6;       // lambda cap
    double zero_threshold = 1e-6;  // entry-counting cutoff for nnz
    int max_outer = 500;
    int max_inner = 500;
    int max_backtracks = 60;       // line-search trials before flagging a stall
    double alpha_min = 1e-10;      // spectral step clamps
    double alpha_max = 1e10;
    double proj_tol = 1e-8;        // projection dual-gradient tolerance (scaled by sqrt(n))
    int proj_max_iter = 50000;
    double time_budget_s = 0.0;    // wall-clock budget; 0 disables

    /// Throws std::invalid_argument on any out-of-range field.
    void validate() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument("SolverConfig: " + msg); };
        if (!(lambda0 >= 0.0)) fail("lambda0 must be >= 0");
        if (!(epsilon0 > 0.0)) fail("epsilon0 must be > 0");
        if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must be in (0,1)");
        if (!(delta_ls > 0.0 && delta_ls < 1.0)) fail("delta_ls must be in (0,1)");
        if (!(delta_eps > 0.0 && delta_eps < 1.0)) fail("delta_eps must be in (0,1)");
        if (!(theta > 0.0 && theta < 1.0)) fail("theta must be in (0,1)");
        if (!(eta > 0.0 && eta < 1.0)) fail("eta must be in (0,1)");
        if (!(tau_inner > 0.0)) fail("tau_inner must be > 0");
        if (!(tau_sparsity >= 0.0)) fail("tau_sparsity must be >= 0");
        if (!(epsilon_min > 0.0)) fail("epsilon_min must be > 0");
        if (!(epsilon_min <= epsilon0)) fail("epsilon_min must be <= epsilon0");
        if (!(lambda_max > 0.0)) fail("lambda_max must be > 0");
        if (!(lambda0 <= lambda_max)) fail("lambda0 must be <= lambda_max");
        if (!(zero_threshold > 0.0)) fail("zero_threshold must be > 0");
        if (max_outer < 1) fail("max_outer must be >= 1");
        if (max_inner < 1) fail("max_inner must be >= 1");
        if (max_backtracks < 0) fail("max_backtracks must be >= 0");
        if (!(alpha_min > 0.0)) fail("alpha_min must be > 0");
        if (!(alpha_max >= alpha_min)) fail("alpha_max must be >= alpha_min");
        if (!(proj_tol > 0.0)) fail("proj_tol must be > 0");
        if (proj_max_iter < 1) fail("proj_max_iter must be >= 1");
        if (!(time_budget_s >= 0.0)) fail("time_budget_s must be >= 0");
    }
};

}  // namespace gm
