#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trajpred::svr {

/// Hyperparameters of the epsilon-insensitive RBF regression.
///
/// `epsilon` is expressed in normalized target units (targets are scaled to
/// zero mean and unit standard deviation per training window).
struct SvrParams {
    double c = 100.0;
    double epsilon = 0.01;
    double gamma = 0.1;
    double tolerance = 1e-4;        // maximal KKT violation accepted at convergence
    std::size_t max_passes = 100000;  // cap on pair updates

    void validate() const;
};

/// Affine map to zero mean / unit scale. A zero spread maps to scale 1.
struct Scaler {
    double mean = 0.0;
    double scale = 1.0;

    static Scaler fit(std::span<const double> values);
    double forward(double v) const { return (v - mean) / scale; }
    double inverse(double z) const { return mean + scale * z; }
};

struct SolverStats {
    std::size_t iterations = 0;
    double kkt_violation = 0.0;  // max lower bound minus min upper bound on the bias
    double objective = 0.0;      // dual objective, minimization form
};

/// Trained model. betas[i] = alpha_i - alpha_i*, so |beta_i| <= C and
/// sum(beta) = 0. The primal weight vector is never materialized.
struct SvrModel {
    std::vector<double> betas;
    double bias = 0.0;             // normalized units
    std::vector<double> inputs;    // normalized training times
    SvrParams params;
    Scaler input_scaler;
    Scaler target_scaler;
    SolverStats stats;

    /// f(z) = sum_i beta_i K(z_i, z) + b on normalized input z.
    double decision(double z) const;
};

/// exp(-gamma * ||a - b||^2). Throws ValidationError on dimension mismatch.
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);
double rbf_kernel(double a, double b, double gamma);

/// 1/2 beta' K beta + eps * sum|beta| - y' beta on normalized data.
double dual_objective(std::span<const double> betas, std::span<const double> inputs,
                      std::span<const double> targets, const SvrParams& params);

/// Bias-free optimality gap of `betas`, recomputed from scratch:
/// max over samples of the lower bound the KKT conditions place on b minus
/// the minimum upper bound. Non-positive at an exact optimum.
double kkt_violation(std::span<const double> betas, std::span<const double> inputs,
                     std::span<const double> targets, const SvrParams& params);

/// Largest violation of the per-sample KKT conditions of `model` (including
/// its bias) on its raw training data, in normalized target units.
double kkt_residual(const SvrModel& model, std::span<const double> times, std::span<const double> values);

/// Trains on (time, value) pairs. Times and values are normalized first; the
/// dual is solved by pairwise updates on the maximal violating pair, each
/// solved exactly on the box [-C, C] with sum(beta) preserved.
///
/// When `objective_log` is given the dual objective after every update is
/// appended to it. Throws ConvergenceError if max_passes runs out with a
/// violation above 10 * tolerance.
SvrModel svr_train(std::span<const double> times, std::span<const double> values, const SvrParams& params,
                   std::vector<double>* objective_log = nullptr);

/// Prediction at raw time t in raw value units.
double svr_predict(const SvrModel& model, double t);

}  // namespace trajpred::svr
