// learners.hpp
// Kernel ridge regression and a hard-margin SVM trained by SMO, both working
// from a precomputed Gram matrix, plus the two quality metrics.

#pragma once

#include "qkm/qkernel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qkm {

// ---------------------------------------------------------------------------
// Kernel ridge regression: alphas solve (K + lambda I) alphas = y and the
// prediction at x is alphas^T k(x).
// ---------------------------------------------------------------------------

struct RegressionModel {
    Eigen::VectorXd alphas;
    double lambda = 0.0;
    std::vector<DataPoint> train_points;
    Eigen::VectorXd targets;
    double residual = 0.0;  // ||(K + lambda I) alphas - y||
};

// Cholesky solve with iterative refinement until the residual is at most
// 1e-8 ||y||. Throws SingularSystemError (carrying the smallest eigenvalue of K)
// when K + lambda I is not positive definite, when lambda = 0 and K is rank
// deficient, or when the residual target cannot be met.
RegressionModel krr_fit(const Eigen::MatrixXd& gram, const Eigen::VectorXd& targets, double lambda);
RegressionModel krr_fit(const GramMatrix& gram, const Eigen::VectorXd& targets, double lambda);

double krr_predict(const RegressionModel& model, const Eigen::VectorXd& kvec);

// One prediction per row of `kernel_rows` (rows are kernel vectors).
Eigen::VectorXd krr_predict(const RegressionModel& model, const Eigen::MatrixXd& kernel_rows);

inline constexpr double kKrrResidualTolerance = 1e-8;

struct LambdaResult {
    double lambda = 0.0;
    double mse = 0.0;
    bool ok = false;
    std::string error;
};

struct LambdaScan {
    double best_lambda = 0.0;
    double best_mse = 0.0;
    std::vector<LambdaResult> table;
};

// 17 values log-spaced over [1e-8, 1].
std::vector<double> default_lambda_grid();

// Fits at every lambda, scores each on the evaluation set, returns the argmin.
// Equal scores resolve toward the larger lambda. Singular fits are recorded
// and skipped; if every fit is singular the last SingularSystemError is
// rethrown.
LambdaScan select_lambda(const Eigen::MatrixXd& gram, const Eigen::VectorXd& targets,
                         const Eigen::MatrixXd& eval_kernel_rows, const Eigen::VectorXd& eval_targets,
                         std::span<const double> grid);

// ---------------------------------------------------------------------------
// Support vector machine
// ---------------------------------------------------------------------------

struct SvmOptions {
    double c_cap = 1e6;          // box bound standing in for the hard margin
    double tolerance = 1e-6;     // stop when the maximal KKT violation drops below
    long max_iterations = 10'000'000;
    double singular_ratio = 1e-10;  // warn when lambda_min <= ratio * lambda_max
};

struct SvmModel {
    Eigen::VectorXd alphas;
    double bias = 0.0;
    Eigen::VectorXd labels;
    std::vector<Eigen::Index> support_indices;
    double c_cap = 0.0;

    double max_violation = 0.0;
    long iterations = 0;
    // Dual objective sum(alpha) - 1/2 alpha^T Q alpha after every sweep of
    // N pair updates, plus the final value.
    std::vector<double> objective_trace;

    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    std::optional<std::string> warning;
};

// Sequential minimal optimization with second-order working-set selection.
// Requires labels in {-1, +1} with both classes present.
SvmModel svm_fit(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const SvmOptions& options = {});

// sum_i alpha_i y_i kvec_i + bias
double svm_decision(const SvmModel& model, const Eigen::VectorXd& kvec);
Eigen::VectorXd svm_decision(const SvmModel& model, const Eigen::MatrixXd& kernel_rows);

inline int classify(double decision)
{
    return decision >= 0.0 ? 1 : -1;
}

double svm_dual_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& alphas);

// Largest KKT gap max_{I_up} -y_i G_i - min_{I_low} -y_i G_i of a dual point.
double svm_kkt_violation(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& alphas,
                         double c_cap);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double mse(std::span<const double> predicted, std::span<const double> truth);
double mse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

// (1/N) sum max(1 - f_i y_i, 0)
double hinge_loss(std::span<const double> decisions, std::span<const double> labels);
double hinge_loss(const Eigen::VectorXd& decisions, const Eigen::VectorXd& labels);

} // namespace qkm
