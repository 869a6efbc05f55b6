#include "qkm/learners.hpp"

#include "qkm/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace qkm {

namespace {

void check_square(const Eigen::MatrixXd& k, Eigen::Index n)
{
    if (k.rows() != k.cols()) {
        throw ConfigError("Gram matrix must be square");
    }
    if (k.rows() != n) {
        throw ConfigError("Gram matrix size does not match the target vector");
    }
}

double smallest_eigenvalue(const Eigen::MatrixXd& k)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

RegressionModel krr_fit(const Eigen::MatrixXd& gram, const Eigen::VectorXd& targets, double lambda)
{
    check_square(gram, targets.size());
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("ridge strength must be finite and >= 0");
    }
    const Eigen::Index n = gram.rows();
    const Eigen::MatrixXd system = gram + lambda * Eigen::MatrixXd::Identity(n, n);

    if (lambda == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (lo <= 1e-12 * std::max(hi, 1.0)) {
            throw SingularSystemError("Gram matrix is rank deficient; lambda = 0 refused (smallest eigenvalue " +
                                          format_double(lo) + ")",
                                      lo);
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) {
        const double lo = smallest_eigenvalue(gram);
        throw SingularSystemError("K + lambda I is not positive definite (smallest eigenvalue of K " +
                                      format_double(lo) + ", lambda " + format_double(lambda) + ")",
                                  lo);
    }

    const double target = kKrrResidualTolerance * targets.norm();
    Eigen::VectorXd alphas = llt.solve(targets);
    Eigen::VectorXd r = targets - system * alphas;
    // refinement against the same factorization
    for (int iter = 0; iter < 20 && r.norm() > 0.1 * target; ++iter) {
        const Eigen::VectorXd step = llt.solve(r);
        const Eigen::VectorXd trial = alphas + step;
        const Eigen::VectorXd r_trial = targets - system * trial;
        if (!(r_trial.norm() < r.norm())) {
            break;
        }
        alphas = trial;
        r = r_trial;
    }

    if (!alphas.allFinite() || r.norm() > target) {
        const double lo = smallest_eigenvalue(gram);
        throw SingularSystemError("ridge solve residual " + format_double(r.norm()) + " exceeds " +
                                      format_double(target) + " (smallest eigenvalue of K " + format_double(lo) +
                                      ")",
                                  lo);
    }

    RegressionModel model;
    model.alphas = std::move(alphas);
    model.lambda = lambda;
    model.targets = targets;
    model.residual = r.norm();
    return model;
}

RegressionModel krr_fit(const GramMatrix& gram, const Eigen::VectorXd& targets, double lambda)
{
    RegressionModel model = krr_fit(gram.entries, targets, lambda);
    model.train_points = gram.points;
    return model;
}

double krr_predict(const RegressionModel& model, const Eigen::VectorXd& kvec)
{
    if (kvec.size() != model.alphas.size()) {
        throw ConfigError("kernel vector length does not match the training set");
    }
    return model.alphas.dot(kvec);
}

Eigen::VectorXd krr_predict(const RegressionModel& model, const Eigen::MatrixXd& kernel_rows)
{
    if (kernel_rows.cols() != model.alphas.size()) {
        throw ConfigError("kernel rows do not match the training set");
    }
    return kernel_rows * model.alphas;
}

std::vector<double> default_lambda_grid()
{
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) {
        grid.push_back(std::pow(10.0, -8.0 + 0.5 * i));
    }
    return grid;
}

LambdaScan select_lambda(const Eigen::MatrixXd& gram, const Eigen::VectorXd& targets,
                         const Eigen::MatrixXd& eval_kernel_rows, const Eigen::VectorXd& eval_targets,
                         std::span<const double> grid)
{
    if (grid.empty()) {
        throw ConfigError("lambda grid is empty");
    }
    if (eval_kernel_rows.rows() != eval_targets.size()) {
        throw ConfigError("evaluation kernel rows and targets differ in length");
    }
    LambdaScan scan;
    bool found = false;
    std::optional<SingularSystemError> last_error;
    for (double lambda : grid) {
        LambdaResult row;
        row.lambda = lambda;
        try {
            const RegressionModel model = krr_fit(gram, targets, lambda);
            row.mse = mse(krr_predict(model, eval_kernel_rows), eval_targets);
            row.ok = true;
        } catch (const SingularSystemError& e) {
            row.error = e.what();
            row.mse = std::numeric_limits<double>::quiet_NaN();
            last_error = e;
        }
        if (row.ok) {
            const bool better = !found || row.mse < scan.best_mse ||
                                (row.mse == scan.best_mse && lambda > scan.best_lambda);
            if (better) {
                scan.best_mse = row.mse;
                scan.best_lambda = lambda;
                found = true;
            }
        }
        scan.table.push_back(std::move(row));
    }
    if (!found) {
        throw *last_error;
    }
    return scan;
}

// ---------------------------------------------------------------------------

double svm_dual_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& alphas)
{
    const Eigen::VectorXd ya = labels.cwiseProduct(alphas);
    return alphas.sum() - 0.5 * ya.dot(gram * ya);
}

double svm_kkt_violation(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const Eigen::VectorXd& alphas,
                         double c_cap)
{
    const Eigen::VectorXd ya = labels.cwiseProduct(alphas);
    // G = Q alpha - e, Q_ij = y_i y_j K_ij
    const Eigen::VectorXd grad = labels.cwiseProduct(gram * ya) - Eigen::VectorXd::Ones(alphas.size());
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < alphas.size(); ++t) {
        const double v = -labels(t) * grad(t);
        const bool in_up = (labels(t) > 0 && alphas(t) < c_cap) || (labels(t) < 0 && alphas(t) > 0);
        const bool in_low = (labels(t) > 0 && alphas(t) > 0) || (labels(t) < 0 && alphas(t) < c_cap);
        if (in_up) {
            up = std::max(up, v);
        }
        if (in_low) {
            low = std::min(low, v);
        }
    }
    return std::max(0.0, up - low);
}

SvmModel svm_fit(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const SvmOptions& options)
{
    const Eigen::Index n = labels.size();
    check_square(gram, n);
    if (!(options.c_cap > 0.0)) {
        throw ConfigError("SVM box bound must be positive");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels(i) == 1.0) {
            has_pos = true;
        } else if (labels(i) == -1.0) {
            has_neg = true;
        } else {
            throw ConfigError("SVM labels must be -1 or +1");
        }
    }
    if (!has_pos || !has_neg) {
        throw ConfigError("SVM training needs both classes");
    }

    const double cap = options.c_cap;
    constexpr double kTau = 1e-12;
    const Eigen::VectorXd diag = gram.diagonal();

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad = -Eigen::VectorXd::Ones(n);  // G = Q alpha - e

    auto objective = [&] { return -0.5 * alpha.dot(grad - Eigen::VectorXd::Ones(n)); };
    auto is_up = [&](Eigen::Index t) {
        return (labels(t) > 0 && alpha(t) < cap) || (labels(t) < 0 && alpha(t) > 0);
    };
    auto is_low = [&](Eigen::Index t) {
        return (labels(t) > 0 && alpha(t) > 0) || (labels(t) < 0 && alpha(t) < cap);
    };

    SvmModel model;
    long iter = 0;
    double violation = 0.0;
    for (;;) {
        // first index: maximal violating -y G over I_up
        Eigen::Index i = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = -labels(t) * grad(t);
            if (is_up(t) && v >= gmax) {
                gmax = v;
                i = t;
            }
            if (is_low(t)) {
                gmin = std::min(gmin, v);
            }
        }
        violation = gmax - gmin;
        if (i < 0 || violation < options.tolerance) {
            break;
        }
        if (iter >= options.max_iterations) {
            throw NonConvergenceError("SMO did not converge in " + std::to_string(options.max_iterations) +
                                          " iterations (max KKT violation " + format_double(violation) + ")",
                                      violation);
        }

        // second index: largest second-order gain over I_low
        Eigen::Index j = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            if (!is_low(t)) {
                continue;
            }
            const double b = gmax + labels(t) * grad(t);
            if (b <= 0.0) {
                continue;
            }
            double a = diag(i) + diag(t) - 2.0 * gram(i, t);
            if (a <= 0.0) {
                a = kTau;
            }
            const double gain = -(b * b) / a;
            if (gain <= best) {
                best = gain;
                j = t;
            }
        }
        if (j < 0) {
            break;
        }

        const double ai_old = alpha(i);
        const double aj_old = alpha(j);
        const double qij = labels(i) * labels(j) * gram(i, j);
        if (labels(i) != labels(j)) {
            double quad = diag(i) + diag(j) + 2.0 * qij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (-grad(i) - grad(j)) / quad;
            const double diff = alpha(i) - alpha(j);
            alpha(i) += delta;
            alpha(j) += delta;
            if (diff > 0.0) {
                if (alpha(j) < 0.0) {
                    alpha(j) = 0.0;
                    alpha(i) = diff;
                }
            } else if (alpha(i) < 0.0) {
                alpha(i) = 0.0;
                alpha(j) = -diff;
            }
            if (diff > 0.0) {
                if (alpha(i) > cap) {
                    alpha(i) = cap;
                    alpha(j) = cap - diff;
                }
            } else if (alpha(j) > cap) {
                alpha(j) = cap;
                alpha(i) = cap + diff;
            }
        } else {
            double quad = diag(i) + diag(j) - 2.0 * qij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (grad(i) - grad(j)) / quad;
            const double sum = alpha(i) + alpha(j);
            alpha(i) -= delta;
            alpha(j) += delta;
            if (sum > cap) {
                if (alpha(i) > cap) {
                    alpha(i) = cap;
                    alpha(j) = sum - cap;
                }
            } else if (alpha(j) < 0.0) {
                alpha(j) = 0.0;
                alpha(i) = sum;
            }
            if (sum > cap) {
                if (alpha(j) > cap) {
                    alpha(j) = cap;
                    alpha(i) = sum - cap;
                }
            } else if (alpha(i) < 0.0) {
                alpha(i) = 0.0;
                alpha(j) = sum;
            }
        }

        const double dai = alpha(i) - ai_old;
        const double daj = alpha(j) - aj_old;
        for (Eigen::Index t = 0; t < n; ++t) {
            grad(t) += labels(t) * (labels(i) * gram(t, i) * dai + labels(j) * gram(t, j) * daj);
        }

        ++iter;
        if (iter % n == 0) {
            model.objective_trace.push_back(objective());
        }
    }

    // Polish: with the bound set fixed, the free alphas and the threshold solve
    // a linear KKT system. On ill-conditioned kernels the SMO stop leaves a dual
    // gap of order violation * sum(alpha); the direct solve closes it. Kept only
    // when it stays strictly inside the box and improves both criteria.
    std::optional<double> polished_rho;
    {
        std::vector<Eigen::Index> free;
        for (Eigen::Index t = 0; t < n; ++t) {
            if (alpha(t) > 0.0 && alpha(t) < cap) {
                free.push_back(t);
            }
        }
        const auto m = static_cast<Eigen::Index>(free.size());
        if (m > 0) {
            Eigen::VectorXd fixed_ya = labels.cwiseProduct(alpha);
            for (Eigen::Index t : free) {
                fixed_ya(t) = 0.0;
            }
            const Eigen::VectorXd k_fixed = gram * fixed_ya;
            // [Q_FF  -y_F; y_F^T 0] [alpha_F; rho] = [1 - y_F (K fixed_ya)_F; -y^T fixed_alpha]
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
            Eigen::VectorXd rhs(m + 1);
            for (Eigen::Index r = 0; r < m; ++r) {
                const Eigen::Index fr = free[static_cast<std::size_t>(r)];
                for (Eigen::Index c = 0; c < m; ++c) {
                    const Eigen::Index fc = free[static_cast<std::size_t>(c)];
                    a(r, c) = labels(fr) * labels(fc) * gram(fr, fc);
                }
                a(r, m) = -labels(fr);
                a(m, r) = labels(fr);
                rhs(r) = 1.0 - labels(fr) * k_fixed(fr);
            }
            rhs(m) = -fixed_ya.sum();
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (lu.isInvertible()) {
                Eigen::VectorXd sol = lu.solve(rhs);
                for (int it = 0; it < 2; ++it) {
                    sol += lu.solve(Eigen::VectorXd(rhs - a * sol));
                }
                Eigen::VectorXd trial = alpha;
                bool inside = sol.allFinite();
                for (Eigen::Index r = 0; r < m && inside; ++r) {
                    const double v = sol(r);
                    inside = v > 0.0 && v < cap;
                    trial(free[static_cast<std::size_t>(r)]) = v;
                }
                if (inside) {
                    const double trial_violation = svm_kkt_violation(gram, labels, trial, cap);
                    const Eigen::VectorXd trial_grad =
                        labels.cwiseProduct(gram * labels.cwiseProduct(trial)) - Eigen::VectorXd::Ones(n);
                    const double trial_obj = -0.5 * trial.dot(trial_grad - Eigen::VectorXd::Ones(n));
                    if (trial_violation <= violation && trial_obj >= objective()) {
                        alpha = trial;
                        grad = trial_grad;
                        violation = trial_violation;
                        polished_rho = sol(m);
                    }
                }
            }
        }
    }
    model.objective_trace.push_back(objective());

    // bias from the free vectors, else the midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    long nr_free = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double yg = labels(t) * grad(t);
        if (alpha(t) >= cap) {
            if (labels(t) < 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (alpha(t) <= 0.0) {
            if (labels(t) > 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++nr_free;
            sum_free += yg;
        }
    }
    double rho = nr_free > 0 ? sum_free / static_cast<double>(nr_free) : 0.5 * (ub + lb);
    if (polished_rho) {
        rho = *polished_rho;
    }

    model.alphas = alpha;
    model.bias = -rho;
    model.labels = labels;
    model.c_cap = cap;
    model.max_violation = std::max(0.0, violation);
    model.iterations = iter;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 0.0) {
            model.support_indices.push_back(t);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    model.min_eigenvalue = es.eigenvalues().minCoeff();
    model.max_eigenvalue = es.eigenvalues().maxCoeff();
    if (model.min_eigenvalue <= options.singular_ratio * model.max_eigenvalue) {
        model.warning = "kernel matrix is numerically singular (eigenvalue range [" +
                        format_double(model.min_eigenvalue) + ", " + format_double(model.max_eigenvalue) +
                        "]); the solution may be unreliable";
    }
    return model;
}

double svm_decision(const SvmModel& model, const Eigen::VectorXd& kvec)
{
    if (kvec.size() != model.alphas.size()) {
        throw ConfigError("kernel vector length does not match the training set");
    }
    return model.labels.cwiseProduct(model.alphas).dot(kvec) + model.bias;
}

Eigen::VectorXd svm_decision(const SvmModel& model, const Eigen::MatrixXd& kernel_rows)
{
    if (kernel_rows.cols() != model.alphas.size()) {
        throw ConfigError("kernel rows do not match the training set");
    }
    return (kernel_rows * model.labels.cwiseProduct(model.alphas)).array() + model.bias;
}

// ---------------------------------------------------------------------------

double mse(std::span<const double> predicted, std::span<const double> truth)
{
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw ConfigError("mse needs two nonempty vectors of equal length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - truth[i];
        s += d * d;
    }
    return s / static_cast<double>(predicted.size());
}

double mse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth)
{
    return mse(std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())),
               std::span<const double>(truth.data(), static_cast<std::size_t>(truth.size())));
}

double hinge_loss(std::span<const double> decisions, std::span<const double> labels)
{
    if (decisions.size() != labels.size() || decisions.empty()) {
        throw ConfigError("hinge loss needs two nonempty vectors of equal length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        s += std::max(1.0 - decisions[i] * labels[i], 0.0);
    }
    return s / static_cast<double>(decisions.size());
}

double hinge_loss(const Eigen::VectorXd& decisions, const Eigen::VectorXd& labels)
{
    return hinge_loss(std::span<const double>(decisions.data(), static_cast<std::size_t>(decisions.size())),
                      std::span<const double>(labels.data(), static_cast<std::size_t>(labels.size())));
}

} // namespace qkm
