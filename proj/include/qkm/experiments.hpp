// experiments.hpp
// The end-to-end pipelines behind each CLI subcommand. Each run_* computes
// results; each render_* turns them into the files the CLI writes. Rendering
// is a pure function of the config and the results, so reruns of the same
// config produce identical bytes.

#pragma once

#include "qkm/config.hpp"
#include "qkm/datasets.hpp"
#include "qkm/learners.hpp"
#include "qkm/qkernel.hpp"

#include <string>
#include <vector>

namespace qkm {

struct Artifact {
    std::string filename;
    std::string contents;
};

// --- profile ---------------------------------------------------------------

struct ProfileRun {
    std::vector<double> taus;
    std::vector<double> deltas;
    std::vector<std::vector<double>> values;  // one column per tau
    std::vector<double> fwhm;
};

ProfileRun run_profile(const ExperimentConfig& cfg);
std::vector<Artifact> render_profile(const ExperimentConfig& cfg, const ProfileRun& run);

// --- mqspec ----------------------------------------------------------------

struct MqRun {
    std::vector<double> taus;
    std::vector<MqSpectrum> spectra;
};

MqRun run_mqspec(const ExperimentConfig& cfg);
std::vector<Artifact> render_mqspec(const ExperimentConfig& cfg, const MqRun& run);

// Largest |m| whose intensity exceeds `threshold`.
int max_populated_order(const MqSpectrum& spectrum, double threshold = 1e-6);

// --- regress ---------------------------------------------------------------

struct RegressTauResult {
    double tau = 0.0;
    int substeps = 1;
    LambdaScan scan;
    RegressionModel model;        // fitted at the selected lambda
    Eigen::VectorXd predictions;  // on the evaluation set
    double eval_mse = 0.0;
    int gram_rank = 0;
    bool degenerate = false;      // Gram numerically rank <= 1
};

struct RegressRun {
    LabeledSet train;                 // coordinates in the configured units
    std::vector<double> eval_x;       // configured units
    Eigen::VectorXd eval_truth;
    std::vector<RegressTauResult> per_tau;
};

RegressRun run_regress(const ExperimentConfig& cfg);
std::vector<Artifact> render_regress(const ExperimentConfig& cfg, const RegressRun& run);

// --- classify --------------------------------------------------------------

struct ClassifyTauResult {
    double tau = 0.0;
    int substeps = 1;
    SvmModel model;
    Eigen::VectorXd train_decisions;
    double hinge = 0.0;
    double accuracy = 0.0;
    Eigen::VectorXd grid_decisions;  // empty when grid_res = 0
};

struct ClassifyRun {
    LabeledSet raw;
    LabeledSet scaled;
    std::vector<DataPoint> grid;  // scaled coordinates, x1 fastest
    std::vector<ClassifyTauResult> per_tau;
};

ClassifyRun run_classify(const ExperimentConfig& cfg);
std::vector<Artifact> render_classify(const ExperimentConfig& cfg, const ClassifyRun& run);

// --- gram ------------------------------------------------------------------

GramMatrix run_gram(const ExperimentConfig& cfg);
std::vector<Artifact> render_gram(const ExperimentConfig& cfg, const GramMatrix& gram);

// ---------------------------------------------------------------------------

// Validates, dispatches on cfg.command, renders.
std::vector<Artifact> run_experiment(const ExperimentConfig& cfg);

// Writes each artifact under `dir` (created if needed).
void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts);

} // namespace qkm
