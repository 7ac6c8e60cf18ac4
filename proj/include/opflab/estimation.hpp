#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "opflab/opf.hpp"
#include "opflab/theories.hpp"

namespace opflab {

// Probe-by-feature table of ensemble outcome values.
struct FeatureDesign {
    std::vector<Ensemble> probes;
    std::vector<Opf> opfs;
    Eigen::MatrixXd matrix;  // matrix(p, x) = evaluate_ensemble(opfs[x], probes[p])
};
FeatureDesign make_design(const std::vector<Opf>& features, const std::vector<Ensemble>& probes);

// g ≈ Σ_x e_x f^x + c·u, fitted by least squares over the probe ensembles.
// residual is the max absolute error over the held-out probes; a
// rank-deficient design is flagged, never silently fitted away.
struct Reconstruction {
    Eigen::VectorXd coefficients;
    double constant = 0.0;
    double residual = 0.0;
    int design_rank = 0;
    bool full_rank = false;
};

using EnsembleEvaluator = std::function<double(const Ensemble&)>;
EnsembleEvaluator evaluator_of(const Opf& target);
// Affine extension of a pure-state rule: Σ_r p_r f(ψ_r).
EnsembleEvaluator pure_state_evaluator(std::function<double(const Ket&)> f);

Reconstruction affine_reconstruct(const std::vector<Opf>& features, const EnsembleEvaluator& target,
                                  const std::vector<Ensemble>& probes,
                                  const std::vector<Ensemble>& holdout);

// k = dim M_n^d − 1 (the unit completes the affine span); cross-validated by
// the numerical rank of a large random design before returning.
int estimability_dimension(int n, int d, std::uint64_t seed);

// dim M_n^d − 1 valid OPFs whose affine span with the unit is all of M_n^d.
std::vector<Opf> feature_basis(int d, int n);

// Ensembles of 1-3 Haar-random pure states; mixtures matter because the
// reconstruction quantifies over ensembles, not just pure states.
std::vector<Ensemble> random_probes(int d, int count, Rng& rng);

struct WitnessRow {
    int n;
    int feature_count;
    double residual;
};

// Fit the first contextual outcome against complete degree-n feature bases
// for n = 1..n_max. Residuals above threshold for every n witness the failure
// of finite estimability at those degrees; degrees beyond n_max are not
// desk-checkable and stay out of the report.
std::vector<WitnessRow> non_polynomial_witness(const ContextualMeasurement& basis, int n_max,
                                               int probe_count, std::uint64_t seed);

}  // namespace opflab
