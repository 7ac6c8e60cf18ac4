#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "opflab/tensor.hpp"

namespace opflab {

// Element of M_n^d: operator on (C^d)^{⊗n} with P_+ M P_+ = M within
// tolerances().support.
struct MnElement {
    int d;
    int n;
    Matrix mat;

    MnElement(int d, int n, Matrix m);
};

// Degree-n outcome probability function in operator form: f(ψ) =
// tr(F |ψ⟩⟨ψ|^{⊗n}) with 0 ≤ F ≤ P_+.
struct Opf {
    MnElement element;

    explicit Opf(MnElement e);
    int d() const { return element.d; }
    int n() const { return element.n; }
    const Matrix& mat() const { return element.mat; }
};

Opf unit_opf(int d, int n);   // F = P_+, the unit function
Opf zero_opf(int d, int n);

// Full measurement: outcomes sum to the unit OPF within
// tolerances().completeness.
struct Measurement {
    std::vector<Opf> outcomes;

    explicit Measurement(std::vector<Opf> fs);
    int d() const { return outcomes.front().d(); }
    int n() const { return outcomes.front().n(); }
};

// Probability distribution over pure states.
struct Ensemble {
    std::vector<std::pair<Ket, double>> members;

    explicit Ensemble(std::vector<std::pair<Ket, double>> m);
    static Ensemble pure(Ket psi);
    static Ensemble uniform(std::vector<Ket> kets);
    int d() const { return members.front().first.dim; }
};

// ω = Σ_r p_r (|ψ_r⟩⟨ψ_r|)^{⊗n}: Hermitian, PSD, unit trace, symmetric
// support. Two ensembles with the same ω are indistinguishable at degree n.
struct MomentState {
    int d;
    int n;
    Matrix omega;

    MomentState(int d, int n, Matrix w);
};

// Clamps float noise at reporting boundaries; values below -prob_clamp or
// above 1 + prob_clamp are genuine errors.
double clamp_probability(double x);

double evaluate(const Opf& f, const Ket& psi);
double evaluate_ensemble(const Opf& f, const Ensemble& e);

// F = Σ_x p_x F_x for a probability distribution p.
Opf mix(const std::vector<Opf>& fs, const std::vector<double>& ps);

// f ∘ U: F ↦ (U^{⊗n})† F U^{⊗n}, so evaluate(f∘U, ψ) = evaluate(f, Uψ).
Opf pullback_unitary(const Opf& f, const Matrix& u);

MomentState moment_state(const Ensemble& e, int n);

// Trace-norm distance of the two degree-n moment states; when positive, a
// witness OPF whose two ensemble probabilities differ by half the gap.
struct GapResult {
    double gap = 0.0;
    std::optional<Opf> witness;
};
GapResult distinguishability_gap(const Ensemble& e1, const Ensemble& e2, int n);

// f(α) = g(α ⊗ β) realized by contracting β^{⊗n} on the ancilla copies; the
// output is a valid OPF on the remaining factor.
Opf restrict_with_ancilla(const Opf& g, const Ket& beta);

}  // namespace opflab
