#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "opflab/opf.hpp"
#include "opflab/rng.hpp"

namespace opflab {

// Bilinear rule embedding a pair of local OPFs as a joint OPF on the
// composite system. `raw` is the bilinear extension to all of M_n^a × M_n^b
// (the span probes need it on non-OPF basis elements); operator() validates
// the inputs and the output as OPFs.
struct StarProduct {
    std::string name;
    int degree;
    std::function<Matrix(const Matrix&, int, const Matrix&, int)> raw;

    Opf operator()(const Opf& f, const Opf& g) const;
};

// n=1: (f ⋆ g) = F ⊗ G, the quantum rule.
StarProduct quantum_star_product();

// n=2: F ⊗ G + (tr F / tr P_+^a)(tr G / tr P_+^b) P_-^a ⊗ P_-^b, reassembled
// onto the (C^{ab})^{⊗2} copy ordering. Satisfies every star axiom except
// associativity.
StarProduct toy_star_product();

StarProduct star_product_by_name(const std::string& name);

Opf quantum_star(const Opf& f, const Opf& g);
Opf toy_star(const Opf& f, const Opf& g);

struct AxiomCheck {
    std::string axiom;
    double max_deviation;
    double tol;
    bool pass;
};

struct AxiomReport {
    std::string star;
    int a, b;
    int trials;
    std::uint64_t seed;
    double tol;
    std::vector<AxiomCheck> checks;

    bool all_pass() const;
};

// Per-axiom max deviation over random OPFs, unitaries, mixtures and states,
// in both factor orders: local structure, probability preservation, local
// mixing, local group action.
AxiomReport verify_star_axioms(const StarProduct& star, int a, int b, int trials, double tol,
                               std::uint64_t seed);

// Maximizing tuple of an associativity search; replayable from the stored
// operators alone or from (seed, trials).
struct AssocCertificate {
    std::string star;
    int a, b, c;
    std::uint64_t seed;
    int trial_index;
    Matrix f, g, h;
    Vector psi;
    double lhs, rhs, gap;
};

struct AssocResult {
    double gap;
    AssocCertificate certificate;
};

// max over sampled (f, g, h, ψ) of |((f⋆g)⋆h)(ψ) − (f⋆(g⋆h))(ψ)|. Trials use
// seeds derived per index, so any evaluation order gives the same result.
AssocResult associativity_gap(const StarProduct& star, int a, int b, int c, int trials,
                              std::uint64_t seed);

// Recompute both associations from the stored tuple.
double replay_certificate(const StarProduct& star, const AssocCertificate& cert);

// Orthonormal basis defining the |⟨φ_i|ψ⟩|⁴-normalized probability rule.
struct ContextualMeasurement {
    std::vector<Ket> basis;

    explicit ContextualMeasurement(std::vector<Ket> b);
    int d() const { return static_cast<int>(basis.size()); }
};

// P(φ_i|ψ) = |⟨φ_i|ψ⟩|⁴ / Σ_j |⟨φ_j|ψ⟩|⁴. The denominator couples the
// outcome to the whole basis, so this rule has no degree-n operator form.
Eigen::VectorXd contextual_probabilities(const ContextualMeasurement& m, const Ket& psi);

struct BornSample {
    Eigen::VectorXd probabilities;
    int outcome;
};

// Born probabilities of an n=1 measurement plus one outcome sampled with the
// seeded generator.
BornSample born_measure(const Measurement& povm, const Ket& psi, std::uint64_t seed);

// Haar-conjugated random diagonal in [0, 1], compressed onto symmetric
// support; covers [0, P_+] well enough for axiom verification.
Opf random_opf(int d, int n, Rng& rng);
Measurement random_two_outcome_measurement(int d, int n, Rng& rng);

}  // namespace opflab
