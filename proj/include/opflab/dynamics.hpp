#pragma once

#include <stdexcept>
#include <vector>

#include "opflab/opf.hpp"
#include "opflab/rng.hpp"

namespace opflab {

// The update rule is undefined on zero-probability outcomes.
struct ZeroProbabilityError : std::runtime_error {
    ZeroProbabilityError() : std::runtime_error("post_state: outcome has zero probability") {}
};

struct DensityMatrix {
    int d;
    Matrix mat;

    explicit DensityMatrix(Matrix m);
    static DensityMatrix pure(const Ket& psi);
    static DensityMatrix maximally_mixed(int d);
};

// Linear map on d×d matrices. Canonical form is the Kraus list; maps built
// from a non-PSD Choi matrix (positive but not completely positive, like the
// transpose) keep only the Choi form and apply through it.
class CpMap {
public:
    static CpMap from_kraus(std::vector<Matrix> ks);
    static CpMap from_choi(Matrix choi);
    static CpMap identity(int d);
    static CpMap unitary(const Matrix& u);

    int dim() const { return d_; }
    bool has_kraus() const { return !kraus_.empty(); }
    const std::vector<Matrix>& kraus() const { return kraus_; }

    friend Matrix choi_of(const CpMap& map);

private:
    CpMap() = default;
    int d_ = 0;
    std::vector<Matrix> kraus_;
    Matrix choi_;  // empty unless constructed from a Choi matrix
};

// Outcomes of one measurement; the summed map is trace-preserving.
struct Instrument {
    std::vector<CpMap> outcomes;

    explicit Instrument(std::vector<CpMap> maps);
    int d() const { return outcomes.front().dim(); }
};

Matrix apply(const CpMap& map, const Matrix& rho);
Matrix apply(const CpMap& map, const DensityMatrix& rho);

// P(Λ|ρ) = tr Λ(ρ).
double outcome_probability(const CpMap& map, const DensityMatrix& rho);

// Λ(ρ)/tr Λ(ρ); throws ZeroProbabilityError instead of dividing by ~0.
DensityMatrix post_state(const CpMap& map, const DensityMatrix& rho);

// F = Σ_k K†K (or the Choi partial trace), the n=1 OPF with
// tr Λ(ρ) = tr(F ρ).
Opf povm_of(const CpMap& map);

// One single-Kraus map ρ ↦ Q_i ρ Q_i per projector; requires a complete
// family of mutually orthogonal Hermitian idempotents.
Instrument luders_instrument(const std::vector<Matrix>& projectors);

// Successive measurement: outcome (j, i) is then_j ∘ first_i, stored at index
// j * first.size() + i.
Instrument compose(const Instrument& first, const Instrument& then);

// C = Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|); PSD exactly when the map is completely
// positive.
Matrix choi_of(const CpMap& map);
bool cp_check(const CpMap& map);

// ρ ↦ ρ^T via its Choi matrix (the swap operator): positive but not CP.
CpMap transpose_map(int d);

DensityMatrix random_density(int d, Rng& rng);
CpMap random_cp_map(int d, int kraus_count, Rng& rng);      // trace-preserving
Instrument random_instrument(int d, int outcomes, Rng& rng);

}  // namespace opflab
