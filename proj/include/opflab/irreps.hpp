#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opflab/opf.hpp"
#include "opflab/theories.hpp"

namespace opflab {

// Orthonormal (Hilbert-Schmidt) basis spanning one N_j^d component of M_n^d,
// produced by the conjugation orbit of a single generator.
struct IrrepBlock {
    int j;
    int d;
    int n;
    std::vector<Matrix> basis;

    int dim() const { return static_cast<int>(basis.size()); }
};

struct SpectrumLine {
    double value;
    int multiplicity;
};

// Numerical stand-in for irrep labels: quadratic Casimir eigenvalues of the
// conjugation action, calibrated against the generator blocks.
struct CasimirSpectrum {
    std::vector<SpectrumLine> eigenvalues;
    std::map<int, double> calibration;  // j -> eigenvalue
};

// N_{j,n} = P_+ (|0⟩⟨1|^{⊗j} ⊗ 1^{⊗(n-j)}) P_+ on (C^d)^{⊗n}.
MnElement generator_Njn(int j, int n, int d);

// Orthonormal basis of span{U^{⊗n} m U^{⊗n†}} over sampled Haar unitaries.
// Sampling proceeds in batches of 8 and stops once three consecutive batches
// add no numerical rank; exceeding sample_cap first is a diagnostic failure.
IrrepBlock orbit_span(const MnElement& m, int sample_cap, std::uint64_t seed);

// Closed-form dimensions: dim M_n^d = binom(d+n-1, n)²,
// dim N_n^d = binom(d+n-2, n)² (2n+d-1)/(d-1). Exact integers.
long long dim_Mn(int d, int n);
long long dim_Nn(int d, int n);

// Blocks j = 0..n of M_n^d = ⊕_j N_j^d via generator orbits; each block must
// reach exactly dim_Nn(d, j).
std::vector<IrrepBlock> decompose_Mn(int d, int n, std::uint64_t seed);

// C₂(M) = Σ_x [ΔT_x, [ΔT_x, M]] with ΔT_x = Σ_copies T_x at one subsystem
// slot; {T_x} an orthonormal su(d) basis under tr(T_a T_b) = δ_ab.
class CasimirMap {
public:
    CasimirMap(std::vector<Matrix> deltas) : deltas_(std::move(deltas)) {}
    Matrix apply(const Matrix& m) const;
    int space_dim() const { return deltas_.empty() ? 0 : static_cast<int>(deltas_.front().rows()); }

private:
    std::vector<Matrix> deltas_;
};

CasimirMap casimir_map(int d, int n);
// ΔT_x acts on the `slot`-th subsystem factor of every copy of the
// interleaved layout (subsys_dims per copy, copies outer).
CasimirMap casimir_on_slot(const std::vector<int>& subsys_dims, int n, int slot);

// Orthonormal su(d) generators with tr(T_a T_b) = δ_ab.
std::vector<Matrix> su_generators(int d);

CasimirSpectrum casimir_calibrate(int d, int n, std::uint64_t seed);

// Hilbert-Schmidt norms of the projections of (ψψ†)^{⊗n} onto each block.
std::vector<double> omega_support_check(const Ket& psi, const std::vector<IrrepBlock>& blocks);

// Spectrum of a Casimir map restricted to the span of the given matrices.
// residual measures how far the map leaves the span (closure diagnostic).
struct SpanSpectrum {
    int rank = 0;
    std::vector<double> eigenvalues;
    double residual = 0.0;
};
SpanSpectrum casimir_spectrum_on_span(const std::vector<Matrix>& span, const CasimirMap& cas);

struct ProbeAssertion {
    std::string name;
    bool pass;
    double metric;
    std::string detail;
};

struct ProbeReport {
    std::string kind;
    std::map<std::string, int> dims;
    std::uint64_t seed = 0;
    int span_rank = 0;     // the projected span under test
    int control_rank = 0;  // the span where the probed value must show up
    std::vector<SpectrumLine> span_spectrum;
    std::vector<SpectrumLine> control_spectrum;
    std::map<int, double> calibration;
    std::vector<ProbeAssertion> assertions;

    bool all_pass() const;
};

// Bipartite exclusion probe at (a,b) = (2,4), n = 2: the SU(4) j=2 Casimir
// value must be absent from Q_{(1,1)} [u_A ⋆ M_2^4] Q_{(1,1)} and present in
// the unprojected control span.
ProbeReport licit_probe(const StarProduct& star, std::uint64_t seed);

// Tripartite contradiction pair at a=c=e=2, n=2: the j=2 value is present in
// Q_{(2),(1,1),(1,1)} [M_2^a ⋆ u_CE] Q (A side) and absent from
// Q_{(1,1),(2),(1,1)} [u_A ⋆ (M_2^c ⋆ u_E)] Q (C side).
ProbeReport tripartite_probe(const StarProduct& star, std::uint64_t seed);

}  // namespace opflab
