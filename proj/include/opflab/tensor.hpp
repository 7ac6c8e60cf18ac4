#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "opflab/tolerances.hpp"

namespace opflab {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

// ── Domain types ─────────────────────────────────────────────────────────────

// Normalized pure state of C^d. Throws std::invalid_argument when the norm
// deviates from 1 by more than tolerances().equality.
struct Ket {
    int dim;
    Vector amplitudes;

    explicit Ket(Vector amps);
    static Ket basis_state(int d, int index);
    static Ket normalized(Vector amps);  // rescales, then validates
};

// Tensor layout of an operator: `copies` copies of the subsystem factor list,
// copies being the outer index. Flat factor order for copies=n over dims
// [a,b] is [a,b,a,b,...]; total dimension (a*b)^n.
struct FactorShape {
    std::vector<int> factor_dims;
    int copies = 1;

    FactorShape() = default;
    FactorShape(std::vector<int> dims, int n);
    static FactorShape single(int d);            // one factor, one copy
    static FactorShape power(int d, int n);      // (C^d)^{⊗n}
    static FactorShape flat(std::vector<int> dims);

    std::vector<int> flat_dims() const;
    long long copy_dim() const;                  // product of factor_dims
    long long total_dim() const;
    bool operator==(const FactorShape& o) const = default;
};

// Dense operator with factor metadata.
struct Op {
    FactorShape shape;
    Matrix mat;

    Op(FactorShape s, Matrix m);
};

// Bijection on {0..n-1}; images[i] is the image of i.
struct Permutation {
    std::vector<int> images;

    explicit Permutation(std::vector<int> imgs);
    static Permutation identity(int n);
    int size() const { return static_cast<int>(images.size()); }
    Permutation compose(const Permutation& inner) const;  // this ∘ inner
    Permutation inverse() const;
};

// ── Operations ───────────────────────────────────────────────────────────────

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
Op kron(const Op& a, const Op& b);
Vector ket_power(const Ket& psi, int n);  // |ψ⟩^{⊗n}

// Unitary 0/1 matrix permuting the tensor factors of (C^d)^{⊗n}:
// e_{j_1..j_n} ↦ e_{j_{π^{-1}(1)} .. j_{π^{-1}(n)}}, a group homomorphism.
Op perm_operator(const Permutation& pi, int d, int n);

// Average of all factor permutations of (C^d)^{⊗n}; Hermitian idempotent of
// rank binom(d+n-1, n). Cached per (d, n).
Op sym_projector(int d, int n);

// 1 - P_+ on (C^d)^{⊗2}; rank d(d-1)/2. Only defined at n = 2.
Op antisym_projector(int d, int n = 2);

// Trace out one full copy (all factors of that copy); output has copies-1.
Op partial_trace(const Op& m, int copy_index);

// Conjugation by the basis permutation induced by a factor permutation:
// target factor slot t receives source factor perm[t].
Op reorder_factors(const Op& m, const std::vector<int>& perm);

// Reorder between two shapes over the same factor multiset. The permutation
// matches equal dims by order of occurrence, so the canonical interleaved
// [a,b,a,b,...] ↔ grouped [a,..,a,b,..,b] conversions come out right when the
// dims are distinct. For equal dims use the explicit helpers below.
Op factor_reorder(const Op& m, const FactorShape& from, const FactorShape& to);

// (C^{s_0·s_1·..})^{⊗n} interleaved layout ↔ grouped-by-subsystem layout.
Op interleaved_to_grouped(const Op& m, const std::vector<int>& subsys_dims, int n);
Op grouped_to_interleaved(const Op& m, const std::vector<int>& subsys_dims, int n);
std::vector<int> interleaved_to_grouped_perm(int n_subsys, int n_copies);
std::vector<int> grouped_to_interleaved_perm(int n_subsys, int n_copies);

// True iff 0 ≤ f ≤ p within tol (smallest eigenvalues of f and p-f above
// -tol). Throws on non-Hermitian input.
bool operator_interval_check(const Matrix& f, const Matrix& p, double tol);
bool operator_interval_check(const Op& f, const Op& p, double tol);

// ── Dense-matrix helpers ─────────────────────────────────────────────────────

bool is_hermitian(const Matrix& m, double tol);
Matrix hermitize(const Matrix& m);               // (M + M†)/2
double max_abs(const Matrix& m);
double min_eigenvalue(const Matrix& hermitian);
int numerical_rank(const Matrix& m);             // σ > rank_cut · σ_max
Complex hs_inner(const Matrix& a, const Matrix& b);  // tr(A†B)
double hs_norm(const Matrix& a);

}  // namespace opflab
