#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "opflab/tensor.hpp"

namespace opflab {

// Weakly decreasing list of positive parts; the empty partition is {}.
using Partition = std::vector<int>;

int partition_weight(const Partition& p);
bool is_partition(const Partition& p);
void validate_partition(const Partition& p);

// All partitions of n in decreasing lexicographic order: (n) first, (1^n) last.
std::vector<Partition> partitions(int n);

// Size of the conjugacy class of S_n with cycle type mu: n! / ∏ k^{m_k} m_k!.
long long class_size(const Partition& mu);

long long factorial(int n);
long long binomial(int n, int k);

// Irreducible character χ_λ on the class of cycle type mu, by the
// Murnaghan-Nakayama recursion over beta-sets. Exact integers, memoized.
long long mn_character(const Partition& lambda, const Partition& mu);

// Dimension of the S_n irrep S_λ (χ_λ on the identity class).
long long sn_dim(const Partition& lambda);

// Rows: partitions of n; columns: classes keyed by cycle type, both in
// partitions(n) order.
struct CharacterTable {
    int n;
    std::vector<Partition> labels;                 // row = irrep, column = class
    std::vector<std::vector<long long>> entries;   // entries[row][col]
};
CharacterTable character_table(int n);

// Π_λ = (dim S_λ / n!) Σ_π χ_λ(π) π acting on (C^d)^{⊗n}. Hermitian
// idempotent; identically zero when λ has more than d parts.
Op isotypic_projector(const Partition& lambda, int d, int n);

// Schur-Weyl block of the bipartite symmetric projector on (C^{ab})^{⊗n}
// (interleaved layout): (Π_λ on A-copies ⊗ Π_λ on B-copies) · P_+^{AB}.
// The family over λ ⊢ n is a resolution of P_+^{AB}.
Op q_lambda(const Partition& lambda, int a, int b, int n);

// Tripartite block (Π_λ^A ⊗ Π_μ^B ⊗ Π_ν^C) · P_+^{ABC}; zero unless the
// Kronecker coefficient g(λ, μ, ν) is positive.
Op q_lambda_mu_nu(const Partition& lambda, const Partition& mu, const Partition& nu,
                  int a, int b, int c, int n);

// g(λ, μ, ν) = (1/n!) Σ_classes |class| χ_λ χ_μ χ_ν.
long long kronecker_coefficient(const Partition& lambda, const Partition& mu,
                                const Partition& nu);

// Dimension of the SU(d) irrep V_λ^d by the hook-content formula. Requires
// at most d parts.
long long su_dim(const Partition& lambda, int d);

// V_λ^d ⊗ V_μ^d decomposed by Littlewood-Richardson skew tableaux, with
// length-d columns removed (SU(d) reduction). Keys are reduced partitions,
// values multiplicities.
std::map<Partition, long long> lr_decompose(const Partition& lambda, const Partition& mu, int d);

// λ*_i = λ_1 - λ_{d+1-i}, trailing zeros trimmed (the SU(d) dual).
Partition dual_partition(const Partition& lambda, int d);

}  // namespace opflab
