#pragma once

#include <vector>

#include "anosov/flags.hpp"
#include "anosov/scalars.hpp"

namespace anosov {

// k-subsets of {0..d-1} in lexicographic order; the basis e_I of Lambda^k.
struct WedgeIndex {
    int d = 0, k = 0;
    std::vector<std::vector<int>> subsets;

    WedgeIndex(int d, int k);
    int size() const { return static_cast<int>(subsets.size()); }
    int index_of(const std::vector<int>& increasing) const;
};

CMat wedge_matrix(const CMat& M, int k);
Matrix wedge_matrix(const Matrix& M, int k);

// Coordinates of a_1 ^ ... ^ a_k in the WedgeIndex basis.
CVec wedge_vectors(const std::vector<CVec>& a);

// det(<a_r, b_s>).  The pairing is bilinear (no conjugation) unless
// `hermitian` is set, in which case <x,y> = x* y.
cd gram_pairing(const std::vector<CVec>& a, const std::vector<CVec>& b, bool hermitian = false);
// Same quantity computed as the coordinate pairing of the two wedge vectors.
cd coordinate_pairing(const std::vector<CVec>& a, const std::vector<CVec>& b, bool hermitian = false);

struct Subspace {
    Field field = Field::C;
    int ambient = 0;
    CMat basis;  // ambient x dim, orthonormal columns

    // QR-orthonormalizes the spanning columns; rejects rank deficiency.
    static Subspace span(const CMat& columns, Field f = Field::C, double tol = 1e-10);
    int dim() const { return static_cast<int>(basis.cols()); }
    // Hermitian orthogonal complement.
    Subspace complement() const;
    // Projector-based containment test of another subspace.
    bool contains(const Subspace& other, double tol = 1e-10) const;
};

ProjPoint plucker_point(const Subspace& W);
// Input has codimension 2; returns the hyperplane of Lambda^2 with normal
// v1 ^ v2, where span{v1, v2} is the complement of the input.
Hyperplane plucker_hyperplane(const Subspace& Wperp);

Subspace iota2_plus(const ProjPoint& p);
Subspace iota2_minus(const Hyperplane& h);

// Action of M in SL_2 on binary forms of degree k, basis x^{k-j} y^j.
RMat sym_power_sl2(const RMat& M, int k);
Matrix sym_power_sl2(const Matrix& M, int k);

long long binomial(int n, int k);

}  // namespace anosov
