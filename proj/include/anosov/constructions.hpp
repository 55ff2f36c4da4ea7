#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "anosov/dynamics.hpp"
#include "anosov/flags.hpp"
#include "anosov/scalars.hpp"
#include "anosov/words.hpp"

namespace anosov {

using BigInt = boost::multiprecision::cpp_int;

// g = P diag(1, ..., 1, i) P^-1 where P is an eigenbasis of rho(gamma) ordered
// by decreasing modulus.  g fixes every eigenline and rotates only the one of
// smallest modulus.
struct CyclicConjugator {
    CMat g, P, Pinv;
    double commutator_norm = 0;

    // Right-hand side of the bilinear expansion of v_y^T g^{sign} v_x in the eigenbasis.
    cd expansion(const CVec& vx, const CVec& vy, int sign) const;
};

CyclicConjugator cyclic_conjugator(const FreeRep& rep, const Word& gamma);
CyclicConjugator cyclic_conjugator(const CMat& m);

// diag(I_d, i I_d).
CMat doubling_conjugator(int d);
// Bilinear pairing of w^{sign} iota_2^+([u + iv]) with the plane spanned by
// (a, b) and (-b, a), computed through Lambda^2 coordinates.
cd doubling_pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b, int sign = 1);

struct PairedRep {
    FreeRep rho1, rho2;
    CMat g;       // [[I, (i/2) I], [i I, (1/2) I]]
    FreeRep rep;  // diag(g diag(rho1, rho2) g^-1, 1)
};

CMat pairing_block(int d);
PairedRep paired_rep(const FreeRep& rho1, const FreeRep& rho2);
// conj(g)^-1 g for the pairing block.
CMat pairing_mismatch(const CMat& g);
// det(Q^T conj(g)^-1 g P) with P = [(a1,0), (0,a2)] and Q = [(b1,0), (0,b2)],
// evaluated as a Lambda^2 coordinate pairing.
cd paired_mismatch_pairing(const CMat& g, const CVec& a1, const CVec& a2, const CVec& b1, const CVec& b2);

struct QuatStructure {
    int d = 0;
    RMat w;
    CMat f_plus, f_minus;  // on W2 in the basis (e_k, 0) ^ (0, e_l), index k*d + l
    Matrix beta;           // quaternionic, in the Lambda^2(R^{2d}) WedgeIndex basis
    int dim_w1 = 0, dim_w2 = 0, dim_w3 = 0;
    std::vector<int> block_of;  // 1, 2 or 3 for every wedge basis vector
};

QuatStructure quat_structure(int d, const RMat& w);

struct WedgeBlockRep {
    FreeRep rep;  // tau'
    CMat w0;      // Lambda^{2q} diag(W0, ..., W0)
    int q = 1;
};

// psi given on generators as words; it must be an automorphism of the free group.
WedgeBlockRep wedge_block_rep(const FreeRep& rho, const std::vector<Word>& psi, int q);
// psi realized on matrices; checked to be multiplicative on `test_words`.
WedgeBlockRep wedge_block_rep(const FreeRep& rho, const std::function<CMat(const CMat&)>& psi, int q,
                              const std::vector<Word>& test_words);
// Lambda^{2q} of the block tuple after swapping neighbouring blocks pairwise.
CMat wedge_block_matrix(const std::vector<CMat>& blocks, int q);
CMat wedge_w0(int d, int q);

CMat hnn_stable_letter(const CMat& tau, const FreeRep& rep, const Word& gamma, int p);

struct StableLetterOptions {
    int p_max = 64;
    int K = 8;           // convergence of Xi(t^k) checked for k = 1..K
    double tol = 0.05;   // on sup_k d(Xi(t^k), tau gamma^+)
    int threads = 1;
};

struct StableLetterResult {
    int p = 0;
    CMat t;
    ProximalData prox;
    double fact_sup = 0;  // sup_k d(Xi(t^k), tau gamma^+)
    Flag target;          // tau gamma^+
    bool accepted = false;
};

// Evaluates one p: biproximality plus convergence of Xi(t^k) to tau gamma^+.
StableLetterResult evaluate_stable_letter(const CMat& tau, const FreeRep& rep, const Word& gamma, int p,
                                          const StableLetterOptions& opt = {});
// Linear sweep p = 1..p_max; the smallest accepted p wins.
StableLetterResult hnn_stable_letter_search(const CMat& tau, const FreeRep& rep, const Word& gamma,
                                            const StableLetterOptions& opt = {});

// diag(i, I_{n-1}).
CMat codim1_conjugator(int n);

BigInt dimension_budget(const std::string& tag, int d, int q = 1);
BigInt big_binomial(int n, int k);
const std::vector<std::string>& dimension_tags();

}  // namespace anosov
