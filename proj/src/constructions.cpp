#include "anosov/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "anosov/multilinear.hpp"
#include "anosov/parallel.hpp"

namespace anosov {

namespace {

const cd I1(0.0, 1.0);

double rel_diff(const CMat& a, const CMat& b) {
    double scale = std::max({1.0, a.norm(), b.norm()});
    return (a - b).norm() / scale;
}

}  // namespace

cd CyclicConjugator::expansion(const CVec& vx, const CVec& vy, int sign) const {
    const Eigen::Index d = P.rows();
    CVec x = Pinv * vx;
    CVec y = P.transpose() * vy;
    cd s = 0.0;
    for (Eigen::Index k = 0; k + 1 < d; ++k) s += y(k) * x(k);
    s += (sign > 0 ? I1 : -I1) * y(d - 1) * x(d - 1);
    return s;
}

CyclicConjugator cyclic_conjugator(const CMat& m) {
    if (m.rows() != m.cols() || m.rows() < 2) throw ShapeError("cyclic_conjugator expects a square matrix of size >= 2");
    if (m.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw DomainError("cyclic_conjugator expects a real matrix");
    ProximalData prox = proximal(m);
    if (!prox.biproximal) throw NotProximal("rho(gamma) needs unique eigenvalues of maximal and minimal modulus");
    Eigen::ComplexEigenSolver<CMat> es(m);
    const Eigen::Index d = m.rows();
    std::vector<Eigen::Index> order(d);
    for (Eigen::Index i = 0; i < d; ++i) order[i] = i;
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) > std::abs(ev(b)); });
    CyclicConjugator c;
    c.P.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        CVec v = es.eigenvectors().col(order[j]);
        // Extreme eigenvalues are real, so their eigenvectors can be taken real.
        Eigen::Index piv;
        v.cwiseAbs().maxCoeff(&piv);
        v *= std::conj(v(piv)) / std::abs(v(piv));
        c.P.col(j) = v / v.norm();
    }
    Eigen::JacobiSVD<CMat> svd(c.P);
    const auto& s = svd.singularValues();
    if (s(d - 1) < 1e-10 * s(0)) throw DomainError("rho(gamma) is not semisimple (eigenbasis is degenerate)");
    c.Pinv = c.P.inverse();
    CVec D = CVec::Ones(d);
    D(d - 1) = I1;
    c.g = c.P * D.asDiagonal() * c.Pinv;
    c.commutator_norm = rel_diff(c.g * m, m * c.g);
    if (c.commutator_norm > 1e-8) throw Error("cyclic_conjugator: commutator check failed");
    return c;
}

CyclicConjugator cyclic_conjugator(const FreeRep& rep, const Word& gamma) {
    if (gamma.empty()) throw ConfigError("gamma must be nontrivial");
    return cyclic_conjugator(rep.eval(reduce(gamma)));
}

CMat doubling_conjugator(int d) {
    if (d < 1) throw ShapeError("doubling_conjugator needs d >= 1");
    CVec D(2 * d);
    D.head(d).setOnes();
    D.tail(d).setConstant(I1);
    return D.asDiagonal();
}

cd doubling_pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b, int sign) {
    const Eigen::Index d = u.size();
    if (v.size() != d || a.size() != d || b.size() != d) throw ShapeError("doubling_pairing: size mismatch");
    CMat w = doubling_conjugator(static_cast<int>(d));
    if (sign < 0) w = w.conjugate();
    auto cat = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        CVec z(2 * d);
        z.head(d) = x.cast<cd>();
        z.tail(d) = y.cast<cd>();
        return z;
    };
    CVec p1 = w * cat(u, v), p2 = w * cat(-v, u);
    return coordinate_pairing({p1, p2}, {cat(a, b), cat(-b, a)});
}

CMat pairing_block(int d) {
    if (d < 1) throw ShapeError("pairing_block needs d >= 1");
    CMat g = CMat::Zero(2 * d, 2 * d);
    CMat Id = CMat::Identity(d, d);
    g.topLeftCorner(d, d) = Id;
    g.topRightCorner(d, d) = 0.5 * I1 * Id;
    g.bottomLeftCorner(d, d) = I1 * Id;
    g.bottomRightCorner(d, d) = 0.5 * Id;
    return g;
}

CMat pairing_mismatch(const CMat& g) { return g.conjugate().inverse() * g; }

PairedRep paired_rep(const FreeRep& rho1, const FreeRep& rho2) {
    if (rho1.d != rho2.d) throw ShapeError("paired_rep: dimensions differ");
    if (rho1.gens.rank() != rho2.gens.rank()) throw ShapeError("paired_rep: generating sets differ");
    const int d = rho1.d;
    PairedRep out{rho1, rho2, pairing_block(d), {}};
    CMat ginv = out.g.inverse();
    std::vector<CMat> mats;
    for (int i = 0; i < rho1.gens.rank(); ++i) {
        CMat blk = CMat::Zero(2 * d, 2 * d);
        blk.topLeftCorner(d, d) = rho1.mats[i];
        blk.bottomRightCorner(d, d) = rho2.mats[i];
        CMat m = CMat::Zero(2 * d + 1, 2 * d + 1);
        m.topLeftCorner(2 * d, 2 * d) = out.g * blk * ginv;
        m(2 * d, 2 * d) = 1.0;
        mats.push_back(m);
    }
    out.rep = FreeRep::make(rho1.gens, std::move(mats), Field::C);
    return out;
}

cd paired_mismatch_pairing(const CMat& g, const CVec& a1, const CVec& a2, const CVec& b1, const CVec& b2) {
    const Eigen::Index d = a1.size();
    if (g.rows() != 2 * d) throw ShapeError("paired_mismatch_pairing: size mismatch");
    auto embed = [&](const CVec& x, int slot) {
        CVec z = CVec::Zero(2 * d);
        z.segment(slot * d, d) = x;
        return z;
    };
    CMat M = pairing_mismatch(g);
    return coordinate_pairing({embed(b1, 0), embed(b2, 1)}, {M * embed(a1, 0), M * embed(a2, 1)});
}

QuatStructure quat_structure(int d, const RMat& w) {
    if (d < 1 || w.rows() != d || w.cols() != d) throw ShapeError("quat_structure: w must be d x d");
    if ((w * w - RMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("w is not an involution");
    QuatStructure q;
    q.d = d;
    q.w = w;
    RMat M(d * d, d * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int k2 = 0; k2 < d; ++k2)
                for (int l2 = 0; l2 < d; ++l2) M(k * d + l, k2 * d + l2) = w(k, k2) * w(l, l2);
    const double s = 1.0 / std::sqrt(2.0);
    CMat Id = CMat::Identity(d * d, d * d);
    q.f_plus = s * (Id + I1 * M.cast<cd>());
    q.f_minus = s * (Id - I1 * M.cast<cd>());

    WedgeIndex idx(2 * d, 2);
    const int m = idx.size();
    q.beta = Matrix(Field::H, m, m);
    q.block_of.assign(m, 0);
    std::vector<int> w2_slot(m, -1);
    for (int I = 0; I < m; ++I) {
        int a = idx.subsets[I][0], b = idx.subsets[I][1];
        if (b < d) {
            q.block_of[I] = 1;
            ++q.dim_w1;
        } else if (a >= d) {
            q.block_of[I] = 3;
            ++q.dim_w3;
        } else {
            q.block_of[I] = 2;
            w2_slot[I] = a * d + (b - d);
            ++q.dim_w2;
        }
    }
    for (int I = 0; I < m; ++I) {
        if (q.block_of[I] != 2) {
            q.beta.set(I, I, Scalar::quat(0, 0, 1, 0));
            continue;
        }
        for (int J = 0; J < m; ++J)
            if (q.block_of[J] == 2) {
                cd z = q.f_plus(w2_slot[I], w2_slot[J]);
                q.beta.set(I, J, Scalar::quat(z.real(), z.imag(), 0, 0));
            }
    }
    return q;
}

CMat wedge_block_matrix(const std::vector<CMat>& blocks, int q) {
    if (q < 1 || static_cast<int>(blocks.size()) != 2 * q) throw ShapeError("need exactly 2q blocks");
    const Eigen::Index d = blocks[0].rows();
    CMat big = CMat::Zero(2 * q * d, 2 * q * d);
    for (int i = 0; i < 2 * q; ++i) {
        if (blocks[i].rows() != d || blocks[i].cols() != d) throw ShapeError("blocks must share a size");
        big.block(i * d, i * d, d, d) = blocks[i];
    }
    return wedge_matrix(big, 2 * q);
}

CMat wedge_w0(int d, int q) {
    if (d < 1 || q < 1) throw ShapeError("wedge_w0 needs d, q >= 1");
    CMat big = CMat::Zero(2 * q * d, 2 * q * d);
    for (int i = 0; i < q; ++i) {
        const int o = 2 * i * d;
        big.block(o, o + d, d, d).setIdentity();
        big.block(o + d, o, d, d).setIdentity();
    }
    return wedge_matrix(big, 2 * q);
}

namespace {

Word substitute(const Word& w, const std::vector<Word>& psi) {
    Word out;
    for (Letter l : w) {
        const Word& img = psi.at(std::abs(l) - 1);
        out = word_mul(out, l > 0 ? img : word_inverse(img));
    }
    return out;
}

WedgeBlockRep assemble(const FreeRep& rho, int q, const std::function<std::vector<CMat>(int)>& blocks_of) {
    WedgeBlockRep out;
    out.q = q;
    std::vector<CMat> mats;
    for (int i = 0; i < rho.gens.rank(); ++i) mats.push_back(wedge_block_matrix(blocks_of(i), q));
    out.rep = FreeRep::make(rho.gens, std::move(mats), rho.field);
    out.w0 = wedge_w0(rho.d, q);
    return out;
}

}  // namespace

WedgeBlockRep wedge_block_rep(const FreeRep& rho, const std::vector<Word>& psi, int q) {
    const int k = rho.gens.rank();
    if (q < 1) throw ConfigError("q must be positive");
    if (static_cast<int>(psi.size()) != k) throw ConfigError("psi needs one image per generator");
    for (const auto& img : psi) {
        for (Letter l : img)
            if (l == 0 || std::abs(l) > k) throw ConfigError("psi image uses an unknown letter");
        if (reduce(img).empty()) throw ConfigError("psi sends a generator to the identity");
    }
    for (int i = 1; i <= k; ++i)
        if (!subgroup_contains(psi, Word{i}, k)) throw ConfigError("psi is not surjective, so not an automorphism");
    return assemble(rho, q, [&](int i) {
        std::vector<CMat> blocks;
        Word cur{i + 1};
        for (int s = 0; s < 2 * q; ++s) {
            blocks.push_back(rho.eval(cur));
            cur = substitute(cur, psi);
        }
        return blocks;
    });
}

WedgeBlockRep wedge_block_rep(const FreeRep& rho, const std::function<CMat(const CMat&)>& psi, int q,
                              const std::vector<Word>& test_words) {
    if (q < 1) throw ConfigError("q must be positive");
    for (const auto& u : test_words)
        for (const auto& v : test_words) {
            CMat lhs = psi(rho.eval(word_mul(u, v)));
            CMat rhs = psi(rho.eval(u)) * psi(rho.eval(v));
            if (rel_diff(lhs, rhs) > 1e-9) throw ConfigError("psi is not multiplicative on the test words");
        }
    return assemble(rho, q, [&](int i) {
        std::vector<CMat> blocks;
        CMat cur = rho.mats[i];
        for (int s = 0; s < 2 * q; ++s) {
            blocks.push_back(cur);
            cur = psi(cur);
        }
        return blocks;
    });
}

CMat hnn_stable_letter(const CMat& tau, const FreeRep& rep, const Word& gamma, int p) {
    if (p < 1) throw ConfigError("p must be at least 1");
    if (tau.rows() != rep.d || tau.cols() != rep.d) throw ShapeError("tau has the wrong size");
    CMat base = rep.eval(reduce(gamma)), acc = CMat::Identity(rep.d, rep.d);
    for (int e = p; e > 0; e >>= 1) {
        if (e & 1) acc = acc * base;
        base = base * base;
    }
    return tau * acc;
}

StableLetterResult evaluate_stable_letter(const CMat& tau, const FreeRep& rep, const Word& gamma, int p,
                                          const StableLetterOptions& opt) {
    ProximalData gp = proximal(rep.eval(reduce(gamma)));
    if (!gp.biproximal) throw NotProximal("rho(gamma) is not biproximal");
    StableLetterResult r;
    r.p = p;
    r.t = hnn_stable_letter(tau, rep, gamma, p);
    r.target = flag_image(Transform::make(tau), *gp.plus);
    try {
        r.prox = proximal(r.t);
    } catch (const DomainError&) {
        // rho(gamma)^p has lost its small singular directions to rounding.
        r.fact_sup = 1.0;
        return r;
    }
    r.fact_sup = 0.0;
    Transform step = Transform::make(r.t);
    Transform power{CMat::Identity(rep.d, rep.d), CMat::Identity(rep.d, rep.d)};
    for (int k = 1; k <= opt.K; ++k) {
        power = power * step;
        power.g /= power.g.norm();
        power.normal_map /= power.normal_map.norm();
        try {
            r.fact_sup = std::max(r.fact_sup, flag_dist(xi_flag(power), r.target));
        } catch (const GapTooSmall&) {
            r.fact_sup = std::max(r.fact_sup, 1.0);
        }
    }
    r.accepted = r.prox.biproximal && r.fact_sup <= opt.tol;
    return r;
}

StableLetterResult hnn_stable_letter_search(const CMat& tau, const FreeRep& rep, const Word& gamma,
                                            const StableLetterOptions& opt) {
    if (opt.p_max < 1) throw ConfigError("p_max must be positive");
    const int chunk = std::max(1, opt.threads);
    double best = 1.0;
    for (int lo = 1; lo <= opt.p_max; lo += chunk) {
        const int n = std::min(chunk, opt.p_max - lo + 1);
        std::vector<StableLetterResult> part(n);
        parallel_for(part.size(), opt.threads,
                     [&](size_t i) { part[i] = evaluate_stable_letter(tau, rep, gamma, lo + static_cast<int>(i), opt); });
        for (const auto& r : part) {
            if (r.accepted) return r;
            best = std::min(best, r.fact_sup);
        }
    }
    throw ProximalizationFailed("no p <= " + std::to_string(opt.p_max) + " passed (best distance " +
                                std::to_string(best) + ", tolerance " + std::to_string(opt.tol) + ")");
}

CMat codim1_conjugator(int n) {
    if (n < 2) throw ShapeError("codim1_conjugator needs n >= 2");
    CMat a = CMat::Identity(n, n);
    a(0, 0) = I1;
    return a;
}

BigInt big_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

const std::vector<std::string>& dimension_tags() {
    static const std::vector<std::string> tags{"double_2d", "pair_m", "quat_r", "wedge_p", "quat_remark"};
    return tags;
}

BigInt dimension_budget(const std::string& tag, int d, int q) {
    if (d < 1) throw ConfigError("dimension_budget needs d >= 1");
    const BigInt D = d;
    if (tag == "double_2d") return 2 * D;
    if (tag == "pair_m") return 2 * D * (2 * D + 1);
    if (tag == "quat_r") {
        BigInt b = big_binomial(4 * d * (2 * d - 1), 4);
        return 2 * b * (2 * b + 1);
    }
    if (tag == "wedge_p") {
        if (q < 1) throw ConfigError("wedge_p needs q >= 1");
        BigInt c = big_binomial(2 * q * d, 2 * q);
        return c * (2 * c + 1);
    }
    if (tag == "quat_remark") {
        BigInt n8 = 1;
        for (int i = 0; i < 8; ++i) n8 *= D;
        return 2025 * n8;
    }
    throw ConfigError("unknown dimension tag '" + tag + "'");
}

}  // namespace anosov
