#pragma once

#include "cpkernel/model.hpp"

namespace cpkernel {

/// Radon-Nikodym derivative dL/dK on the Kolmogorov space of K: the unique
/// positive contraction a with L(x,y) = V_x* a V_y when L <= K.
struct RNDerivative {
  ComplexMatrix a;
  double reconstruction_residual = 0.0;  // ||W* a W - gram(L)||_op, relative
  double min_eig = 0.0;
  double max_eig = 0.0;
};

/// Computed as the pseudo-inverse sandwich (W^+)* gram(L) W^+ and then
/// verified: reconstruction within 1e-8 max(1, ||gram K||) and spectrum in
/// [-1e-9, 1 + 1e-9]. Verification failure, not the domination pre-check
/// alone, is authoritative; either failure raises ErrNotDominated.
RNDerivative rn_derivative(const KolmogorovFactor& kf, const PDKernel& l, double tol = kPsdTol);

/// A_w for the iterated kernel K_w, via the compressed fold. Gated on every
/// map being subunital (ErrNotSubunital) and on the model-contractivity
/// certificate (ErrCertificateFailed); under the gate it verifies
/// 0 <= a_w <= I, the oracle match against direct iteration, and K_w <= K.
RNDerivative rn_iterated(const LiftSet& lifts, const KolmogorovFactor& kf, const Word& w,
                         const CPMapSet& maps, double tol = kPsdTol);

/// Compression across models: with K1 <= K2 and A = d(K1)/d(K2), folding the
/// word through K2's lifted maps seeded with A instead of I reproduces the
/// iterates of K1: V2_x* B_w V2_y = (K1)_w(x,y). Verified against the direct
/// oracle. ErrNotDominated / ErrLiftInadmissible on failed preconditions.
PDKernel cross_model(const PDKernel& k1, const PDKernel& k2, const KolmogorovFactor& kf2,
                     const LiftSet& lifts2, const Word& w, const CPMapSet& maps,
                     double tol = kPsdTol);

}  // namespace cpkernel
