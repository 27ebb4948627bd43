#pragma once

// The partial Iwasawa cocycle B_theta and the Gromov product G_theta, both
// valued in a_theta, plus the phi-compositions used by the experiments.

#include "pslab/cartan.hpp"
#include "pslab/flags.hpp"
#include "pslab/matgroup.hpp"

namespace pslab {

/// omega_k(B_theta(A, F)) = log ||A f_1 ^ ... ^ A f_k|| for the orthonormal
/// frame of F; the remaining coordinates are fixed by alpha_k = 0 off theta.
WeylVector iwasawa(const ElementStack& a, const Flag& f);
WeylVector iwasawa(const Matrix& a, const Flag& f);

/// omega_k(G_theta(F, G)) = log |det(f_i(v_j))| with v an orthonormal frame of
/// F^k and f an orthonormal basis of the annihilator of G^{d-k}. Throws
/// NotTransverse when some determinant is below `tolerance`.
WeylVector gromovProduct(const Flag& f, const Flag& g, double tolerance = kDefaultTransversalityTolerance);

/// kappa_theta = p_theta o kappa and nu_theta = p_theta o nu.
WeylVector kappaTheta(const ElementStack& a, const ThetaSet& theta);
WeylVector nuTheta(const ElementStack& a, const ThetaSet& theta);

/// phi o B_theta, phi o G_theta, phi o kappa_theta, phi o nu_theta.
double phiIwasawa(const Functional& phi, const ElementStack& a, const Flag& f);
double phiGromov(const Functional& phi, const Flag& f, const Flag& g);
double phiKappa(const Functional& phi, const ElementStack& a, const ThetaSet& theta);
double phiJordan(const Functional& phi, const ElementStack& a, const ThetaSet& theta);

}  // namespace pslab
