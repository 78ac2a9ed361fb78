// The quadratic resolvent R(lambda) = (lambda^2 + B lambda + A)^{-1} over
// complex lambda grids: machine-precision identity checks (block resolvent,
// heat splitting, adjoint symmetry) and numerical surveys of the resolvent
// bounds in the weighted operator norms.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <array>
#include <string>
#include <vector>

#include "dwlab/operators.hpp"

namespace dwlab {

using Complex = std::complex<double>;

// Dense complex solve for R(lambda); throws if the pencil is numerically
// singular (solve residual above tolerance), reporting lambda.
Eigen::MatrixXcd quadratic_resolvent(const SelfAdjointOperator& a, const DampingOperator& b,
                                     Complex lambda);

// Full max-norm residual ||(la^2 + B la + A) R(la) - I||; the contract the
// probe inside quadratic_resolvent stands in for.
double resolvent_residual(const SelfAdjointOperator& a, const DampingOperator& b,
                          Complex lambda);

struct BlockResolventResult {
  Eigen::MatrixXcd block;          // 2n x 2n (lambda - generator)^{-1}
  double identity_residual = 0.0;  // max of left/right inverse residuals, relative
};

// Assembles [[R(la+B), R], [-RA, la R]] and (optionally) verifies it inverts
// (lambda - [[0,I],[-A,-B]]) from both sides.
BlockResolventResult block_resolvent(const SelfAdjointOperator& a, const DampingOperator& b,
                                     Complex lambda, bool check_identity = true);

struct SplittingResidual {
  double splitting = 0.0;    // R = (B la + A)^{-1} - la^2 (B la + A)^{-1} R
  double conjugation = 0.0;  // (B la + A)^{-1} = B^{-1/2}(la + tilde_A)^{-1}B^{-1/2}
  double commutation = 0.0;  // R and (B la + A)^{-1} commute
};

SplittingResidual verify_heat_splitting(const SelfAdjointOperator& a,
                                        const DampingOperator& b, Complex lambda);

// Discrete Cauchy-integral reconstruction of R at the circle's center from
// trapezoid samples on the circle; returns the relative max-norm residual.
double cauchy_integral_check(const SelfAdjointOperator& a, const DampingOperator& b,
                             Complex center, double radius, int nodes);

enum class LambdaRegion { imag_strip, real_sector, origin_annulus, custom };

struct LambdaGrid {
  std::vector<Complex> points;
  LambdaRegion region = LambdaRegion::custom;
  std::string describe;

  // Re(lambda) in (re_lo, re_hi], |Im(lambda)| in [im_lo, im_hi], Im != 0.
  static LambdaGrid imag_strip(double re_lo, double re_hi, double im_lo, double im_hi,
                               int n_re, int n_im);
  // Re(lambda) > |Im(lambda)| sector, radial/angular product grid.
  static LambdaGrid real_sector(double r_lo, double r_hi, int n_r, int n_angle);
  // Log-spaced radii, angles within the sector (Re > 0 or |Im| > delta*|Re|).
  static LambdaGrid origin_annuli(double r_lo, double r_hi, int n_r, int n_angle,
                                  double delta = 0.1);
};

enum class ResolventBound {
  l31_h_to_h,       // ||R|| <= 1/(|Im la| (c + 2 Re la)), proof constant
  l32_h_to_h,       // ||R|| <= 1/(c Re la) on Re la > |Im la|, proof constant
  l33_h_to_h1,      // O(||R||^{1/2} + (|la|^{1/2}+|la|) ||R||)
  l35_h1_to_h1,     // O((|la|^{-1/2}+1)||R||^{1/2} + (1+|la|)||R|| + |la|^{-1})
  p39_h0_to_h0,     // O(model depending on region)
  p39_h_to_h0,
  p39_h_to_h
};

struct BoundSurveyRow {
  Complex lambda;
  double measured = 0.0;
  double bound = 0.0;   // proof constant or O(.) model value
  double margin = 0.0;  // bound / measured
};

struct BoundSurvey {
  std::string lemma;
  std::vector<BoundSurveyRow> rows;
  double min_margin = 0.0;
  // sup over the grid of measured/model; the certified object for O(.) lemmas.
  double survey_constant = 0.0;
  bool proof_constant = false;  // margin >= 1 is a hard requirement
  bool pass = false;
};

BoundSurvey survey_lemma_bounds(const SelfAdjointOperator& a, const DampingOperator& b,
                                const LambdaGrid& grid, ResolventBound which);

// The three block-resolvent norms share one assembly per lambda; returns
// them in the order H0->H0, H->H0, H->H.
std::array<BoundSurvey, 3> survey_block_resolvent_bounds(const SelfAdjointOperator& a,
                                                const DampingOperator& b,
                                                const LambdaGrid& grid);

// Relative drift of the survey constants; the certification statistic for
// O(.) lemmas under grid refinement.
double survey_constant_drift(const BoundSurvey& coarse, const BoundSurvey& fine);

struct CutoffSurveyRow {
  double radius = 0.0;    // |lambda|, sampled on the positive real axis
  double measured = 0.0;  // ||chi R(lambda) chi||_{L2->L2}
};

struct CutoffSurvey {
  std::vector<CutoffSurveyRow> rows;
  double fitted_exponent = 0.0;   // slope of log measured vs log |lambda|
  // Slope of log(measured / log(1/|lambda|)) vs log |lambda|: the leftover
  // exponent after compensating a logarithmic growth law (near 0 when the
  // growth is genuinely logarithmic).
  double log_compensated_exponent = 0.0;
  double power_fit_residual = 0.0;
  double log_fit_residual = 0.0;  // residual of measured ~ a + b log(1/|la|)
};

// ||chi R(lambda) chi|| with R(lambda) = (P + lambda^2 + lambda c)^{-1} on
// near-origin radii (real positive lambda, inside the claimed region). When c
// is constant the pencil shares P's eigenbasis and the norm is computed by
// power iteration on matrix-vector products; otherwise dense solves are used.
CutoffSurvey cutoff_resolvent_survey(const SelfAdjointOperator& p, const DampingOperator& c,
                                     const Eigen::VectorXd& chi,
                                     const std::vector<double>& radii);

struct GccSurveyRow {
  Complex lambda;
  double resolvent_norm = 0.0;
  double scaled = 0.0;  // |lambda| * ||R(lambda)||
  bool exists = true;
};

struct GccResolventSurvey {
  std::vector<GccSurveyRow> near_origin;
  std::vector<GccSurveyRow> mid_frequency;  // lambda = i tau
  double near_origin_sup = 0.0;             // sup |la| ||R||
  double mid_frequency_sup = 0.0;           // sup ||R(i tau)||
  bool all_exist = false;
  std::string failure_note;
};

// Low-frequency bound |lambda| ||R(lambda)|| = O(1) and middle-frequency
// invertibility on the imaginary axis, for damping allowed to vanish on a
// compact set (and for the sign-indefinite perturbation). Failures are
// reported as counterexample rows, not thrown.
GccResolventSurvey gcc_resolvent_survey(const SelfAdjointOperator& p,
                                        const DampingOperator& a,
                                        const std::vector<Complex>& near_origin,
                                        const std::vector<double>& mid_taus);

// Largest singular value; exact SVD up to 512 rows, power iteration above.
double operator_norm_l2(const Eigen::MatrixXcd& m, double tol = 1e-6, int max_iter = 500);

}  // namespace dwlab
