#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hlab {

enum class TripleFamily { LiYau, Hamilton, LiXu, LinearLiXu, Custom };

/// Which boundedness ratio of system (6.2) a family is certified against.
enum class RatioKind { GammaPlain, GammaAlpha4 };

std::string to_string(TripleFamily f);
std::string to_string(RatioKind k);

/// One evaluation of the parameter functions and their first derivatives.
struct TripleValues {
  double alpha;
  double phi;
  double gamma;
  double dalpha;
  double dphi;
  double dgamma;
};

using TimeFn = std::function<double(double)>;

/// A parameter-function triple (alpha, phi, gamma) on (0, domain_max].
///
/// The four built-in families carry analytic derivatives and a stable
/// evaluation of alpha-1 (several ratios divide by it near t=0).
class ParamTriple {
public:
  static ParamTriple li_yau(double alpha_const, double theta, double K, int n);
  static ParamTriple hamilton(double K, int n);
  static ParamTriple li_xu(double K, int n);
  static ParamTriple linear_li_xu(double mu, double K, int n);
  /// Caller supplies all six functions; derivatives are trusted as given.
  static ParamTriple custom(TimeFn alpha, TimeFn phi, TimeFn gamma,
                            TimeFn dalpha, TimeFn dphi, TimeFn dgamma,
                            double K, int n,
                            RatioKind kind = RatioKind::GammaPlain);

  TripleValues eval(double t) const;

  /// Analytic alpha(t)-1, evaluated without cancellation near t=0.
  double alpha_minus_one(double t) const;

  /// phi^2/n + alpha phi', the third expression of (6.1).  The Li-Yau
  /// family uses the algebraically reduced form (its 1/t^2 terms cancel
  /// exactly, and the generic difference loses the sign at K=0).
  double c2_third_margin(double t) const;

  /// gamma/(alpha-1) or gamma*alpha^4/(alpha-1) depending on ratio_kind().
  /// Below t = 1e-12 the analytic t->0 limit is substituted (the direct
  /// quotient is 0/0 there in double precision).
  double boundedness_ratio(double t) const;

  /// Analytic t->0 limit of boundedness_ratio (NaN for custom triples).
  double ratio_limit_origin() const;

  RatioKind ratio_kind() const { return ratio_kind_; }
  TripleFamily family() const { return family_; }
  double curvature() const { return K_; }
  int dim() const { return n_; }
  double theta() const { return theta_; }
  double mu() const { return mu_; }

  /// Upper end of the validity interval (Hamilton: 1/K, else +inf).
  double domain_max() const;
  std::string name() const;

private:
  ParamTriple() = default;
  void require_domain(double t) const;

  TripleFamily family_ = TripleFamily::Custom;
  RatioKind ratio_kind_ = RatioKind::GammaPlain;
  double K_ = 0.0;
  int n_ = 1;
  double alpha_const_ = 2.0;  // Li-Yau
  double theta_ = 1.0;        // Li-Yau
  double mu_ = 0.25;          // linear Li-Xu
  TimeFn f_alpha_, f_phi_, f_gamma_, f_dalpha_, f_dphi_, f_dgamma_;
};

/// Margins of systems (6.1)/(6.2) sampled on a geometric grid.
/// m1..m3 are the three inequalities of (6.1) written as "expression >= 0";
/// c3 is -(gamma'/gamma - (2 phi/n - alpha')/alpha), so c3 >= 0 means the
/// decay condition holds.
struct ConditionReport {
  std::vector<double> grid;
  std::vector<double> m1, m2, m3;
  std::vector<double> c3;
  std::vector<double> ratio;
  RatioKind ratio_kind = RatioKind::GammaPlain;
  double ratio_sup = 0.0;
  bool gamma_nondecreasing = false;
  bool alpha_ok = false;
  bool pass = false;

  double worst_margin() const;
  std::string to_json() const;
  void write_csv(std::ostream& os) const;
};

/// Samples all inequalities of (6.1)/(6.2) on a geometric grid over
/// [t_lo, t_hi] (clipped to the triple's domain) and decides pass/fail.
ConditionReport check_conditions(const ParamTriple& triple, double t_lo,
                                 double t_hi, int samples, double tol = 1e-9);

}  // namespace hlab
