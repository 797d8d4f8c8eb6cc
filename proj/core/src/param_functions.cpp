#include "hlab/param_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hlab/detail/format.hpp"

namespace hlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// alpha(t)-1 for the Li-Xu family: (sinh x cosh x - x)/sinh^2 x with x = K t.
// Direct evaluation cancels catastrophically below x ~ 1e-3; the series
// (2/3)x (1 - (2/15)x^2 + (2/105)x^4) has relative error O(x^6).
double li_xu_alpha_m1(double x) {
  if (x < 0.05) {
    const double x2 = x * x;
    return (2.0 / 3.0) * x * (1.0 - (2.0 / 15.0) * x2 + (2.0 / 105.0) * x2 * x2);
  }
  const double s = std::sinh(x);
  return (s * std::cosh(x) - x) / (s * s);
}

// d(alpha)/dx for Li-Xu equals 2 - 2 (alpha-1) coth x; series below.
double li_xu_dalpha_dx(double x) {
  if (x < 0.05) {
    const double x2 = x * x;
    return 2.0 * (1.0 / 3.0 - (2.0 / 15.0) * x2 + (2.0 / 63.0) * x2 * x2);
  }
  return 2.0 - 2.0 * li_xu_alpha_m1(x) / std::tanh(x);
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

std::string to_string(TripleFamily f) {
  switch (f) {
    case TripleFamily::LiYau: return "li_yau";
    case TripleFamily::Hamilton: return "hamilton";
    case TripleFamily::LiXu: return "li_xu";
    case TripleFamily::LinearLiXu: return "linear_li_xu";
    case TripleFamily::Custom: return "custom";
  }
  return "?";
}

std::string to_string(RatioKind k) {
  return k == RatioKind::GammaPlain ? "gamma_plain" : "gamma_alpha4";
}

ParamTriple ParamTriple::li_yau(double alpha_const, double theta, double K, int n) {
  if (!(alpha_const > 1.0))
    throw std::invalid_argument("li_yau: alpha must be > 1");
  if (!(theta > 0.0)) throw std::invalid_argument("li_yau: theta must be > 0");
  if (K < 0.0) throw std::invalid_argument("li_yau: K must be >= 0");
  if (n < 1) throw std::invalid_argument("li_yau: n must be >= 1");
  ParamTriple p;
  p.family_ = TripleFamily::LiYau;
  p.ratio_kind_ = RatioKind::GammaPlain;
  p.K_ = K;
  p.n_ = n;
  p.alpha_const_ = alpha_const;
  p.theta_ = theta;
  return p;
}

ParamTriple ParamTriple::hamilton(double K, int n) {
  if (!(K > 0.0)) throw std::invalid_argument("hamilton: K must be > 0");
  if (n < 1) throw std::invalid_argument("hamilton: n must be >= 1");
  ParamTriple p;
  p.family_ = TripleFamily::Hamilton;
  p.ratio_kind_ = RatioKind::GammaPlain;
  p.K_ = K;
  p.n_ = n;
  return p;
}

ParamTriple ParamTriple::li_xu(double K, int n) {
  if (!(K > 0.0)) throw std::invalid_argument("li_xu: K must be > 0");
  if (n < 1) throw std::invalid_argument("li_xu: n must be >= 1");
  ParamTriple p;
  p.family_ = TripleFamily::LiXu;
  p.ratio_kind_ = RatioKind::GammaAlpha4;
  p.K_ = K;
  p.n_ = n;
  return p;
}

ParamTriple ParamTriple::linear_li_xu(double mu, double K, int n) {
  if (!(K > 0.0)) throw std::invalid_argument("linear_li_xu: K must be > 0");
  if (n < 1) throw std::invalid_argument("linear_li_xu: n must be >= 1");
  ParamTriple p;
  p.family_ = TripleFamily::LinearLiXu;
  p.ratio_kind_ = RatioKind::GammaPlain;
  p.K_ = K;
  p.n_ = n;
  p.mu_ = mu;
  return p;
}

ParamTriple ParamTriple::custom(TimeFn alpha, TimeFn phi, TimeFn gamma,
                                TimeFn dalpha, TimeFn dphi, TimeFn dgamma,
                                double K, int n, RatioKind kind) {
  ParamTriple p;
  p.family_ = TripleFamily::Custom;
  p.ratio_kind_ = kind;
  p.K_ = K;
  p.n_ = n;
  p.f_alpha_ = std::move(alpha);
  p.f_phi_ = std::move(phi);
  p.f_gamma_ = std::move(gamma);
  p.f_dalpha_ = std::move(dalpha);
  p.f_dphi_ = std::move(dphi);
  p.f_dgamma_ = std::move(dgamma);
  return p;
}

double ParamTriple::domain_max() const {
  if (family_ == TripleFamily::Hamilton) return 1.0 / K_;  // 0 < K t <= 1
  return kInf;
}

void ParamTriple::require_domain(double t) const {
  if (!(t > 0.0))
    throw std::domain_error("ParamTriple: t must be > 0, got " + fmt17(t));
  if (t > domain_max() * (1.0 + 1e-12))
    throw std::domain_error("ParamTriple: t=" + fmt17(t) + " beyond domain max " +
                            fmt17(domain_max()) + " for " + name());
}

TripleValues ParamTriple::eval(double t) const {
  require_domain(t);
  const double n = static_cast<double>(n_);
  switch (family_) {
    case TripleFamily::LiYau: {
      const double a = alpha_const_;
      const double phi = a * n / t + n * K_ * a * a / (a - 1.0);
      const double dphi = -a * n / (t * t);
      const double gamma = std::pow(t, theta_);
      const double dgamma = theta_ * std::pow(t, theta_ - 1.0);
      return {a, phi, gamma, 0.0, dphi, dgamma};
    }
    case TripleFamily::Hamilton: {
      const double e2 = std::exp(2.0 * K_ * t);
      const double e4 = e2 * e2;
      return {e2,
              n / t * e4,
              t * e2,
              2.0 * K_ * e2,
              n * e4 * (4.0 * K_ / t - 1.0 / (t * t)),
              e2 * (1.0 + 2.0 * K_ * t)};
    }
    case TripleFamily::LiXu: {
      const double x = K_ * t;
      const double alpha = 1.0 + li_xu_alpha_m1(x);
      const double sh = std::sinh(x);
      const double phi = 2.0 * n * K_ * (1.0 + coth(x));
      const double dphi = -2.0 * n * K_ * K_ / (sh * sh);
      const double gamma = std::tanh(x);
      const double ch = std::cosh(x);
      const double dgamma = K_ / (ch * ch);
      return {alpha, phi, gamma, K_ * li_xu_dalpha_dx(x), dphi, dgamma};
    }
    case TripleFamily::LinearLiXu: {
      const double alpha = 1.0 + 2.0 * K_ * t;
      const double phi = n / t + n * K_ * (1.0 + 2.0 * K_ * t + mu_ * K_ * t);
      const double dphi = -n / (t * t) + n * K_ * K_ * (2.0 + mu_);
      return {alpha, phi, K_ * t, 2.0 * K_, dphi, K_};
    }
    case TripleFamily::Custom:
      return {f_alpha_(t), f_phi_(t), f_gamma_(t),
              f_dalpha_(t), f_dphi_(t), f_dgamma_(t)};
  }
  throw std::logic_error("ParamTriple: unknown family");
}

double ParamTriple::alpha_minus_one(double t) const {
  require_domain(t);
  switch (family_) {
    case TripleFamily::LiYau: return alpha_const_ - 1.0;
    case TripleFamily::Hamilton: return std::expm1(2.0 * K_ * t);
    case TripleFamily::LiXu: return li_xu_alpha_m1(K_ * t);
    case TripleFamily::LinearLiXu: return 2.0 * K_ * t;
    case TripleFamily::Custom: return f_alpha_(t) - 1.0;
  }
  throw std::logic_error("ParamTriple: unknown family");
}

double ParamTriple::c2_third_margin(double t) const {
  if (family_ == TripleFamily::LiYau) {
    // phi^2/n + alpha phi' = 2 n K a^3 / ((a-1) t) + n K^2 a^4 / (a-1)^2
    const double a = alpha_const_;
    const double n = static_cast<double>(n_);
    const double a_m1 = a - 1.0;
    return 2.0 * n * K_ * a * a * a / (a_m1 * t) +
           n * K_ * K_ * a * a * a * a / (a_m1 * a_m1);
  }
  const TripleValues v = eval(t);
  return v.phi * v.phi / static_cast<double>(n_) + v.alpha * v.dphi;
}

double ParamTriple::ratio_limit_origin() const {
  switch (family_) {
    case TripleFamily::LiYau:
      // gamma = t^theta vanishes while alpha-1 stays fixed.
      return 0.0;
    case TripleFamily::Hamilton:
      return 1.0 / (2.0 * K_);
    case TripleFamily::LiXu:
      // tanh(Kt) / ((2/3)Kt) -> 3/2 and alpha -> 1, both ratio kinds.
      return 1.5;
    case TripleFamily::LinearLiXu:
      return 0.5;
    case TripleFamily::Custom:
      return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ParamTriple::boundedness_ratio(double t) const {
  require_domain(t);
  if (t < 1e-12 && family_ != TripleFamily::Custom) return ratio_limit_origin();
  const TripleValues v = eval(t);
  const double am1 = alpha_minus_one(t);
  double r = v.gamma / am1;
  if (ratio_kind_ == RatioKind::GammaAlpha4) {
    const double a2 = v.alpha * v.alpha;
    r *= a2 * a2;
  }
  return r;
}

std::string ParamTriple::name() const {
  std::ostringstream os;
  os << to_string(family_);
  switch (family_) {
    case TripleFamily::LiYau:
      os << "(alpha=" << alpha_const_ << ",theta=" << theta_ << ")";
      break;
    case TripleFamily::LinearLiXu:
      os << "(mu=" << mu_ << ")";
      break;
    default:
      break;
  }
  os << "[K=" << K_ << ",n=" << n_ << "]";
  return os.str();
}

double ConditionReport::worst_margin() const {
  double w = kInf;
  for (const auto* v : {&m1, &m2, &m3, &c3})
    for (double x : *v) w = std::min(w, x);
  return w;
}

ConditionReport check_conditions(const ParamTriple& triple, double t_lo,
                                 double t_hi, int samples, double tol) {
  if (samples < 2) throw std::invalid_argument("check_conditions: samples >= 2");
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw std::domain_error("check_conditions: need 0 < t_lo < t_hi");
  if (tol < 0.0) throw std::invalid_argument("check_conditions: tol >= 0");
  t_hi = std::min(t_hi, triple.domain_max());
  if (!(t_hi > t_lo))
    throw std::domain_error("check_conditions: range outside triple domain");

  ConditionReport rep;
  rep.ratio_kind = triple.ratio_kind();
  rep.grid.reserve(samples);
  const double lr = std::log(t_hi / t_lo);
  for (int i = 0; i < samples; ++i) {
    // geometric grid; every family has a 1/t or coth(Kt) feature at t=0
    rep.grid.push_back(t_lo * std::exp(lr * i / (samples - 1)));
  }
  rep.grid.back() = t_hi;

  const double n = static_cast<double>(triple.dim());
  const double K = triple.curvature();
  bool margins_ok = true;
  bool gamma_monotone = true;
  bool alpha_monotone = true;
  double ratio_sup = -kInf;
  double alpha_sup = -kInf;
  for (double t : rep.grid) {
    const TripleValues v = triple.eval(t);
    const double two_phi_n = 2.0 * v.phi / n;
    const double drift = (two_phi_n - v.dalpha) / v.alpha;
    const double m1 = (two_phi_n - 2.0 * v.alpha * K) - drift;
    const double m2 = two_phi_n - v.dalpha;
    const double m3 = triple.c2_third_margin(t);
    const double c3 = -(v.dgamma / v.gamma - drift);
    const double ratio = triple.boundedness_ratio(t);
    rep.m1.push_back(m1);
    rep.m2.push_back(m2);
    rep.m3.push_back(m3);
    rep.c3.push_back(c3);
    rep.ratio.push_back(ratio);
    margins_ok = margins_ok && m1 >= -tol && m2 >= -tol && m3 >= -tol && c3 >= -tol;
    gamma_monotone = gamma_monotone && v.dgamma >= -tol;
    alpha_monotone = alpha_monotone && v.dalpha >= -tol;
    ratio_sup = std::max(ratio_sup, ratio);
    alpha_sup = std::max(alpha_sup, v.alpha);
  }
  rep.ratio_sup = ratio_sup;
  rep.gamma_nondecreasing = gamma_monotone;
  rep.alpha_ok = alpha_monotone || (std::isfinite(alpha_sup) && alpha_sup <= 1e6);
  rep.pass = margins_ok && std::isfinite(ratio_sup) && rep.gamma_nondecreasing &&
             rep.alpha_ok;
  return rep;
}

void ConditionReport::write_csv(std::ostream& os) const {
  os << "t,m1,m2,m3,c3,ratio\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << fmt17(grid[i]) << ',' << fmt17(m1[i]) << ',' << fmt17(m2[i]) << ','
       << fmt17(m3[i]) << ',' << fmt17(c3[i]) << ',' << fmt17(ratio[i]) << '\n';
  }
}

}  // namespace hlab
