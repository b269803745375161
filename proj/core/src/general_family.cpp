#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "solsurf/error.hpp"
#include "solsurf/families.hpp"

namespace solsurf {
namespace {

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double padding(double lo, double hi) { return 0.05 * (hi - lo) + 0.02; }

double sample(double a, double b, int i, int n) {
  if (n == 1) return 0.5 * (a + b);
  return i + 1 == n ? b : a + (b - a) * i / (n - 1);
}

bool is_sign(int s) { return s == 1 || s == -1; }

// Fourth-order central difference, Richardson-extrapolated to sixth order.
double d_du(const numerics::RealFn& f, double u) {
  constexpr double h = 5e-4;
  const double fine = numerics::fd_derivative(f, u, h, 4);
  const double coarse = numerics::fd_derivative(f, u, 2.0 * h, 4);
  return (16.0 * fine - coarse) / 15.0;
}

}  // namespace

void GeneralFamilyParams::validate() const {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
    throw DomainError("general family: theta must lie in (0, pi/2)");
  }
  if (!is_sign(sign) || (gamma1_sign && !is_sign(*gamma1_sign))) {
    throw DomainError("general family: signs must be +1 or -1");
  }
  if (!(domain.u1 > domain.u0) || !(domain.v1 > domain.v0)) {
    throw DomainError("general family: empty parameter domain");
  }
  if (!std::isfinite(psi0) || !std::isfinite(v_baseline)) {
    throw DomainError("general family: psi0 and the v baseline must be finite");
  }
  if (knots < 8) throw DomainError("general family: at least 8 table knots required");
}

double AlphaValues::alpha() const { return std::atan2(sin_alpha, cos_alpha); }

struct GeneralFamily::State {
  GeneralFamilyParams p;
  double c = 0.0;
  double s = 0.0;
  int sign1 = 1;
  double u_star = 0.0;
  numerics::CumulativePrimitive I;  // int_{u*}^{u} cosh^{1/2}(ubar)
  numerics::CumulativePrimitive J;  // int_{u*}^{u} cosh^{-3/2}(ubar)
  numerics::CumulativePrimitive X;  // int xi e^{-zeta}
  numerics::CumulativePrimitive Y;  // int xi e^{zeta}

  double ubar(double u) const { return 2.0 * u * c + p.psi0; }
};

GeneralFamily::GeneralFamily(GeneralFamilyParams params) {
  params.validate();
  auto st = std::make_shared<State>();
  st->c = std::cos(params.theta);
  st->s = std::sin(params.theta);
  st->sign1 = params.gamma1_sign.value_or(params.sign);
  st->u_star = -params.psi0 / (2.0 * st->c);

  const auto& d = params.domain;
  const double pu = padding(d.u0, d.u1);
  const double ulo = std::min(d.u0 - pu, st->u_star - 0.01);
  const double uhi = std::max(d.u1 + pu, st->u_star + 0.01);
  const double pv = padding(d.v0, d.v1);
  const double vlo = std::min(d.v0 - pv, params.v_baseline - 0.01);
  const double vhi = std::max(d.v1 + pv, params.v_baseline + 0.01);

  const double c = st->c;
  const double psi0 = params.psi0;
  st->I = numerics::CumulativePrimitive(
      [=](double u) { return std::sqrt(std::cosh(2.0 * u * c + psi0)); }, ulo, uhi, st->u_star,
      params.knots, params.quadrature);
  st->J = numerics::CumulativePrimitive(
      [=](double u) { return std::pow(std::cosh(2.0 * u * c + psi0), -1.5); }, ulo, uhi,
      st->u_star, params.knots, params.quadrature);
  const ScalarFunction zeta = params.zeta;
  const ScalarFunction xi = params.xi;
  st->X = numerics::CumulativePrimitive([=](double v) { return xi(v) * std::exp(-zeta(v)); },
                                        vlo, vhi, params.v_baseline, params.knots,
                                        params.quadrature);
  st->Y = numerics::CumulativePrimitive([=](double v) { return xi(v) * std::exp(zeta(v)); },
                                        vlo, vhi, params.v_baseline, params.knots,
                                        params.quadrature);
  st->p = std::move(params);
  state_ = std::move(st);
}

const GeneralFamilyParams& GeneralFamily::params() const { return state_->p; }
double GeneralFamily::ubar(double u) const { return state_->ubar(u); }
double GeneralFamily::u_star() const { return state_->u_star; }

AlphaValues GeneralFamily::alpha(double u) const {
  const double ub = ubar(u);
  return {std::tanh(ub), state_->p.sign / std::cosh(ub)};
}

double GeneralFamily::primitive_I(double u) const { return state_->I(u); }
double GeneralFamily::primitive_J(double u) const { return state_->J(u); }

Point3 GeneralFamily::gamma1(double v) const {
  const State& st = *state_;
  return {st.s * st.X(v), st.sign1 * st.c * st.Y(v), st.p.zeta(v)};
}

Point3 GeneralFamily::gamma2(double u) const {
  const State& st = *state_;
  return {st.s * st.I(u), st.p.sign * st.c * st.J(u), -0.5 * log_cosh(st.ubar(u))};
}

Eigen::Vector3d GeneralFamily::gamma2_velocity(double u) const {
  const State& st = *state_;
  const double ub = st.ubar(u);
  const double ch = std::cosh(ub);
  return {st.s * std::sqrt(ch), st.p.sign * st.c * std::pow(ch, -1.5), -st.c * std::tanh(ub)};
}

ParamSurface GeneralFamily::surface() const {
  auto st = state_;
  const GeneralFamily self = *this;
  ParamSurface out;
  std::ostringstream os;
  os.precision(6);
  os << "general(theta=" << st->p.theta << ",psi0=" << st->p.psi0 << ",sign=" << st->p.sign;
  if (st->p.gamma1_sign) os << ",gamma1_sign=" << *st->p.gamma1_sign;
  os << ")";
  out.name = os.str();
  out.domain = st->p.domain;
  out.map = [self](double u, double v) { return group_mul(self.gamma1(v), self.gamma2(u)); };
  out.partials = [st](double u, double v) {
    const double c = st->c;
    const double s = st->s;
    const double sg = st->p.sign;
    const double s1 = st->sign1;
    const double ub = st->ubar(u);
    const double C = std::cosh(ub);
    const double S = std::sinh(ub);
    const double rC = std::sqrt(C);
    const double I = st->I(u);
    const double J = st->J(u);
    const double z = st->p.zeta(v);
    const double z1 = st->p.zeta.d1(v);
    const double z2 = st->p.zeta.d2(v);
    const double x = st->p.xi(v);
    const double x1 = st->p.xi.d1(v);
    const double em = std::exp(-z);
    const double ep = std::exp(z);

    SurfacePartials d;
    d.fu = {s * em * rC, sg * c * ep / (C * rC), -c * std::tanh(ub)};
    d.fv = {s * em * (x - z1 * I), s1 * c * x * ep + sg * c * z1 * ep * J, z1};
    d.fuu = {s * c * em * S / rC, -3.0 * sg * c * c * ep * S / (C * C * rC), -2.0 * c * c / (C * C)};
    d.fuv = {-s * z1 * em * rC, sg * c * z1 * ep / (C * rC), 0.0};
    d.fvv = {s * em * (x1 - x * z1) + s * em * (z1 * z1 - z2) * I,
             s1 * c * (x1 + x * z1) * ep + sg * c * ep * (z2 + z1 * z1) * J, z2};
    return d;
  };
  return out;
}

AdaptedFrame GeneralFamily::adapted_frame(double u) const {
  const AlphaValues a = alpha(u);
  return AdaptedFrame::make(state_->p.theta, a.sin_alpha, a.cos_alpha);
}

CoefficientFields GeneralFamily::coefficient_fields(double u, double v) const {
  const State& st = *state_;
  const double ub = st.ubar(u);
  const double C = std::cosh(ub);
  const double S = std::sinh(ub);
  const double rC = std::sqrt(C);
  const double z1 = st.p.zeta.d1(v);
  const double w = -z1 * st.I(u) + st.p.xi(v);
  return {w / rC, st.p.sign * (st.c * S / rC * w + z1 * C)};
}

PBranch GeneralFamily::natural_branch() const {
  const State& st = *state_;
  if (st.p.zeta.is_constant()) return {0, ScalarFunction::constant(0.0)};
  const ScalarFunction zeta = st.p.zeta;
  const ScalarFunction xi = st.p.xi;
  return {1, ScalarFunction::from_callables([=](double v) { return xi(v) / zeta.d1(v); },
                                            nullptr, nullptr, "xi/zeta'")};
}

double GeneralFamily::p(const PBranch& branch, double u, double v) const {
  const State& st = *state_;
  const double ub = st.ubar(u);
  const double C = std::cosh(ub);
  const double S = std::sinh(ub);
  double denom = st.c * S;
  if (branch.eps == 0) {
    if (std::abs(ub) < 1e-12) {
      throw SingularityError("p: eps = 0 branch is singular at ubar = 0", u, v);
    }
  } else if (branch.eps == 1) {
    const double lam = branch.lambda(v);
    if (std::isnan(lam)) throw SingularityError("p: Lambda is undefined", u, v);
    // Lambda = +-inf is the eps = 0 limit.
    if (std::isfinite(lam)) {
      const double w = -st.I(u) + lam;
      if (w == 0.0) return 0.0;
      denom += C * std::sqrt(C) / w;
    }
  } else {
    throw DomainError("p: eps must be 0 or 1");
  }
  const double out = st.p.sign / denom;
  if (denom == 0.0 || !std::isfinite(out)) {
    throw SingularityError("p: vanishing denominator", u, v);
  }
  return out;
}

double GeneralFamily::sigma(double u, double v) const {
  const State& st = *state_;
  const AlphaValues a = alpha(u);
  const double pv = p(natural_branch(), u, v);
  return st.s * a.sin_alpha + pv * std::sin(2.0 * st.p.theta) * a.cos_alpha;
}

numerics::Interval GeneralFamily::u_table_range() const {
  return {state_->I.lo(), state_->I.hi()};
}
numerics::Interval GeneralFamily::v_table_range() const {
  return {state_->X.lo(), state_->X.hi()};
}

AlphaValues alpha_general(const GeneralFamily& fam, double u) { return fam.alpha(u); }
double primitive_I(const GeneralFamily& fam, double u) { return fam.primitive_I(u); }
double primitive_J(const GeneralFamily& fam, double u) { return fam.primitive_J(u); }
Point3 gamma1(const GeneralFamily& fam, double v) { return fam.gamma1(v); }
Point3 gamma2(const GeneralFamily& fam, double u) { return fam.gamma2(u); }
ParamSurface surface_general(const GeneralFamilyParams& params) {
  return GeneralFamily(params).surface();
}
double p_solution(const GeneralFamily& fam, const PBranch& branch, double u, double v) {
  return fam.p(branch, u, v);
}
double sigma_closed_form(const GeneralFamily& fam, double u, double v) { return fam.sigma(u, v); }
CoefficientFields coefficient_fields_ab(const GeneralFamily& fam, double u, double v) {
  return fam.coefficient_fields(u, v);
}

// --- Field equations -----------------------------------------------------------

double pde_p_residual(const GeneralFamily& fam, const PBranch& branch, double u, double v) {
  const double c = std::cos(fam.params().theta);
  const AlphaValues a = fam.alpha(u);
  const double pv = fam.p(branch, u, v);
  const double pu =
      d_du([&](double t) { return fam.p(branch, t, v); }, u);
  return std::abs(pu + a.cos_alpha + pv * c * a.sin_alpha +
                  2.0 * pv * pv * c * c * a.cos_alpha);
}

std::vector<Residual> field_equation_residuals(const GeneralFamily& fam, const EvalWindow& w,
                                               int rk4_steps) {
  enum {
    kAlphaA, kAlphaB, kPdeSigma, kSigmaU, kPdeP, kCoeffA, kCoeffB, kM12, kFrame,
    kSigmaMeasured, kH11, kH12, kRk4, kCount
  };
  std::vector<Residual> out{{"alpha_cond_a"}, {"alpha_cond_b"},  {"pde_sigma"},
                            {"sigma_u"},      {"pde_p"},         {"coeff_system_a"},
                            {"coeff_system_b"},   {"m12"},           {"frame_decomposition"},
                            {"sigma_measured"}, {"h11"},         {"h12"},
                            {"rk4_sigma_u"}};
  static_assert(kCount == 13);
  auto track = [&](int k, double r, double u, double v) {
    Residual& res = out[static_cast<std::size_t>(k)];
    if (std::isnan(r) || r > res.max_residual) {
      res.max_residual = r;
      res.at_u = u;
      res.at_v = v;
    }
  };

  const GeneralFamilyParams& prm = fam.params();
  const double th = prm.theta;
  const double c = std::cos(th);
  const double s = std::sin(th);
  const double cot = c / s;
  const PBranch branch = fam.natural_branch();
  const ParamSurface surf = fam.surface();

  for (int k = 0; k < w.nv; ++k) {
    const double v = sample(w.v0, w.v1, k, w.nv);
    for (int i = 0; i < w.nu; ++i) {
      const double u = sample(w.u0, w.u1, i, w.nu);
      const AlphaValues al = fam.alpha(u);
      const double sa = al.sin_alpha;
      const double ca = al.cos_alpha;
      const double ub = fam.ubar(u);

      const double alpha_u =
          d_du([&](double t) { return fam.alpha(t).alpha(); }, u);
      track(kAlphaA, std::abs(alpha_u - 2.0 * c * ca), u, v);

      const double sg = fam.sigma(u, v);
      const double sg_u =
          d_du([&](double t) { return fam.sigma(t, v); }, u);
      track(kPdeSigma, std::abs(sg_u + sg * c * sa + sg * sg * cot - 2.0 * s * c * sa * sa), u, v);
      track(kSigmaU, std::abs(sg_u + cot * (sg + 2.0 * sa * s) * (sg - sa * s)), u, v);
      track(kPdeP, pde_p_residual(fam, branch, u, v), u, v);

      const CoefficientFields ab = fam.coefficient_fields(u, v);
      const double a_u = d_du([&](double t) { return fam.coefficient_fields(t, v).a; }, u);
      const double b_u = d_du([&](double t) { return fam.coefficient_fields(t, v).b; }, u);
      track(kCoeffA, std::abs(a_u + ab.b * ca), u, v);
      track(kCoeffB, std::abs(b_u - ab.b * sg * cot), u, v);
      track(kM12, std::abs(prm.zeta.d1(v) + a_u + ab.a * c * std::tanh(ub)), u, v);

      // Geometry of the actual immersion, from its analytic partials.
      const SurfacePartials d = surf.partials(u, v);
      JetData j;
      j.point = surf.map(u, v);
      j.fu = TangentVec::at(j.point, d.fu);
      j.fv = TangentVec::at(j.point, d.fv);
      j.fuu = d.fuu;
      j.fuv = d.fuv;
      j.fvv = d.fvv;
      j.analytic = true;

      const AdaptedFrame fr = fam.adapted_frame(u);
      const FrameVec fu = to_frame(j.fu);
      const FrameVec fv = to_frame(j.fv);
      track(kFrame, std::max(norm(fu - fr.E1), norm(fv - (ab.a * fr.E1 + ab.b * fr.E2))), u, v);

      const FundamentalForms ff = second_form(j);
      const Eigen::Matrix2d first = ff.first();
      const TangentVec np = to_coords(j.point, fr.N);
      const double orient = inner(unit_normal(j), np) > 0.0 ? 1.0 : -1.0;
      const Eigen::Matrix2d second = orient * ff.second();
      auto coeffs = [&](const FrameVec& f) {
        const TangentVec t = to_coords(j.point, f);
        return Eigen::Vector2d(
            first.ldlt().solve(Eigen::Vector2d(inner(t, j.fu), inner(t, j.fv))));
      };
      const Eigen::Vector2d x1 = coeffs(fr.E1);
      const Eigen::Vector2d x2 = coeffs(fr.E2);

      const double alpha_v = 0.0;  // alpha depends on u alone
      const double e2_alpha = x2[0] * alpha_u + x2[1] * alpha_v;
      track(kAlphaB, std::abs(e2_alpha - (sa - sg / s)), u, v);
      track(kSigmaMeasured, std::abs(x2.dot(second * x2) - sg), u, v);
      track(kH11, std::abs(x1.dot(second * x1) + sa * s), u, v);
      track(kH12, std::abs(x1.dot(second * x2)), u, v);
    }

    // Independent oracle: integrate the sigma ODE along u and compare with the
    // closed form at every step.
    if (rk4_steps > 0) {
      auto rhs = [&](double t, double y) {
        const double sa = fam.alpha(t).sin_alpha;
        return -cot * (y + 2.0 * sa * s) * (y - sa * s);
      };
      const auto traj = numerics::ode_rk4(rhs, w.u0, fam.sigma(w.u0, v), w.u1, rk4_steps);
      for (std::size_t n = 0; n < traj.t.size(); ++n) {
        track(kRk4, std::abs(traj.y[n][0] - fam.sigma(traj.t[n], v)), traj.t[n], v);
      }
    }
  }
  return out;
}

// --- Reduction chain -------------------------------------------------------------

AppendixChain appendix_chain(const GeneralFamily& fam, const PBranch& branch,
                             const EvalWindow& w, int rk4_steps) {
  if (branch.eps != 0 && branch.eps != 1) throw DomainError("appendix_chain: eps must be 0 or 1");
  if (branch.eps == 0 && !(fam.ubar(w.u0) * fam.ubar(w.u1) > 0.0)) {
    throw DomainError("appendix_chain: eps = 0 window must not straddle ubar = 0");
  }
  const double c = std::cos(fam.params().theta);
  const int sign = fam.params().sign;

  struct Chain {
    double p, q, A, B;
  };
  auto chain = [&](double u, double v) {
    const double pt = sign * fam.p(branch, u, v);
    if (pt == 0.0) throw DomainError("appendix_chain: p vanishes in the window");
    const double ub = fam.ubar(u);
    const double C = std::cosh(ub);
    Chain ch;
    ch.p = pt;
    ch.q = 1.0 / pt;
    ch.A = ch.q - c * std::sinh(ub);
    ch.B = ch.A / (C * std::sqrt(C));
    return ch;
  };

  AppendixChain out;
  out.eps = branch.eps;
  auto bump = [](double& slot, double r) {
    if (std::isnan(r) || r > slot) slot = r;
  };

  for (int k = 0; k < w.nv; ++k) {
    const double v = sample(w.v0, w.v1, k, w.nv);
    for (int i = 0; i < w.nu; ++i) {
      const double u = sample(w.u0, w.u1, i, w.nu);
      const Chain ch = chain(u, v);
      out.samples.push_back({u, v, ch.p, ch.q, ch.A, ch.B});

      const double ub = fam.ubar(u);
      const double C = std::cosh(ub);
      const double cap = 1.0 / C;  // cos(alpha) on the positive branch
      const double sa = std::tanh(ub);
      const auto du = [&](auto pick) {
        return d_du([&](double t) { return pick(chain(t, v)); }, u);
      };
      const double q_u = du([](const Chain& x) { return x.q; });
      const double A_u = du([](const Chain& x) { return x.A; });
      const double B_u = du([](const Chain& x) { return x.B; });

      bump(out.q_ode, std::abs(q_u - ch.q * ch.q * cap - ch.q * c * sa - 2.0 * c * c * cap));
      bump(out.a_ode, std::abs(A_u - 3.0 * ch.A * c * sa - ch.A * ch.A / C));
      bump(out.a_ode_sinh_variant,
           std::abs(A_u - 3.0 * ch.A * c * std::sinh(ub) - ch.A * ch.A / C));
      bump(out.b_ode, std::abs(B_u - ch.B * ch.B * std::sqrt(C)));
      if (branch.eps == 1) {
        const double lam = branch.lambda(v);
        bump(out.inverse_b, std::abs(1.0 / ch.B - (-fam.primitive_I(u) + lam)));
      } else {
        bump(out.q_closed_form, std::abs(ch.q - c * std::sinh(ub)));
      }
      const double rebuilt = 1.0 / (ch.B * C * std::sqrt(C) + c * std::sinh(ub));
      bump(out.roundtrip, std::abs(rebuilt - ch.p));
    }

    if (rk4_steps > 0) {
      auto rhs = [&](double t, double y) { return y * y * std::sqrt(std::cosh(fam.ubar(t))); };
      const auto traj = numerics::ode_rk4(rhs, w.u0, chain(w.u0, v).B, w.u1, rk4_steps);
      for (std::size_t n = 0; n < traj.t.size(); ++n) {
        bump(out.rk4_b, std::abs(traj.y[n][0] - chain(traj.t[n], v).B));
      }
    }
  }
  return out;
}

}  // namespace solsurf
