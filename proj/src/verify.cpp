#include "saddle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle/errors.hpp"

namespace saddle {

const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Converged: return "Converged";
    case OutcomeKind::Diverged: return "Diverged";
    case OutcomeKind::Cooperating: return "Cooperating";
  }
  return "?";
}

namespace {

double distance(const IterateState& s, const PointLimit& limit) {
  return norm(concat(s.x - limit.x, s.y - limit.y));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& v) {
  const double n = static_cast<double>(t.size());
  double mt = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    mv += v[i];
  }
  mt /= n;
  mv /= n;
  double stt = 0.0, stv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    stv += (t[i] - mt) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  LineFit f;
  f.slope = stt > 0.0 ? stv / stt : 0.0;
  f.intercept = mv - f.slope * mt;
  f.r_squared = svv > 0.0 && stt > 0.0 ? (stv * stv) / (stt * svv) : 1.0;
  return f;
}

// Index of the first recorded state at or below the floor, or size().
std::size_t floor_index(const Trajectory& traj, const PointLimit& limit, double floor_abs) {
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    if (distance(traj.states[k], limit) <= floor_abs) return k;
  return traj.states.size();
}

double floor_abs(const PointLimit& limit, double floor) { return floor * std::max(1.0, norm(concat(limit.x, limit.y))); }

}  // namespace

RateFit estimate_rate(const Trajectory& traj, const PointLimit& limit, double floor) {
  if (traj.stop_reason == StopReason::Diverged) throw Error(ErrorKind::NotConverged, "trajectory diverged");
  const double fa = floor_abs(limit, floor);
  const std::size_t kf = floor_index(traj, limit, fa);
  const std::size_t t_end = kf < traj.states.size() ? traj.steps[kf] : traj.steps.back() + 1;
  const auto t_begin = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(t_end)));
  std::vector<double> ts, logs;
  for (std::size_t k = 0; k < kf; ++k) {
    if (traj.steps[k] < t_begin) continue;
    const double d = distance(traj.states[k], limit);
    if (!(d > 0.0)) continue;
    ts.push_back(static_cast<double>(traj.steps[k]));
    logs.push_back(std::log(d));
  }
  if (ts.size() < 10) throw Error(ErrorKind::InsufficientData, "fewer than 10 points above the floor");
  const LineFit f = fit_line(ts, logs);
  RateFit out;
  out.fitted_ratio = std::exp(f.slope);
  out.r_squared = f.r_squared;
  out.window_begin = static_cast<std::size_t>(ts.front());
  out.window_end = static_cast<std::size_t>(ts.back());
  out.points = ts.size();
  return out;
}

OutcomeClass classify(const Trajectory& traj, const BilinearGame& game, double coop_cap) {
  OutcomeClass out;
  // Largest real root of S*(mu) for the largest positive eigenvalue of B^T A.
  double mu_pos = 0.0;
  for (Complex z : eig_values_raw(game.B.transpose() * game.A))
    if (std::abs(z.imag()) <= 1e-10 * (1.0 + std::abs(z)) && z.real() > mu_pos) mu_pos = z.real();
  if (mu_pos > 0.0) {
    const double en = traj.eta * std::sqrt(mu_pos);
    const double top = 0.5 * (1.0 + 2.0 * en + std::sqrt(1.0 + 4.0 * en * en));
    out.expected_growth = top * top;
  }

  if (traj.stop_reason == StopReason::Converged) {
    out.kind = OutcomeKind::Converged;
    out.limit = PointLimit{traj.final_state().x, traj.final_state().y};
    out.evidence = "step criterion met at t=" + std::to_string(traj.steps.back());
    return out;
  }

  const std::size_t count = std::min<std::size_t>(50, traj.states.size());
  const std::size_t first = traj.states.size() - count;
  std::vector<double> ts, l1, l2;
  bool positive = count >= 2;
  for (std::size_t k = first; k < traj.states.size() && positive; ++k) {
    const IterateState& s = traj.states[k];
    if (!all_finite(s.x) || !all_finite(s.y)) {
      positive = false;
      break;
    }
    const Payoffs pay = payoffs(game, s.x, s.y);
    if (!(pay.g1 > 0.0) || !(pay.g2 > 0.0) || !std::isfinite(pay.g1) || !std::isfinite(pay.g2)) {
      positive = false;
      break;
    }
    ts.push_back(static_cast<double>(traj.steps[k]));
    l1.push_back(std::log(pay.g1));
    l2.push_back(std::log(pay.g2));
  }
  if (positive) {
    const Payoffs last = payoffs(game, traj.final_state().x, traj.final_state().y);
    const double s1 = fit_line(ts, l1).slope;
    const double s2 = fit_line(ts, l2).slope;
    if (last.g1 > coop_cap && last.g2 > coop_cap && s1 > 0.0 && s2 > 0.0) {
      out.kind = OutcomeKind::Cooperating;
      out.growth_ratio = std::exp(std::min(s1, s2));
      out.evidence = "both payoffs above " + format_double(coop_cap) + " and increasing";
      return out;
    }
  }
  out.kind = OutcomeKind::Diverged;
  out.evidence = std::string("stopped with ") + to_string(traj.stop_reason) + " without meeting the step criterion";
  return out;
}

BoundCheck check_bound(const Trajectory& traj, const SpectralReport& report, double D, const PointLimit& limit,
                       double floor) {
  if (!report.convergent()) throw Error(ErrorKind::RegimeWithoutConstant, "report is not in a convergent regime");
  BoundCheck out;
  const double fa = floor_abs(limit, floor);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    if (distance(traj.states[k], limit) > fa) idx.push_back(k);

  if (report.C) {
    out.lambda_used = report.lambda_max;
    out.constant_used = *report.C;
  } else {
    out.lambda_used = report.lambda_max + 0.01;
    out.constant_fitted = true;
    const std::size_t t_last = idx.empty() ? 0 : traj.steps[idx.back()];
    double c = 0.0;
    for (std::size_t k : idx) {
      if (traj.steps[k] > t_last / 2) break;
      const double env = D * std::pow(out.lambda_used, static_cast<double>(traj.steps[k]));
      if (env > 0.0) c = std::max(c, distance(traj.states[k], limit) / env);
    }
    out.constant_used = c;
  }

  out.holds = true;
  for (std::size_t k : idx) {
    const double d = distance(traj.states[k], limit);
    const double env = out.constant_used * D * std::pow(out.lambda_used, static_cast<double>(traj.steps[k]));
    if (d > env + 1e-9) out.holds = false;
    out.worst_ratio = std::max(out.worst_ratio, env > 0.0 ? d / env : std::numeric_limits<double>::infinity());
  }
  out.points = idx.size();
  return out;
}

OracleReport reconcile_multisets(const std::vector<Complex>& closed_form, const std::vector<Complex>& oracle) {
  OracleReport out;
  out.closed_form = closed_form;
  out.oracle = oracle;
  auto by_re_im = [](Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
  std::sort(out.closed_form.begin(), out.closed_form.end(), by_re_im);
  std::sort(out.oracle.begin(), out.oracle.end(), by_re_im);
  out.sizes_match = out.closed_form.size() == out.oracle.size();
  if (!out.sizes_match) {
    out.max_distance = std::numeric_limits<double>::infinity();
    return out;
  }
  std::vector<bool> used(out.oracle.size(), false);
  for (Complex z : out.closed_form) {
    std::size_t best = out.oracle.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < out.oracle.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - out.oracle[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    out.max_distance = std::max(out.max_distance, best_d);
  }
  return out;
}

OracleReport oracle_reconcile(const BilinearGame& game, double eta) {
  return reconcile_multisets(lambda_spectrum(game, eta).expanded(),
                             eig_complex(companion_matrix(game, eta), 1e-8).expanded());
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void VerificationReport::add(std::string name, bool pass, double measured, double tolerance, std::string detail) {
  checks.push_back({std::move(name), pass, measured, tolerance, std::move(detail)});
}

}  // namespace saddle
