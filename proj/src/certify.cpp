#include "dws/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dws/errors.hpp"
#include "dws/solver.hpp"

namespace dws {

namespace {

constexpr double kUnitTol = 1e-10;
constexpr double kContractionSlack = 1e-9;
constexpr double kLowerBoundSlack = 1e-9;

}  // namespace

ZetaGamma zeta_gamma(std::span<const double> grad, double eta,
                     std::span<const std::size_t> violating) {
  ZetaGamma out;
  out.zeta.resize(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) out.zeta[i] = -grad[i];
  for (auto i : violating) {
    if (i >= grad.size()) throw InputError("violating index out of range");
    out.zeta[i] = -sign(grad[i]) * eta;
  }
  out.gamma.resize(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) out.gamma[i] = grad[i] + out.zeta[i];
  return out;
}

Certificate check_global(const Instance& inst, std::span<const double> x, double tol) {
  if (x.size() != inst.n()) throw InputError("solution length does not match instance");
  const Vec g = gradient(inst.a, inst.atb(), x, support(x));
  Certificate c;
  c.tolerance = tol;
  c.gamma.resize(x.size());
  std::vector<WeightedIndex> all;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double zeta = x[i] != 0.0 ? sign(x[i]) * inst.eta : -std::clamp(g[i], -inst.eta, inst.eta);
    c.gamma[i] = g[i] + zeta;
    const double v = std::abs(c.gamma[i]);
    c.max_violation = std::max(c.max_violation, v);
    if (v > 0.0) all.push_back({i, v});
  }
  const auto top = std::min<std::size_t>(5, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(top), all.end(),
                    [](const WeightedIndex& a, const WeightedIndex& b) {
                      return a.weight > b.weight || (a.weight == b.weight && a.index < b.index);
                    });
  c.worst.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(top));
  c.optimal = c.max_violation <= tol;
  return c;
}

std::vector<WeightedIndex> analysis_violating_set(std::span<const double> grad, double eta,
                                                  std::span<const double> x) {
  return violating_set(grad, eta, 0.0, support(x));
}

Vec conical_direction(std::span<const double> grad, std::span<const std::size_t> idx,
                      std::span<const double> coeffs, std::size_t n) {
  if (idx.size() != coeffs.size()) throw InputError("one coefficient per index required");
  Vec d(n, 0.0);
  double nn = 0.0;
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (coeffs[c] < 0.0) throw InputError("conical coefficients must be nonnegative");
    d.at(idx[c]) += -sign(grad[idx[c]]) * coeffs[c];
  }
  nn = norm2(d);
  if (!(nn > 0.0)) throw InputError("conical combination is zero");
  for (auto& v : d) v /= nn;
  return d;
}

LineMinimum line_minimizer(const Instance& inst, std::span<const double> x,
                           std::span<const double> n_dir) {
  const std::size_t n = inst.n();
  if (x.size() != n || n_dir.size() != n) throw InputError("line_minimizer: length mismatch");
  const Vec g = gradient(inst.a, inst.atb(), x, support(x));
  const auto e = analysis_violating_set(g, inst.eta, x);
  std::vector<char> in_e(n, 0);
  IndexList e_idx;
  for (const auto& wi : e) {
    in_e[wi.index] = 1;
    e_idx.push_back(wi.index);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (n_dir[i] == 0.0) continue;
    if (!in_e[i])
      throw InputError("direction has weight on coordinate " + std::to_string(i) + " outside E");
    if (n_dir[i] * sign(g[i]) > 0.0)
      throw InputError("direction coordinate " + std::to_string(i) + " has the ascent sign");
  }
  if (std::abs(norm2(n_dir) - 1.0) > kUnitTol) throw InputError("direction is not a unit vector");

  const ZetaGamma zg = zeta_gamma(g, inst.eta, e_idx);
  const Vec an = matvec(inst.a, n_dir);
  const double curv = dot(an, an);
  if (!(curv > 0.0)) throw NumericalError("direction in null space of A");
  const double slope = dot(zg.gamma, n_dir);

  LineMinimum out;
  out.t_star = -slope / curv;
  out.y.assign(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) out.y[i] += out.t_star * n_dir[i];
  out.f_x = objective(inst.a, inst.b, inst.eta, x);
  out.f_y = objective(inst.a, inst.b, inst.eta, out.y);
  out.gamma_dot_step = out.t_star * slope;
  return out;
}

DescentReport build_descent(std::span<const double> grad, double eta, std::size_t tau_next,
                            std::size_t s_est, std::span<const std::size_t> exclude,
                            std::span<const std::size_t> optimum_support) {
  if (tau_next < 2) throw InputError("build_descent needs tau_next >= 2");
  if (s_est < 1) throw InputError("build_descent needs s_est >= 1");
  IndexList excl(exclude.begin(), exclude.end());
  std::sort(excl.begin(), excl.end());
  const auto e = violating_set(grad, eta, 0.0, excl);
  if (e.size() < tau_next) throw InputError("build_descent needs |E| >= tau_next");

  DescentReport rep;
  const std::size_t n = grad.size();
  std::vector<char> in_e(n, 0), in_h(n, 0);
  for (const auto& wi : e) in_e[wi.index] = 1;
  for (std::size_t i = 0; i < tau_next; ++i) {
    rep.g_set.push_back(e[i].index);
    in_h[e[i].index] = 1;
  }
  rep.h_set = rep.g_set;
  std::size_t extra = 0;
  for (auto i : optimum_support) {
    if (i < n && in_e[i] && !in_h[i]) {
      in_h[i] = 1;
      rep.h_set.push_back(i);
      ++extra;
    }
  }

  // |gamma_i| = |g_i| - eta on E; -gamma restricted to H is the target.
  auto gamma_abs = [&](std::size_t i) { return std::abs(grad[i]) - eta; };
  double gh = 0.0;
  for (auto i : rep.h_set) gh += gamma_abs(i) * gamma_abs(i);
  gh = std::sqrt(gh);

  const double tau = static_cast<double>(tau_next), s = static_cast<double>(s_est);
  const double ln_tau = std::log(tau);
  rep.cos_bound_required = std::sqrt(tau / (4.0 * (s + tau) * ln_tau));
  const double per_axis = 1.0 / std::sqrt(2.0 * (s + tau) * ln_tau);
  rep.premise_holds = extra <= s_est;
  for (auto i : rep.g_set)
    if (gamma_abs(i) / gh < per_axis) rep.premise_holds = false;

  std::size_t width = 1;
  while (2 * width <= tau_next) width *= 2;

  // Stage l holds width/2^l blocks of 2^l consecutive axes, each the uniform
  // unit combination of its block. Combined vectors within pi/3 of the target
  // end the construction; the best vector seen is returned.
  auto block_cos = [&](std::size_t begin, std::size_t len) {
    double sum = 0.0;
    for (std::size_t i = begin; i < begin + len; ++i) sum += gamma_abs(rep.g_set[i]);
    return sum / (std::sqrt(static_cast<double>(len)) * gh);
  };
  std::size_t chosen_begin = 0, chosen_len = 1;
  double best = -1.0;
  bool done = false;
  for (std::size_t len = 1, stage = 0; len <= width && !done; len *= 2, ++stage) {
    for (std::size_t b = 0; b + len <= width; b += len) {
      const double c = block_cos(b, len);
      if (c > best) {
        best = c;
        chosen_begin = b;
        chosen_len = len;
        rep.stage = stage;
      }
      if (stage > 0 && c >= 0.5) {
        done = true;
        break;
      }
    }
  }

  rep.direction.assign(n, 0.0);
  const double coef = 1.0 / std::sqrt(static_cast<double>(chosen_len));
  double achieved = 0.0;
  for (std::size_t i = chosen_begin; i < chosen_begin + chosen_len; ++i) {
    const std::size_t j = rep.g_set[i];
    rep.direction[j] = -sign(grad[j]) * coef;
    achieved += coef * gamma_abs(j);
  }
  rep.cos_achieved = achieved / gh;
  return rep;
}

void attach_line_search(DescentReport& report, const Instance& inst, std::span<const double> x) {
  const LineMinimum lm = line_minimizer(inst, x, report.direction);
  report.line_min_t = lm.t_star;
  report.predicted_gain = lm.f_x - lm.f_y;
}

std::vector<ContractionRow> contraction_check(const Instance& inst, const RunResult& run,
                                              std::span<const double> x_star, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
  const double f_star = objective(inst.a, inst.b, inst.eta, x_star);
  const double s = static_cast<double>(support(x_star).size());
  std::vector<ContractionRow> rows;
  const auto& tr = run.trace;
  for (std::size_t idx = 0; idx < tr.size(); ++idx) {
    ContractionRow row;
    row.r = tr[idx].r;
    if (idx + 1 >= tr.size()) {
      row.status = ContractionStatus::skipped_last;
      rows.push_back(row);
      continue;
    }
    if (tr[idx].x.size() != inst.n())
      throw InputError("contraction_check needs a trace recorded with iterates");
    const double tau = static_cast<double>(tr[idx].tau_next);
    if (tr[idx].tau_next < 2) {
      row.status = ContractionStatus::skipped_small_tau;
      rows.push_back(row);
      continue;
    }
    double dist2 = 0.0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
      const double d = x_star[i] - tr[idx].x[i];
      dist2 += d * d;
    }
    const double f_r = tr[idx].objective, f_next = tr[idx + 1].objective;
    if (!(f_r > f_star + eps * dist2)) {
      row.status = ContractionStatus::skipped_premise;
      rows.push_back(row);
      continue;
    }
    row.status = ContractionStatus::checked;
    row.ratio = (f_next - f_star) / (f_r - f_star);
    row.bound = 1.0 - eps * tau / (8.0 * (s + tau) * std::log(tau));
    row.passed = row.ratio <= row.bound + kContractionSlack;
    rows.push_back(row);
  }
  return rows;
}

LowerBoundCheck optimum_lower_bound_check(const Instance& inst, std::span<const double> x_star) {
  LowerBoundCheck c;
  c.bound = inst.eta * norm2(inst.b) / 4.0;
  if (support(x_star).empty()) {
    c.skipped = true;
    return c;
  }
  c.value = objective(inst.a, inst.b, inst.eta, x_star);
  c.passed = c.value >= c.bound - kLowerBoundSlack;
  return c;
}

}  // namespace dws
