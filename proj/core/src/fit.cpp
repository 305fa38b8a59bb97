#include <gsl/gsl_blas.h>
#include <gsl/gsl_multifit_nlinear.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "qrep/analysis.hpp"

namespace qrep {

namespace {

struct FitData {
  std::vector<double> log_n;   // ln n
  std::vector<double> npow;    // n (for recomputing n^delta)
  std::vector<double> log_pt;
  std::vector<double> y;       // ln p_L
  std::vector<double> sigma;
  bool pin_delta;
  double delta_pin;
};

// Model: y = lc + alpha * n^delta * (log_pt - lp0)
// theta = [lc, lp0, alpha (, delta)]
int fit_f(const gsl_vector* theta, void* params, gsl_vector* out) {
  const FitData& d = *static_cast<FitData*>(params);
  double lc = gsl_vector_get(theta, 0);
  double lp0 = gsl_vector_get(theta, 1);
  double alpha = gsl_vector_get(theta, 2);
  double delta = d.pin_delta ? d.delta_pin : gsl_vector_get(theta, 3);
  for (size_t i = 0; i < d.y.size(); ++i) {
    double nd = std::exp(delta * d.log_n[i]);
    double model = lc + alpha * nd * (d.log_pt[i] - lp0);
    gsl_vector_set(out, i, (model - d.y[i]) / d.sigma[i]);
  }
  return GSL_SUCCESS;
}

int fit_df(const gsl_vector* theta, void* params, gsl_matrix* jac) {
  const FitData& d = *static_cast<FitData*>(params);
  double lp0 = gsl_vector_get(theta, 1);
  double alpha = gsl_vector_get(theta, 2);
  double delta = d.pin_delta ? d.delta_pin : gsl_vector_get(theta, 3);
  for (size_t i = 0; i < d.y.size(); ++i) {
    double nd = std::exp(delta * d.log_n[i]);
    double dp = d.log_pt[i] - lp0;
    double w = 1.0 / d.sigma[i];
    gsl_matrix_set(jac, i, 0, w);
    gsl_matrix_set(jac, i, 1, -alpha * nd * w);
    gsl_matrix_set(jac, i, 2, nd * dp * w);
    if (!d.pin_delta)
      gsl_matrix_set(jac, i, 3, alpha * nd * d.log_n[i] * dp * w);
  }
  return GSL_SUCCESS;
}

}  // namespace

FitParams fit_threshold(const std::vector<SweepPoint>& table, const FitOptions& opts) {
  std::set<size_t> sizes;
  std::map<size_t, size_t> per_size;
  for (const SweepPoint& p : table) {
    sizes.insert(p.n);
    ++per_size[p.n];
  }
  if (sizes.size() < 2)
    throw std::invalid_argument("fit under-determined: need at least 2 code sizes");
  for (auto [n, cnt] : per_size)
    if (cnt < 3)
      throw std::invalid_argument("fit under-determined: need >= 3 grid points per size");
  for (const SweepPoint& p : table)
    if (!(p.p_l > 0.0))
      throw std::invalid_argument("fit requires nonzero p_L estimates at every point");

  FitData d;
  d.pin_delta = opts.pin_delta;
  d.delta_pin = opts.delta;
  double y_min = 0.0, y_max = -1e300;
  for (const SweepPoint& p : table) {
    d.log_n.push_back(std::log(double(p.n)));
    d.npow.push_back(double(p.n));
    d.log_pt.push_back(std::log(p.p_t));
    d.y.push_back(std::log(p.p_l));
    double width = p.ci_hi - p.ci_lo;
    d.sigma.push_back(width > 0.0 ? std::max(width / (2.0 * 1.959963984540054 * p.p_l), 1e-9)
                                  : 1.0);
    y_max = std::max(y_max, d.y.back());
    y_min = std::min(y_min, d.y.back());
  }

  size_t np = opts.pin_delta ? 3 : 4;
  size_t nobs = d.y.size();
  if (nobs <= np) throw std::invalid_argument("fewer points than parameters");

  gsl_multifit_nlinear_fdf fdf{};
  fdf.f = fit_f;
  fdf.df = fit_df;
  fdf.n = nobs;
  fdf.p = np;
  fdf.params = &d;

  const gsl_multifit_nlinear_type* type = gsl_multifit_nlinear_trust;
  gsl_multifit_nlinear_parameters fdf_params = gsl_multifit_nlinear_default_parameters();
  gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(type, &fdf_params, nobs, np);

  double max_pt = 0.0;
  for (const SweepPoint& p : table) max_pt = std::max(max_pt, p.p_t);

  FitParams best;
  double best_res = 1e300;
  // a few starting points; the surface is mild in log space
  for (double p0_init : {1.2 * max_pt, 0.09, 2.0 * max_pt}) {
    std::vector<double> init = {y_max, std::log(p0_init), 1.0};
    if (!opts.pin_delta) init.push_back(opts.delta);
    gsl_vector_view x0 = gsl_vector_view_array(init.data(), np);
    gsl_multifit_nlinear_init(&x0.vector, &fdf, w);
    int info = 0;
    gsl_multifit_nlinear_driver(400, 1e-12, 1e-12, 1e-12, nullptr, nullptr, &info, w);

    gsl_vector* theta = gsl_multifit_nlinear_position(w);
    gsl_vector* res = gsl_multifit_nlinear_residual(w);
    double rnorm = gsl_blas_dnrm2(res);
    if (rnorm < best_res) {
      best_res = rnorm;
      best.c = std::exp(gsl_vector_get(theta, 0));
      best.p0 = std::exp(gsl_vector_get(theta, 1));
      best.alpha = gsl_vector_get(theta, 2);
      best.delta = opts.pin_delta ? opts.delta : gsl_vector_get(theta, 3);
      best.delta_pinned = opts.pin_delta;
      best.residual_norm = rnorm;
      best.points_used = nobs;

      gsl_matrix* jac = gsl_multifit_nlinear_jac(w);
      gsl_matrix* cov = gsl_matrix_alloc(np, np);
      gsl_multifit_nlinear_covar(jac, 0.0, cov);
      double se_lc = std::sqrt(std::max(0.0, gsl_matrix_get(cov, 0, 0)));
      double se_lp0 = std::sqrt(std::max(0.0, gsl_matrix_get(cov, 1, 1)));
      best.se_c = best.c * se_lc;
      best.se_p0 = best.p0 * se_lp0;
      best.se_alpha = std::sqrt(std::max(0.0, gsl_matrix_get(cov, 2, 2)));
      best.se_delta = opts.pin_delta
                          ? 0.0
                          : std::sqrt(std::max(0.0, gsl_matrix_get(cov, 3, 3)));
      best.cov_max_abs = 0.0;
      for (size_t i = 0; i < np; ++i)
        for (size_t j = 0; j < np; ++j)
          best.cov_max_abs = std::max(best.cov_max_abs, std::fabs(gsl_matrix_get(cov, i, j)));
      gsl_matrix_free(cov);
    }
  }
  gsl_multifit_nlinear_free(w);

  if (!(best.p0 > 0.0 && best.p0 < 1.0))
    throw std::runtime_error("fit produced p0 outside (0,1)");
  if (!(best.alpha > 0.0))
    throw std::runtime_error("fit produced non-positive alpha");
  return best;
}

}  // namespace qrep
