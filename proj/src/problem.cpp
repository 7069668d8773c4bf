#include "bpsv/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/kernels.hpp"
#include "bpsv/spectral.hpp"

namespace bpsv {
namespace {

constexpr double kPi = std::numbers::pi;

template <class Grid>
void require_inside(const std::vector<Point>& pts, const Grid& g, const char* which) {
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (!g.contains(pts[s])) {
      std::ostringstream msg;
      msg << which << " point " << s << " (" << pts[s].x << ", " << pts[s].y
          << ") lies outside the domain";
      throw Error(ErrorKind::PointOutsideDomain, msg.str());
    }
  }
}

double core_profile(double r2, double tau) {
  const double d = tau + r2;
  return 4.0 * tau / (d * d);
}

double wrap(double d, double L) { return d - L * std::floor(d / L + 0.5); }

ScalarField neutralized(const TorusGrid& g, const std::vector<Point>& pts, double tau) {
  ScalarField src(g);
  for (const Point& p : pts) {
    const ScalarField core = periodized_core(g, p, tau);
    for (std::size_t k = 0; k < src.size(); ++k) src[k] += core[k];
  }
  const double m = mean(g, src);
  for (std::size_t k = 0; k < src.size(); ++k) src[k] -= m;
  return src;
}

}  // namespace

double default_tau(const TorusGrid& g) {
  const double h = std::max(g.dx(), g.dy());
  return 9.0 * h * h;
}

double default_tau(const PlaneGrid& g) { return 9.0 * g.h() * g.h(); }

ThresholdReport check_existence(const VortexConfig& cfg, const TorusGrid& domain,
                                const PhysicalParams& params, Model model) {
  ThresholdReport rep;
  rep.model = model;
  const double lam = params.lambda;
  const double area = domain.area();
  const double n = static_cast<double>(cfg.n());
  const double m = model == Model::Extended ? static_cast<double>(cfg.m()) : 0.0;
  const double lam_area = lam * area;
  rep.alpha1 = (lam_area - 2.0 * kPi * (m + n)) / lam;
  rep.alpha2 = (lam_area - kPi * (3.0 * m + n)) / lam;
  rep.C1 = rep.alpha1;
  rep.C2 = rep.alpha2;
  rep.first_ok = rep.alpha1 > 0.0;
  rep.second_ok = rep.alpha2 > 0.0;
  rep.solvable = rep.first_ok && rep.second_ok;
  rep.margin = std::min(rep.alpha1, rep.alpha2);
  return rep;
}

ThresholdReport check_existence(const VortexConfig& cfg, const TorusGrid& domain,
                                const PhysicalParams& params) {
  return check_existence(cfg, domain, params, cfg.kappa_zeros.empty() ? Model::Base : Model::Extended);
}

ScalarField periodized_core(const TorusGrid& g, const Point& p, double tau) {
  ScalarField core(g);
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const Point x = g.node(i, j);
      const double dx0 = wrap(x.x - p.x, g.Lx);
      const double dy0 = wrap(x.y - p.y, g.Ly);
      double acc = 0.0;
      for (int b = -2; b <= 2; ++b) {
        for (int a = -2; a <= 2; ++a) {
          const double dx = dx0 + a * g.Lx;
          const double dy = dy0 + b * g.Ly;
          acc += core_profile(dx * dx + dy * dy, tau);
        }
      }
      core(i, j) = acc;
    }
  }
  const double scale = 4.0 * kPi / integrate(g, core);
  for (std::size_t k = 0; k < core.size(); ++k) core[k] *= scale;
  return core;
}

Background build_background_plane(const VortexConfig& cfg, const PlaneGrid& grid,
                                  const PhysicalParams& params) {
  grid.validate();
  require_inside(cfg.phi_zeros, grid, "phi zero");
  require_inside(cfg.kappa_zeros, grid, "kappa zero");
  const double tau = params.tau;

  auto build = [&](const std::vector<Point>& pts, ScalarField& expf, ScalarField& logf,
                   ScalarField& dens) {
    expf = ScalarField(grid, 1.0);
    logf = ScalarField(grid, 0.0);
    dens = ScalarField(grid, 0.0);
    for (std::size_t j = 0; j < grid.n; ++j) {
      for (std::size_t i = 0; i < grid.n; ++i) {
        const Point x = grid.node(i, j);
        double prod = 1.0;
        double lsum = 0.0;
        double hsum = 0.0;
        for (const Point& p : pts) {
          const double dx = x.x - p.x;
          const double dy = x.y - p.y;
          const double r2 = dx * dx + dy * dy;
          const double factor = r2 / (r2 + tau);
          prod *= factor;
          lsum += (factor > 0.0) ? std::log(factor) : kLogFloor;
          hsum += core_profile(r2, tau);
        }
        expf(i, j) = prod;
        logf(i, j) = std::max(lsum, kLogFloor);
        dens(i, j) = hsum;
      }
    }
  };

  Background bg;
  build(cfg.phi_zeros, bg.exp_v0, bg.v0, bg.h2);
  build(cfg.kappa_zeros, bg.exp_u0, bg.u0, bg.h1);
  bg.h = bg.h2;
  return bg;
}

Background build_background_torus(const VortexConfig& cfg, const TorusGrid& grid,
                                  const PhysicalParams& params) {
  grid.validate();
  require_inside(cfg.phi_zeros, grid, "phi zero");
  require_inside(cfg.kappa_zeros, grid, "kappa zero");
  SpectralWorkspace ws(grid);
  Background bg;
  bg.neutralized_source = neutralized(grid, cfg.phi_zeros, params.tau);
  bg.neutralized_source_kappa = neutralized(grid, cfg.kappa_zeros, params.tau);
  bg.v0 = ScalarField(grid);
  bg.u0 = ScalarField(grid);
  ws.inverse_laplacian(bg.neutralized_source, bg.v0);
  ws.inverse_laplacian(bg.neutralized_source_kappa, bg.u0);
  bg.exp_v0 = ScalarField(grid);
  bg.exp_u0 = ScalarField(grid);
  const auto& k = kernels::active();
  k.exp_scaled(bg.v0.data(), nullptr, bg.exp_v0.data(), grid.size());
  k.exp_scaled(bg.u0.data(), nullptr, bg.exp_u0.data(), grid.size());
  // Regularized source densities themselves (cell integral 4 pi per zero).
  const double area = grid.area();
  bg.h2 = bg.neutralized_source;
  bg.h1 = bg.neutralized_source_kappa;
  const double shift2 = 4.0 * kPi * static_cast<double>(cfg.n()) / area;
  const double shift1 = 4.0 * kPi * static_cast<double>(cfg.m()) / area;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bg.h2[i] += shift2;
    bg.h1[i] += shift1;
  }
  bg.h = bg.h2;
  return bg;
}

}  // namespace bpsv
