#include <doctest.h>

#include <omp.h>

#include <cstring>

#include "schwarzstatic/structure.hpp"
#include "schwarzstatic/synthetic.hpp"

using namespace schwarzstatic;

namespace {

const SchwarzschildParams P{1.0, 3.0};

template <class T>
bool same(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::memcmp(&a[i], &b[i], sizeof(T)) != 0) return false;
  return true;
}

bool same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("parallel kernels reproduce the serial reference bitwise") {
  omp_set_num_threads(4);
  const ShellGrid grid{RadialGrid::uniform(P.r0, 4.0, 17), SphereGrid::for_band(6)};
  const RandomDeformation X(P, grid.sphere, 77, {.L = 3});
  const auto d = sample_deformation(X.sampler(), grid);

  SUBCASE("radial stencils and shell gradient") {
    Eigen::MatrixXd f(static_cast<Eigen::Index>(grid.size()), 3);
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      for (Eigen::Index c = 0; c < 3; ++c) f(i, c) = d.g[static_cast<std::size_t>(i)].c[static_cast<std::size_t>(c)];
    const RadialStencils st(grid.radial);
    CHECK(same(st.derivative(f, grid.n_ang(), 2, Exec::Serial), st.derivative(f, grid.n_ang(), 2, Exec::Parallel)));
    const ShellDifferentiator D(grid);
    const auto hs = D.hessian(f, Exec::Serial), hp = D.hessian(f, Exec::Parallel);
    for (std::size_t k = 0; k < 6; ++k) CHECK(same(hs[k], hp[k]));
  }
  SUBCASE("curvature lab") {
    const auto g = schwarzschild_conformal_metric(P, grid);
    const auto u = schwarzschild_log_potential(P, grid);
    const auto rs = conformal_static_residual(g, u, Exec::Serial), rp = conformal_static_residual(g, u, Exec::Parallel);
    CHECK(same(rs.tensor, rp.tensor));
    CHECK(same(rs.scalar, rp.scalar));
    const auto ls = linearize_at_schwarzschild(d, P, 1e-4, Exec::Serial);
    const auto lp = linearize_at_schwarzschild(d, P, 1e-4, Exec::Parallel);
    CHECK(same(ls.tensor, lp.tensor));
    CHECK(same(ls.scalar, lp.scalar));
    CHECK(same(ls.boundary_metric, lp.boundary_metric));
    CHECK(same(ls.boundary_mean_curvature, lp.boundary_mean_curvature));
  }
  SUBCASE("gauge and structure") {
    const auto xs = build_gauge_field(X.sampler(), P, grid, {}, Exec::Serial);
    const auto xp = build_gauge_field(X.sampler(), P, grid, {}, Exec::Parallel);
    CHECK(same(xs.x_perp, xp.x_perp));
    CHECK(same(xs.x_tan, xp.x_tan));
    CHECK(same(xs.dx_tan, xp.dx_tan));
    const auto gs = apply_gauge(d, xs, P, 1e-8, Exec::Serial), gp = apply_gauge(d, xs, P, 1e-8, Exec::Parallel);
    CHECK(same(gs.pair.g, gp.pair.g));
    CHECK(same(gs.pair.u, gp.pair.u));
    const auto fs = foliation_from_gauge_fixed(gs.pair, P, Exec::Serial);
    const auto fp = foliation_from_gauge_fixed(gs.pair, P, Exec::Parallel);
    CHECK(same(fs.H, fp.H));
    CHECK(same(fs.K, fp.K));
    const auto ss = structure_residuals(fs, P, {}, Exec::Serial), sp = structure_residuals(fs, P, {}, Exec::Parallel);
    CHECK(same(ss.dg2, sp.dg2));
    CHECK(same(ss.dg4, sp.dg4));
    CHECK(same(ss.dg5, sp.dg5));
    CHECK(same(ss.dg3, sp.dg3));
    CHECK(same(ss.dg1, sp.dg1));
    const auto bs = boundary_residuals(fs, P, Exec::Serial), bp = boundary_residuals(fs, P, Exec::Parallel);
    CHECK(same(bs.metric, bp.metric));
    CHECK(same(bs.mean_curvature, bp.mean_curvature));
  }
}

TEST_CASE("exceptions inside parallel loops reach the caller") {
  omp_set_num_threads(4);
  CHECK_THROWS_AS(detail::for_each_index(Exec::Parallel, 100,
                                         [](std::ptrdiff_t i) {
                                           if (i == 57) throw std::runtime_error("boom");
                                         }),
                  std::runtime_error);
}
