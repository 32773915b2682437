#include "cnls/continuation.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>

#include "cnls/banded.hpp"
#include "cnls/quadrature.hpp"

namespace cnls::continuation {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964;

// Lobatto IIIA, s = 4, order 6. Row j holds a_{j m}; row 0 is zero.
constexpr double kC[4] = {0.0, (5.0 - kSqrt5) / 10.0, (5.0 + kSqrt5) / 10.0, 1.0};
constexpr double kA[4][4] = {
    {0.0, 0.0, 0.0, 0.0},
    {(11.0 + kSqrt5) / 120.0, (25.0 - kSqrt5) / 120.0,
     (25.0 - 13.0 * kSqrt5) / 120.0, (-1.0 + kSqrt5) / 120.0},
    {(11.0 - kSqrt5) / 120.0, (25.0 + 13.0 * kSqrt5) / 120.0,
     (25.0 + kSqrt5) / 120.0, (-1.0 - kSqrt5) / 120.0},
    {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0}};

using Vec4 = std::array<double, 4>;

ModelParams with_beta(const ModelParams& p, double beta1) {
  ModelParams q = p;
  q.beta1 = beta1;
  return q;
}

Vec4 rhs(const Vec4& y, const ModelParams& p) {
  auto d = model::cubic_derivs(y[0] * y[0], y[1] * y[1], p);
  return {y[2], y[3], p.omega * y[0] - d.d1 * y[0], p.s * y[1] - d.d2 * y[1]};
}

// Jacobian of rhs wrt y and wrt beta1.
void rhs_jacobian(const Vec4& y, const ModelParams& p, double J[4][4], Vec4& dbeta) {
  double u = y[0], v = y[1];
  auto d = model::cubic_derivs(u * u, v * v, p);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) J[i][j] = 0.0;
  J[0][2] = 1.0;
  J[1][3] = 1.0;
  J[2][0] = p.omega - d.d1 - 2.0 * u * u * d.d11;
  J[2][1] = -2.0 * u * v * d.d12;
  J[3][0] = -2.0 * u * v * d.d12;
  J[3][1] = p.s - d.d2 - 2.0 * v * v * d.d22;
  dbeta = {0.0, 0.0, -v * v * u, -u * u * v};
}

std::vector<double> graded_mesh(double L, int N, double sigma) {
  std::vector<double> x(N + 1);
  double denom = std::expm1(sigma);
  for (int i = 0; i <= N; ++i) x[i] = L * std::expm1(sigma * i / N) / denom;
  x[0] = 0.0;
  x[N] = L;
  return x;
}

// Lagrange-basis integrals B_j(theta) = Int_0^theta l_j, quartics in theta.
struct DenseOutputBasis {
  double coef[4][5];  // B_j(theta) = sum_k coef[j][k] theta^{k+1}
  DenseOutputBasis() {
    for (int j = 0; j < 4; ++j) {
      // build l_j as cubic coefficients (ascending powers)
      double lj[4] = {1.0, 0.0, 0.0, 0.0};
      double scale = 1.0;
      int deg = 0;
      for (int m = 0; m < 4; ++m) {
        if (m == j) continue;
        // multiply by (theta - c_m)
        double nl[5] = {0, 0, 0, 0, 0};
        for (int k = 0; k <= deg; ++k) {
          nl[k + 1] += lj[k];
          nl[k] += -kC[m] * lj[k];
        }
        ++deg;
        for (int k = 0; k <= deg; ++k) lj[k] = nl[k];
        scale *= kC[j] - kC[m];
      }
      for (int k = 0; k < 4; ++k) coef[j][k] = lj[k] / scale / (k + 1);
      coef[j][4] = 0.0;
    }
  }
  double eval(int j, double theta) const {
    double acc = 0.0;
    for (int k = 3; k >= 0; --k) acc = acc * theta + coef[j][k];
    return acc * theta;
  }
};

const DenseOutputBasis& dense_basis() {
  static DenseOutputBasis b;
  return b;
}

struct Layout {
  int N;
  int node(int i) const { return 4 * i; }
  int stage(int i, int k) const { return 4 * (N + 1) + 8 * i + 4 * k; }  // k = 0, 1
  int unknowns() const { return 12 * N + 4; }
};

// Gather the four stage vectors of interval i from the unknown vector.
void gather(const Eigen::VectorXd& Y, const Layout& lay, int i, Vec4 Z[4]) {
  for (int c = 0; c < 4; ++c) {
    Z[0][c] = Y[lay.node(i) + c];
    Z[1][c] = Y[lay.stage(i, 0) + c];
    Z[2][c] = Y[lay.stage(i, 1) + c];
    Z[3][c] = Y[lay.node(i + 1) + c];
  }
}

struct Assembled {
  Eigen::VectorXd residual;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd dbeta;  // residual derivative wrt beta1
};

Assembled assemble(const Eigen::VectorXd& Y, const std::vector<double>& mesh,
                   Parity parity, const ModelParams& p) {
  Layout lay{int(mesh.size()) - 1};
  const int N = lay.N;
  Assembled out;
  out.residual.setZero(lay.unknowns());
  out.dbeta.setZero(lay.unknowns());
  out.trip.reserve(std::size_t(N) * 220);
  Vec4 Z[4], F[4], dB[4];
  double J[4][4];
  for (int i = 0; i < N; ++i) {
    double h = mesh[i + 1] - mesh[i];
    gather(Y, lay, i, Z);
    int col[4] = {lay.node(i), lay.stage(i, 0), lay.stage(i, 1), lay.node(i + 1)};
    for (int m = 0; m < 4; ++m) F[m] = rhs(Z[m], p);
    for (int j = 1; j < 4; ++j) {
      int row = 12 * i + 4 * (j - 1);
      for (int c = 0; c < 4; ++c) {
        double g = Z[j][c] - Z[0][c];
        for (int m = 0; m < 4; ++m) g -= h * kA[j][m] * F[m][c];
        out.residual[row + c] = g;
        out.trip.emplace_back(row + c, col[j] + c, 1.0);
        out.trip.emplace_back(row + c, col[0] + c, -1.0);
      }
      for (int m = 0; m < 4; ++m) {
        rhs_jacobian(Z[m], p, J, dB[m]);
        for (int r = 0; r < 4; ++r) {
          out.dbeta[row + r] += -h * kA[j][m] * dB[m][r];
          for (int c = 0; c < 4; ++c) {
            double v = -h * kA[j][m] * J[r][c];
            if (v != 0.0) out.trip.emplace_back(row + r, col[m] + c, v);
          }
        }
      }
    }
  }
  // boundary conditions
  int brow = 12 * N;
  out.residual[brow] = Y[lay.node(0) + 2];  // U'(0) = 0
  out.trip.emplace_back(brow, lay.node(0) + 2, 1.0);
  if (parity == Parity::odd) {
    out.residual[brow + 1] = Y[lay.node(0) + 1];  // V(0) = 0
    out.trip.emplace_back(brow + 1, lay.node(0) + 1, 1.0);
  } else {
    out.residual[brow + 1] = Y[lay.node(0) + 3];  // V'(0) = 0
    out.trip.emplace_back(brow + 1, lay.node(0) + 3, 1.0);
  }
  double rw = std::sqrt(p.omega), rsq = std::sqrt(p.s);
  out.residual[brow + 2] = Y[lay.node(N) + 2] + rw * Y[lay.node(N)];
  out.trip.emplace_back(brow + 2, lay.node(N) + 2, 1.0);
  out.trip.emplace_back(brow + 2, lay.node(N), rw);
  out.residual[brow + 3] = Y[lay.node(N) + 3] + rsq * Y[lay.node(N) + 1];
  out.trip.emplace_back(brow + 3, lay.node(N) + 3, 1.0);
  out.trip.emplace_back(brow + 3, lay.node(N) + 1, rsq);
  return out;
}

Eigen::VectorXd initial_vector(const WaveProfile& guess,
                               const std::vector<double>& mesh) {
  quad::CubicSpline su(guess.grid.x, guess.U), sv(guess.grid.x, guess.V);
  Layout lay{int(mesh.size()) - 1};
  Eigen::VectorXd Y(lay.unknowns());
  auto fill = [&](int base, double x) {
    Y[base + 0] = su(x);
    Y[base + 1] = sv(x);
    Y[base + 2] = su.deriv(x);
    Y[base + 3] = sv.deriv(x);
  };
  for (int i = 0; i <= lay.N; ++i) fill(lay.node(i), mesh[i]);
  for (int i = 0; i < lay.N; ++i) {
    double h = mesh[i + 1] - mesh[i];
    fill(lay.stage(i, 0), mesh[i] + kC[1] * h);
    fill(lay.stage(i, 1), mesh[i] + kC[2] * h);
  }
  return Y;
}

CollocationSolution pack_solution(const Eigen::VectorXd& Y,
                                  const std::vector<double>& mesh, Parity parity,
                                  double beta1, double res_sup) {
  Layout lay{int(mesh.size()) - 1};
  CollocationSolution sol;
  sol.nodes = mesh;
  sol.v_parity = parity;
  sol.beta1 = beta1;
  sol.residual_sup = res_sup;
  sol.z.resize(lay.N + 1);
  sol.stages.resize(lay.N);
  for (int i = 0; i <= lay.N; ++i)
    for (int c = 0; c < 4; ++c) sol.z[i][c] = Y[lay.node(i) + c];
  for (int i = 0; i < lay.N; ++i)
    for (int c = 0; c < 8; ++c) sol.stages[i][c] = Y[lay.stage(i, 0) + c];
  return sol;
}

Eigen::VectorXd unpack_solution(const CollocationSolution& sol) {
  Layout lay{int(sol.nodes.size()) - 1};
  Eigen::VectorXd Y(lay.unknowns());
  for (int i = 0; i <= lay.N; ++i)
    for (int c = 0; c < 4; ++c) Y[lay.node(i) + c] = sol.z[i][c];
  for (int i = 0; i < lay.N; ++i)
    for (int c = 0; c < 8; ++c) Y[lay.stage(i, 0) + c] = sol.stages[i][c];
  return Y;
}

}  // namespace

std::array<double, 4> CollocationSolution::eval(double x, const ModelParams& p) const {
  const int N = int(nodes.size()) - 1;
  if (x <= 0.0) x = 0.0;
  if (x >= nodes[N]) x = nodes[N];
  int i = int(std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin()) - 1;
  i = std::clamp(i, 0, N - 1);
  double h = nodes[i + 1] - nodes[i];
  double theta = (x - nodes[i]) / h;
  Vec4 Z[4] = {z[i],
               {stages[i][0], stages[i][1], stages[i][2], stages[i][3]},
               {stages[i][4], stages[i][5], stages[i][6], stages[i][7]},
               z[i + 1]};
  const auto& basis = dense_basis();
  ModelParams pb = with_beta(p, beta1);
  std::array<double, 4> out = z[i];
  for (int m = 0; m < 4; ++m) {
    Vec4 f = rhs(Z[m], pb);
    double w = basis.eval(m, theta) * h;
    for (int c = 0; c < 4; ++c) out[c] += w * f[c];
  }
  return out;
}

WaveProfile CollocationSolution::to_profile(const Grid& g, const ModelParams& p) const {
  WaveProfile w;
  w.grid = g;
  w.U.resize(g.n);
  w.V.resize(g.n);
  double vsign = (v_parity == Parity::odd) ? -1.0 : 1.0;
  for (int i = 0; i < g.n; ++i) {
    double x = g.x[i];
    auto y = eval(std::abs(x), p);
    w.U[i] = y[0];
    w.V[i] = (x < 0.0 ? vsign : 1.0) * y[1];
  }
  w.decay_u = std::sqrt(p.omega);
  w.decay_v = std::sqrt(p.s);
  w.v_parity = v_parity;
  return w;
}

double CollocationSolution::v_l2_norm(const ModelParams& p) const {
  (void)p;
  const int N = int(nodes.size()) - 1;
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    double h = nodes[i + 1] - nodes[i];
    double vals[4] = {z[i][1], stages[i][1], stages[i][5], z[i + 1][1]};
    for (int m = 0; m < 4; ++m) acc += h * kA[3][m] * vals[m] * vals[m];
  }
  return std::sqrt(2.0 * acc);
}

CollocationSolution solve_homoclinic(const ModelParams& params,
                                     const WaveProfile& guess, Parity v_parity,
                                     const CollocationOptions& opt) {
  params.validate();
  double L = opt.half_length > 0.0 ? opt.half_length : model::default_half_length(params);
  auto mesh = graded_mesh(L, opt.n_intervals, opt.grading);
  Eigen::VectorXd Y = initial_vector(guess, mesh);
  double res_sup = 0.0;
  for (int it = 0;; ++it) {
    Assembled a = assemble(Y, mesh, v_parity, params);
    res_sup = a.residual.lpNorm<Eigen::Infinity>();
    if (res_sup <= opt.newton_tol) break;
    if (it >= opt.max_newton)
      throw NewtonFailure("solve_homoclinic: Newton did not converge in " +
                          std::to_string(opt.max_newton) + " iterations");
    Eigen::SparseMatrix<double> Jm(a.residual.size(), a.residual.size());
    Jm.setFromTriplets(a.trip.begin(), a.trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Jm);
    if (lu.info() != Eigen::Success)
      throw NewtonFailure("solve_homoclinic: singular collocation Jacobian");
    Y -= lu.solve(a.residual);
  }
  auto sol = pack_solution(Y, mesh, v_parity, params.beta1, res_sup);
  // decay-rate check at the far boundary
  double umax = 0.0;
  for (auto& zz : sol.z) umax = std::max(umax, std::abs(zz[0]));
  if (std::abs(sol.z.back()[0]) > 1e-6 * umax)
    throw NewtonFailure("solve_homoclinic: profile violates decay at x = L");
  return sol;
}

Branch continue_branch(const ModelParams& start_params,
                       const CollocationSolution& start,
                       std::pair<double, double> beta1_range,
                       const StepControls& ctl, const CollocationOptions& opt) {
  const auto& mesh = start.nodes;
  Parity parity = start.v_parity;
  ModelParams p = start_params;

  Branch br;
  br.parity = parity;
  br.origin = "start";

  auto record = [&](const CollocationSolution& s) {
    BranchPointRec rec;
    rec.beta1 = s.beta1;
    rec.v_norm = s.v_l2_norm(p);
    std::vector<double> vs;
    vs.reserve(s.z.size());
    for (auto& zz : s.z) vs.push_back(zz[1]);
    // full-line zero count from the half line: mirror doubles the count and
    // odd parity adds the zero at the origin
    auto zc = count_zeros(vs);
    rec.ell = zc.trivial ? 0 : 2 * zc.zeros + (parity == Parity::odd ? 1 : 0);
    rec.sol = s;
    br.points.push_back(std::move(rec));
  };
  record(start);

  const int n_unknowns = int(unpack_solution(start).size());
  Eigen::VectorXd Ycur(n_unknowns + 1);
  Ycur.head(n_unknowns) = unpack_solution(start);
  Ycur[n_unknowns] = start.beta1;
  // initial tangent: increase beta1
  Eigen::VectorXd tangent = Eigen::VectorXd::Zero(n_unknowns + 1);
  double dir = (beta1_range.second >= start.beta1) ? 1.0 : -1.0;
  tangent[n_unknowns] = dir;

  double ds = ctl.initial;
  while (true) {
    double lo = std::min(beta1_range.first, beta1_range.second);
    double hi = std::max(beta1_range.first, beta1_range.second);
    double bcur = Ycur[n_unknowns];
    if (bcur < lo - 1e-12 || bcur > hi + 1e-12) break;
    bool accepted = false;
    while (!accepted) {
      if (ds < ctl.min_step)
        throw StepUnderflow("continue_branch: arclength step underflow");
      Eigen::VectorXd Yp = Ycur + ds * tangent;
      // corrector
      Eigen::VectorXd Yn = Yp;
      int it = 0;
      bool ok = true;
      for (;; ++it) {
        ModelParams pb = with_beta(p, Yn[n_unknowns]);
        Assembled a = assemble(Yn.head(n_unknowns), mesh, parity, pb);
        double rsup = a.residual.lpNorm<Eigen::Infinity>();
        double arc = tangent.dot(Yn - Yp);
        if (rsup <= opt.newton_tol && std::abs(arc) <= opt.newton_tol) break;
        if (it >= opt.max_newton) {
          ok = false;
          break;
        }
        Eigen::SparseMatrix<double> Jm(n_unknowns + 1, n_unknowns + 1);
        std::vector<Eigen::Triplet<double>> trip = std::move(a.trip);
        for (int r = 0; r < n_unknowns; ++r)
          if (a.dbeta[r] != 0.0) trip.emplace_back(r, n_unknowns, a.dbeta[r]);
        for (int c = 0; c <= n_unknowns; ++c)
          if (tangent[c] != 0.0) trip.emplace_back(n_unknowns, c, tangent[c]);
        Jm.setFromTriplets(trip.begin(), trip.end());
        Eigen::VectorXd rhsv(n_unknowns + 1);
        rhsv.head(n_unknowns) = a.residual;
        rhsv[n_unknowns] = arc;
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Jm);
        if (lu.info() != Eigen::Success) {
          ok = false;
          break;
        }
        Yn -= lu.solve(rhsv);
      }
      if (ok) {
        accepted = true;
        Eigen::VectorXd delta = Yn - Ycur;
        double dn = delta.norm();
        if (dn > 0) tangent = delta / dn;
        Ycur = Yn;
        ModelParams pb = with_beta(p, Ycur[n_unknowns]);
        auto sol = pack_solution(Ycur.head(n_unknowns), mesh, parity,
                                 Ycur[n_unknowns], 0.0);
        record(sol);
        if (it <= ctl.fast_newton) ds = std::min(2.0 * ds, ctl.max_step);
      } else {
        ds *= 0.5;
      }
    }
  }
  if (!br.points.empty()) br.ell = br.points.back().ell;
  return br;
}

std::vector<double> detect_pitchfork(const ModelParams& params,
                                     std::pair<double, double> beta1_window,
                                     const Grid& g) {
  params.validate();
  const double h2 = g.dx() * g.dx();
  const double rw = std::sqrt(params.omega);
  std::vector<double> u0sq(g.n);
  for (int i = 0; i < g.n; ++i) {
    double c = std::cosh(rw * g.x[i]);
    u0sq[i] = 2.0 * params.omega / (c * c);
  }
  auto negcount = [&](double beta1) {
    banded::SymBanded A(g.n, 2);
    for (int i = 0; i < g.n; ++i) {
      A.at(i, i) = 30.0 / (12.0 * h2) + params.s - beta1 * u0sq[i];
      if (i >= 1) A.at(i, i - 1) = -16.0 / (12.0 * h2);
      if (i >= 2) A.at(i, i - 2) = 1.0 / (12.0 * h2);
    }
    return banded::inertia(A, 0.0).negative;
  };
  double lo = beta1_window.first, hi = beta1_window.second;
  std::vector<double> found;
  const int coarse = std::max(16, int((hi - lo) / 0.2));
  int prev = negcount(lo);
  for (int k = 1; k <= coarse; ++k) {
    double b = lo + (hi - lo) * k / coarse;
    int cur = negcount(b);
    for (int jump = 0; jump < cur - prev; ++jump) {
      double aa = lo + (hi - lo) * (k - 1) / coarse, cc = b;
      int target = prev + jump + 1;
      while (cc - aa > 1e-9) {
        double mid2 = 0.5 * (aa + cc);
        if (negcount(mid2) >= target)
          cc = mid2;
        else
          aa = mid2;
      }
      found.push_back(0.5 * (aa + cc));
    }
    prev = cur;
  }
  return found;
}

ZeroCount count_zeros(std::span<const double> V, double rel_threshold) {
  double vmax = 0.0;
  for (double v : V) vmax = std::max(vmax, std::abs(v));
  ZeroCount zc;
  if (vmax == 0.0) {
    zc.trivial = true;
    return zc;
  }
  double thr = rel_threshold * vmax;
  int last_sign = 0;
  for (double v : V) {
    if (std::abs(v) <= thr) continue;
    int s = v > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++zc.zeros;
    last_sign = s;
  }
  return zc;
}

WaveProfile refine_on_grid(const WaveProfile& guess, const ModelParams& params,
                           Parity v_parity, double tol) {
  const Grid& g = guess.grid;
  const int mid = g.mid();
  const int m = g.n - mid;  // points x >= 0
  const double h2 = g.dx() * g.dx();
  // unknowns: (u_i, v_i) for i = 0..m-1 on the half grid
  Eigen::VectorXd Y(2 * m);
  for (int i = 0; i < m; ++i) {
    Y[2 * i] = guess.U[mid + i];
    Y[2 * i + 1] = guess.V[mid + i];
  }
  bool vodd = (v_parity == Parity::odd);
  if (vodd) Y[1] = 0.0;

  auto idx = [&](int i, int c) { return 2 * i + c; };
  // ghost value of component c at half-grid index -k (k = 1, 2)
  auto mirror = [&](const Eigen::VectorXd& y, int k, int c) {
    double sign = (c == 0 || !vodd) ? 1.0 : -1.0;
    return sign * y[idx(k, c)];
  };
  auto value = [&](const Eigen::VectorXd& y, int i, int c) -> double {
    if (i < 0) return mirror(y, -i, c);
    if (i >= m) return 0.0;
    return y[idx(i, c)];
  };
  auto residual = [&](const Eigen::VectorXd& y, Eigen::VectorXd& r) {
    r.setZero(2 * m);
    for (int i = 0; i < m; ++i) {
      double u = y[idx(i, 0)], v = y[idx(i, 1)];
      auto d = model::cubic_derivs(u * u, v * v, params);
      for (int c = 0; c < 2; ++c) {
        double lap = (-value(y, i - 2, c) + 16.0 * value(y, i - 1, c) -
                      30.0 * value(y, i, c) + 16.0 * value(y, i + 1, c) -
                      value(y, i + 2, c)) /
                     (12.0 * h2);
        double freq = (c == 0) ? params.omega : params.s;
        double nl = (c == 0) ? d.d1 * u : d.d2 * v;
        r[idx(i, c)] = -lap + freq * y[idx(i, c)] - nl;
      }
    }
    if (vodd) r[idx(0, 1)] = y[idx(0, 1)];  // V(0) = 0 replaces its row
  };
  Eigen::VectorXd r;
  for (int it = 0; it < 30; ++it) {
    residual(Y, r);
    if (r.lpNorm<Eigen::Infinity>() <= tol) break;
    if (it == 29)
      throw NewtonFailure("refine_on_grid: Newton did not converge");
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(m) * 14);
    auto add_lap = [&](int row, int i, int c, double w) {
      // contribution of -lap row: stencil on component c around i
      const double st[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
      for (int k = -2; k <= 2; ++k) {
        int j = i + k;
        double coef = -w * st[k + 2] / (12.0 * h2);
        if (j >= m) continue;
        if (j < 0) {
          double sign = (c == 0 || !vodd) ? 1.0 : -1.0;
          j = -j;
          if (j < m) trip.emplace_back(row, idx(j, c), coef * sign);
        } else {
          trip.emplace_back(row, idx(j, c), coef);
        }
      }
    };
    for (int i = 0; i < m; ++i) {
      double u = Y[idx(i, 0)], v = Y[idx(i, 1)];
      auto d = model::cubic_derivs(u * u, v * v, params);
      int ru = idx(i, 0), rv = idx(i, 1);
      add_lap(ru, i, 0, 1.0);
      trip.emplace_back(ru, idx(i, 0), params.omega - d.d1 - 2.0 * u * u * d.d11);
      trip.emplace_back(ru, idx(i, 1), -2.0 * u * v * d.d12);
      if (!(vodd && i == 0)) {
        add_lap(rv, i, 1, 1.0);
        trip.emplace_back(rv, idx(i, 1), params.s - d.d2 - 2.0 * v * v * d.d22);
        trip.emplace_back(rv, idx(i, 0), -2.0 * u * v * d.d12);
      } else {
        trip.emplace_back(rv, idx(i, 1), 1.0);
      }
    }
    Eigen::SparseMatrix<double> Jm(2 * m, 2 * m);
    Jm.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Jm);
    if (lu.info() != Eigen::Success)
      throw NewtonFailure("refine_on_grid: singular Jacobian");
    Y -= lu.solve(r);
  }
  WaveProfile out = guess;
  for (int i = 0; i < m; ++i) {
    out.U[mid + i] = Y[idx(i, 0)];
    out.V[mid + i] = Y[idx(i, 1)];
    if (i > 0) {
      out.U[mid - i] = Y[idx(i, 0)];
      out.V[mid - i] = (vodd ? -1.0 : 1.0) * Y[idx(i, 1)];
    }
  }
  out.v_parity = v_parity;
  return out;
}

std::vector<double> hamiltonian_samples(const CollocationSolution& sol,
                                        const ModelParams& p) {
  std::vector<double> H;
  H.reserve(sol.z.size());
  for (const auto& y : sol.z) {
    auto d = model::cubic_derivs(y[0] * y[0], y[1] * y[1], p);
    H.push_back(0.5 * (-p.omega * y[0] * y[0] - p.s * y[1] * y[1] + d.F +
                       y[2] * y[2] + y[3] * y[3]));
  }
  return H;
}

}  // namespace cnls::continuation
