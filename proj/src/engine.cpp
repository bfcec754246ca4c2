#include "solgas/engine.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <thread>

namespace solgas {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Power-of-two row/column scalings, exact in floating point.
struct Equilibration {
  Eigen::VectorXd row, col;
};

Equilibration equilibrate(Mat& a) {
  const Eigen::Index n = a.rows();
  Equilibration eq{Eigen::VectorXd::Ones(n), Eigen::VectorXd::Ones(n)};
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = a.row(i).cwiseAbs().maxCoeff();
      if (m > 0.0 && std::isfinite(m)) {
        const double s = std::exp2(-std::round(std::log2(m)));
        a.row(i) *= s;
        eq.row(i) *= s;
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m = a.col(j).cwiseAbs().maxCoeff();
      if (m > 0.0 && std::isfinite(m)) {
        const double s = std::exp2(-std::round(std::log2(m)));
        a.col(j) *= s;
        eq.col(j) *= s;
      }
    }
  }
  return eq;
}

// Hager/Higham 1-norm estimate of ||M||_1 for M given through products
// M v and M^H v; a handful of O(n^2) operations.
template <typename MulFn, typename MulHFn>
double one_norm_estimate(Eigen::Index n, MulFn&& mul, MulHFn&& mul_h) {
  Vec x = Vec::Constant(n, Complex(1.0 / double(n), 0.0));
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const Vec y = mul(x);
    est = y.cwiseAbs().sum();
    Vec xi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(y[i]);
      xi[i] = m > 0.0 ? y[i] / m : Complex(1.0, 0.0);
    }
    const Vec zv = mul_h(xi);
    Eigen::Index jmax = 0;
    const double zmax = zv.cwiseAbs().maxCoeff(&jmax);
    if (zmax <= std::real(zv.dot(x)) + 1e-16) break;
    x.setZero();
    x[jmax] = Complex(1.0, 0.0);
  }
  return est;
}

struct LinearSolveReport {
  Vec x;
  double condition = 1.0;
  double residual = 0.0;
};

// LU with equilibration, guarded refinement and condition monitoring.
//
// The reported estimate is the solution-scaled (componentwise) bound
//   cond = || |A^{-1}| |A| |x| ||_inf / ||x||_inf,
// which bounds the forward error of the computed solution.  For saturated
// soliton systems (all |gamma| >> 1 but with a NARROW spread) that bound is
// measurably ~1e5 looser than reality, while for widely graded gamma it is
// descriptive; the refusal therefore requires both the bound above 1e12 and
// the grading to confirm it (guard_by_condition).  Refinement corrections
// are applied only when genuinely converging: in the saturated regime the
// residual is pure cancellation noise and the correction would wreck an
// otherwise 8-digit solution.
LinearSolveReport solve_dense(const Mat& a, const Vec& b, double x_at,
                              double t_at, bool guard_by_condition = true) {
  const Eigen::Index n = a.rows();
  auto fail = [&](const char* why) -> Error {
    return Error(ErrorCode::SingularSystem,
                 std::string(why) + " at (x,t) = (" + std::to_string(x_at) +
                     ", " + std::to_string(t_at) + ")");
  };
  if (!a.allFinite() || !b.allFinite())
    throw fail("non-finite linear system");

  Mat as = a;
  const Equilibration eq = equilibrate(as);
  Eigen::PartialPivLU<Mat> lu(as);

  // solve D_r A D_c y = D_r b, then x = D_c y
  auto solve_original = [&](const Vec& rhs) -> Vec {
    return eq.col.asDiagonal() *
           lu.solve((eq.row.asDiagonal() * rhs).eval());
  };
  Vec x = solve_original(b);
  if (!x.allFinite()) throw fail("non-finite solution");
  // one step of iterative refinement, kept only if clearly converging
  Vec r = b - a * x;
  const Vec dx = solve_original(r);
  if (dx.allFinite() &&
      dx.cwiseAbs().maxCoeff() <= 1e-6 * x.cwiseAbs().maxCoeff())
    x += dx;

  const double x_max = x.cwiseAbs().maxCoeff();
  double cond = 1.0;
  if (x_max > 0.0) {
    // || |A^{-1}| g ||_inf with g = |A||x|, as || A^{-1} D_g ||_inf via the
    // 1-norm duality on the conjugate transpose
    const Eigen::VectorXd g = a.cwiseAbs() * x.cwiseAbs();
    // with B = (A^{-1} D_g)^T: ||A^{-1} D_g||_inf = ||B||_1, and
    //   B v   = D_g A^{-T} v         = D_g D_r A_eq^{-T} D_c v
    //   B^H v = conj(A^{-1}) D_g v   = conj(D_c A_eq^{-1} D_r conj(D_g v))
    auto mul = [&](const Vec& v) -> Vec {
      const Vec s = lu.transpose().solve((eq.col.asDiagonal() * v).eval());
      Vec y = eq.row.asDiagonal() * s;
      return g.asDiagonal() * y;
    };
    auto mul_h = [&](const Vec& v) -> Vec {
      const Vec w = (g.asDiagonal() * v).conjugate();
      return (eq.col.asDiagonal() *
              lu.solve((eq.row.asDiagonal() * w).eval()))
          .conjugate();
    };
    cond = one_norm_estimate(n, mul, mul_h) / x_max;
    if (!std::isfinite(cond) || (guard_by_condition && cond > kConditionLimit))
      throw fail("condition estimate above threshold");
  }

  r = b - a * x;
  const double norm_a = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double denom = norm_a * x_max + b.cwiseAbs().maxCoeff();
  LinearSolveReport rep;
  rep.x = std::move(x);
  rep.condition = std::max(cond, 1.0);
  rep.residual = denom > 0.0 ? r.cwiseAbs().maxCoeff() / denom : 0.0;
  return rep;
}

// The mother-body regime (poles on the imaginary axis, positive real
// norming constants, t = 0) drives gamma across ~|x| * spread(y) orders of
// magnitude, far past what pivoted LU in doubles can absorb.  There the
// reduced matrix is I + S^2 with S = D_w K D_w, K_{jl} = 1/(y_j + y_l) a
// totally positive Cauchy kernel and w_j = sqrt(gamma_j) > 0.  Schur
// complements of Cauchy matrices are Cauchy with updated weights
//   q_j <- q_j (y_j - y_m)/(y_j + y_m),
// so a diagonally pivoted LDL^T of S evaluates in closed form, in log space,
// without subtractive cancellation.  With S = P^T L D L^T P,
//   (I + S^2)^{-1} = (I - iS)^{-1} (I + iS)^{-1},
//   (I + i L D L^T)^{-1} = L^{-T} (L^{-1} L^{-T} + iD)^{-1} L^{-1},
// and the middle matrix is benign: the huge d_k decouple their rows, the
// tiny ones vanish against the well-conditioned L^{-1}L^{-T}.  Everything
// stays in double precision.

bool axis_gas_eligible(const ScatteringData& data, double t) {
  if (t != 0.0) return false;
  for (const auto& p : data.points())
    if (p.z.real() != 0.0 || p.c.imag() != 0.0 || !(p.c.real() > 0.0))
      return false;
  return true;
}

double axis_gas_grading(const ScatteringData& data, double x) {
  double lo = 1e300, hi = -1e300;
  for (const auto& p : data.points()) {
    const double lg = std::log(p.c.real()) - 2.0 * p.z.imag() * x;
    lo = std::min(lo, lg);
    hi = std::max(hi, lg);
  }
  return hi - lo;
}

ResidueSolution solve_axis_gas(const ScatteringData& data, double x) {
  const int n = int(data.size());
  Eigen::VectorXd y(n), logw(n);
  for (int j = 0; j < n; ++j) {
    y[j] = data[j].z.imag();
    logw[j] = 0.5 * std::log(data[j].c.real()) - y[j] * x;
  }

  // pivoted LDL^T of S via closed-form Cauchy updates in log space
  Eigen::VectorXd logq = logw;
  std::vector<double> sign(n, 1.0);
  Eigen::MatrixXd l_cols =
      Eigen::MatrixXd::Zero(n, n);  // column k indexed by original row j
  std::vector<int> perm;
  perm.reserve(n);
  std::vector<char> used(n, 0);
  Eigen::VectorXd d(n);
  for (int k = 0; k < n; ++k) {
    int m = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double v = 2.0 * logq[j] - std::log(2.0 * y[j]);
      if (v > best) {
        best = v;
        m = j;
      }
    }
    perm.push_back(m);
    used[m] = 1;
    d[k] = best > 690.0 ? 1e300 : (best < -690.0 ? 0.0 : std::exp(best));
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      l_cols(j, k) = sign[j] * sign[m] * std::exp(logq[j] - logq[m]) *
                     (2.0 * y[m] / (y[j] + y[m]));
      const double diff = y[j] - y[m];
      if (diff < 0.0) sign[j] = -sign[j];
      logq[j] += std::log(std::abs(diff)) - std::log(y[j] + y[m]);
    }
  }
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < n; ++k)
    for (int r = k + 1; r < n; ++r) l(r, k) = l_cols(perm[r], k);
  if (!l.allFinite())
    throw Error(ErrorCode::SingularSystem,
                "axis-gas factorization failed at (x,t) = (" +
                    std::to_string(x) + ", 0)");

  const Eigen::MatrixXd l_inv =
      l.triangularView<Eigen::Lower>().solve(
          Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd a = l_inv * l_inv.transpose();
  const Mat lc = l.cast<Complex>();
  const Mat ltc = l.transpose().cast<Complex>().eval();

  Vec v(n);
  for (int r = 0; r < n; ++r) v[r] = Complex(std::exp(logw[perm[r]]), 0.0);
  if (!v.allFinite())
    throw Error(ErrorCode::SingularSystem,
                "axis-gas weights overflow at (x,t) = (" + std::to_string(x) +
                    ", 0)");

  SolveDiagnostics diag{1.0, 0.0, n};
  auto half_solve = [&](const Vec& rhs, double s) {
    Mat m = a.cast<Complex>();
    for (int k = 0; k < n; ++k) m(k, k) += Complex(0.0, s) * d[k];
    const Vec h1 = lc.triangularView<Eigen::Lower>().solve(rhs);
    LinearSolveReport rep = solve_dense(m, h1, x, 0.0);
    diag.condition_estimate =
        std::max(diag.condition_estimate, rep.condition);
    diag.linear_residual = std::max(diag.linear_residual, rep.residual);
    Vec out = ltc.triangularView<Eigen::Upper>().solve(rep.x);
    return out;
  };
  const Vec u = half_solve(half_solve(v, 1.0), -1.0);

  ResidueSolution sol;
  sol.g.assign(n, Complex(0, 0));
  for (int r = 0; r < n; ++r)
    sol.g[perm[r]] = std::exp(logw[perm[r]]) * u[r];
  // F_k = -conj(gamma_k) sum_l g_l/(conj(z_k) - z_l); may saturate for
  // extreme gradings, psi and Y away from such regimes never read it
  sol.f_conj.assign(n, Complex(0, 0));
  for (int k = 0; k < n; ++k) {
    Complex s{0, 0};
    for (int ll = 0; ll < n; ++ll)
      s += sol.g[ll] / Complex(0.0, -(y[k] + y[ll]));
    sol.f_conj[k] = -std::exp(2.0 * logw[k]) * s;
  }
  sol.diagnostics = diag;
  return sol;
}

// grading (in log units) beyond which the structured axis factorization
// takes over for eligible data
constexpr double kAxisGradingSwitch = 12.0;
// grading beyond which the componentwise condition bound is descriptive and
// the 1e12 refusal applies; below it the bound overstates the saturated
// solve's error by orders of magnitude (measured against __float128)
constexpr double kGradingDescriptive = 20.0;
// max log|gamma| beyond which the reduced-path product assembly is unsafe
constexpr double kReducedSaturationLimit = 9.0;

ResidueSolution solve_plain(const ScatteringData& data, double x, double t,
                            SolverPath path) {
  const int n = int(data.size());
  Vec gamma(n);
  double log_lo = 1e300, log_hi = -1e300;
  for (int j = 0; j < n; ++j) {
    const Complex th = theta(data[j].z, x, t);
    gamma[j] = data[j].c * std::exp(2.0 * th);
    const double mag = std::abs(gamma[j]);
    if (mag > 0.0 && std::isfinite(mag)) {
      log_lo = std::min(log_lo, std::log(mag));
      log_hi = std::max(log_hi, std::log(mag));
    }
  }
  const bool guard = log_hi - log_lo > kGradingDescriptive;
  // forming B = (D_gamma C)(conj D_gamma C) for the reduced system cancels
  // catastrophically once ||gamma||^2 dwarfs the identity; assemble the full
  // system instead there (entries are plain products, pivoting does the rest)
  if (path == SolverPath::ReducedN && log_hi > kReducedSaturationLimit)
    path = SolverPath::Full2N;
  Mat cauchy(n, n);  // C_{jl} = 1/(z_j - conj(z_l))
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      cauchy(j, l) = 1.0 / (data[j].z - std::conj(data[l].z));

  ResidueSolution out;
  if (path == SolverPath::Full2N) {
    Mat a = Mat::Identity(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        a(j, n + l) = -gamma[j] * cauchy(j, l);
        a(n + j, l) = std::conj(gamma[j] * cauchy(j, l));
      }
    Vec b = Vec::Zero(2 * n);
    b.head(n) = gamma;
    LinearSolveReport rep = solve_dense(a, b, x, t, guard);
    out.g.assign(rep.x.data(), rep.x.data() + n);
    out.f_conj.assign(rep.x.data() + n, rep.x.data() + 2 * n);
    out.diagnostics = {rep.condition, rep.residual, 2 * n};
  } else {
    Mat bg = gamma.asDiagonal() * cauchy;                      // D_gamma C
    Mat bc = gamma.conjugate().asDiagonal() * cauchy.conjugate();
    Mat m = Mat::Identity(n, n) + bg * bc;
    LinearSolveReport rep = solve_dense(m, gamma, x, t, guard);
    out.g.assign(rep.x.data(), rep.x.data() + n);
    Vec f = -(bc * rep.x);
    out.f_conj.assign(f.data(), f.data() + n);
    out.diagnostics = {rep.condition, rep.residual, n};
  }
  return out;
}

}  // namespace

ResidueSolution solve_residue_system(const ScatteringData& data, double x,
                                     double t, SolverPath path) {
  const bool eligible = axis_gas_eligible(data, t);
  if (eligible && axis_gas_grading(data, x) > kAxisGradingSwitch)
    return solve_axis_gas(data, x);
  if (eligible) {
    try {
      return solve_plain(data, x, t, path);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem) throw;
      return solve_axis_gas(data, x);
    }
  }
  return solve_plain(data, x, t, path);
}

std::pair<Complex, SolveDiagnostics> evaluate_psi(const ScatteringData& data,
                                                  const EvaluationPoint& at,
                                                  SolverPath path) {
  ResidueSolution sol = solve_residue_system(data, at.x, at.t, path);
  Complex sum{0.0, 0.0};
  for (const Complex& gj : sol.g) sum += std::conj(gj);
  return {Complex(0.0, -2.0) * sum, sol.diagnostics};
}

FieldSample evaluate_field(const ScatteringData& data, const Grid& grid,
                           SolverPath path, unsigned threads) {
  grid.validate();
  const std::size_t nx = grid.x_values.size(), nt = grid.t_values.size();
  FieldSample out;
  out.grid = grid;
  out.psi.assign(nt, std::vector<Complex>(nx));

  const std::size_t total = nx * nt;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = unsigned(std::min<std::size_t>(threads, total));

  std::vector<SolveDiagnostics> worst(threads);
  std::vector<std::pair<std::size_t, std::string>> failures(threads,
                                                            {total, {}});
  std::atomic<std::size_t> next{0};

  auto worker = [&](unsigned tid) {
    SolveDiagnostics local{1.0, 0.0, 0};
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) break;
      const std::size_t ti = idx / nx, xi = idx % nx;
      try {
        auto [psi, diag] = evaluate_psi(
            data, {grid.x_values[xi], grid.t_values[ti]}, path);
        out.psi[ti][xi] = psi;
        local.condition_estimate =
            std::max(local.condition_estimate, diag.condition_estimate);
        local.linear_residual =
            std::max(local.linear_residual, diag.linear_residual);
        local.n = std::max(local.n, diag.n);
      } catch (const Error& e) {
        if (idx < failures[tid].first) failures[tid] = {idx, e.what()};
      }
    }
    worst[tid] = local;
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
    for (auto& th : pool) th.join();
  }

  std::pair<std::size_t, std::string> first{total, {}};
  for (const auto& f : failures)
    if (f.first < first.first) first = f;
  if (first.first < total)
    throw Error(ErrorCode::SingularSystem, first.second);

  for (const auto& w : worst) {
    out.diagnostics.condition_estimate =
        std::max(out.diagnostics.condition_estimate, w.condition_estimate);
    out.diagnostics.linear_residual =
        std::max(out.diagnostics.linear_residual, w.linear_residual);
    out.diagnostics.n = std::max(out.diagnostics.n, w.n);
  }
  return out;
}

MatrixY evaluate_Y(const ScatteringData& data, const EvaluationPoint& at,
                   Complex z) {
  for (const auto& p : data.points()) {
    if (std::abs(z - p.z) <= 1e-8 || std::abs(z - std::conj(p.z)) <= 1e-8)
      throw Error(ErrorCode::PoleTooClose,
                  "z within 1e-8 of a pole of Y: " + format_complex(p.z));
  }
  ResidueSolution sol = solve_residue_system(data, at.x, at.t);
  MatrixY y{{{Complex(1, 0), Complex(0, 0)}, {Complex(0, 0), Complex(1, 0)}}};
  for (std::size_t j = 0; j < data.size(); ++j) {
    const Complex fj = std::conj(sol.f_conj[j]);
    const Complex dz = z - data[j].z;
    const Complex dzb = z - std::conj(data[j].z);
    y.entries[0][0] += fj / dz;
    y.entries[1][0] += sol.g[j] / dz;
    y.entries[0][1] += -std::conj(sol.g[j]) / dzb;
    y.entries[1][1] += sol.f_conj[j] / dzb;
  }
  return y;
}

Complex one_soliton_closed_form(double a, double b, double x0, double phi0,
                                const EvaluationPoint& at) {
  if (!(b > 0.0))
    throw Error(ErrorCode::InvariantViolation, "soliton requires b > 0");
  const double arg = 2.0 * b * (at.x + 2.0 * a * at.t - x0);
  const double amp = 2.0 * b / std::cosh(arg);
  const double phase =
      -2.0 * (a * at.x + (a * a - b * b) * at.t + 0.5 * phi0);
  return std::polar(amp, phase);
}

Complex one_soliton_closed_form(const SolitonParams& p,
                                const EvaluationPoint& at) {
  return one_soliton_closed_form(p.a, p.b, p.x0, p.phi0, at);
}

SolitonParams soliton_params_from_constant(Complex z0, Complex c0) {
  if (!(z0.imag() > 0.0))
    throw Error(ErrorCode::InvariantViolation,
                "pole must lie in the upper half-plane");
  if (std::abs(c0) == 0.0)
    throw Error(ErrorCode::ZeroConstant, "zero norming constant");
  SolitonParams p;
  p.a = z0.real();
  p.b = z0.imag();
  p.x0 = std::log(std::abs(c0) / (2.0 * p.b)) / (2.0 * p.b);
  p.phi0 = 0.5 * M_PI + std::arg(c0);
  return p;
}

double fnls_residual(const FieldSample& field, int margin_x, int margin_t) {
  const auto& xs = field.grid.x_values;
  const auto& ts = field.grid.t_values;
  if (margin_x < 1 || margin_t < 1)
    throw Error(ErrorCode::InvariantViolation, "margins must be positive");
  if (xs.size() < 5 || ts.size() < 5)
    throw Error(ErrorCode::GridTooSmall,
                "need at least 5 grid points per direction");
  auto spacing = [](const std::vector<double>& v, const char* name) {
    const double h = v[1] - v[0];
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
      if (std::abs((v[i + 1] - v[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
        throw Error(ErrorCode::NonUniformGrid,
                    std::string("non-uniform ") + name + " spacing");
    return h;
  };
  const double hx = spacing(xs, "x");
  const double ht = spacing(ts, "t");

  double worst = 0.0;
  const Complex iu(0.0, 1.0);
  for (std::size_t ti = margin_t; ti + margin_t < ts.size(); ++ti) {
    for (std::size_t xi = margin_x; xi + margin_x < xs.size(); ++xi) {
      const Complex p = field.psi[ti][xi];
      const Complex dt =
          (field.psi[ti + 1][xi] - field.psi[ti - 1][xi]) / (2.0 * ht);
      const Complex dxx = (field.psi[ti][xi + 1] - 2.0 * p +
                           field.psi[ti][xi - 1]) /
                          (hx * hx);
      const Complex res = iu * dt + 0.5 * dxx + std::norm(p) * p;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

}  // namespace solgas
