#pragma once

// Exact N-soliton evaluation from scattering data {(z_j, c_j)}.
//
// The rational ansatz
//   Y(z) = I + sum_j [[f_j,0],[g_j,0]]/(z-z_j)
//            + sum_j [[0,-conj(g_j)],[0,conj(f_j)]]/(z-conj(z_j))
// reduced by the residue conditions gives, with
//   gamma_j = c_j e^{2 theta(z_j,x,t)},   theta(z,x,t) = i(z^2 t + z x),
// the 2N x 2N complex linear system in (g, F = conj(f)):
//   g_j - gamma_j sum_l F_l / (z_j - conj(z_l))        = gamma_j
//   F_k + conj(gamma_k) sum_l g_l / (conj(z_k) - z_l)  = 0
// and the field is psi(x,t) = -2i sum_j conj(g_j).
//
// The default path solves the full 2N system (dense LU, partial pivoting,
// power-of-two equilibration, one step of iterative refinement).  The reduced
// path eliminates F first, solving (I + D_g C D_gbar conj(C)) g = gamma with
// C_{jl} = 1/(z_j - conj(z_l)); it is ~4x cheaper and used by the experiment
// drivers.  gamma spans many orders of magnitude at large |x|; equilibration
// keeps the factorization honest and a condition estimate above 1e12 (or any
// non-finite intermediate) raises SingularSystem instead of returning noise.

#include <cstdint>
#include <utility>
#include <vector>

#include "solgas/core.hpp"

namespace solgas {

inline Complex theta(Complex z, double x, double t) {
  return Complex(0.0, 1.0) * (z * z * t + z * x);
}

enum class SolverPath { Full2N, ReducedN };

struct SolveDiagnostics {
  double condition_estimate = 1.0;
  double linear_residual = 0.0;  // relative infinity-norm
  int n = 0;                     // order of the solved system
};

struct ResidueSolution {
  std::vector<Complex> g;
  std::vector<Complex> f_conj;
  SolveDiagnostics diagnostics;
};

constexpr double kConditionLimit = 1e12;

ResidueSolution solve_residue_system(const ScatteringData& data, double x,
                                     double t,
                                     SolverPath path = SolverPath::Full2N);

std::pair<Complex, SolveDiagnostics> evaluate_psi(
    const ScatteringData& data, const EvaluationPoint& at,
    SolverPath path = SolverPath::Full2N);

struct FieldSample {
  Grid grid;
  std::vector<std::vector<Complex>> psi;  // [t][x]
  SolveDiagnostics diagnostics;           // worst case over the grid
};

// Batch wrapper, data-parallel over grid points (each point an independent
// solve); output is bitwise independent of the thread schedule.
FieldSample evaluate_field(const ScatteringData& data, const Grid& grid,
                           SolverPath path = SolverPath::Full2N,
                           unsigned threads = 0);

struct MatrixY {
  Complex entries[2][2];
  Complex det() const {
    return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
  }
};

MatrixY evaluate_Y(const ScatteringData& data, const EvaluationPoint& at,
                   Complex z);

struct SolitonParams {
  double a = 0.0;     // Re z0, velocity -2a
  double b = 0.0;     // Im z0, amplitude 2b
  double x0 = 0.0;    // initial peak position
  double phi0 = 0.0;  // initial phase
};

Complex one_soliton_closed_form(double a, double b, double x0, double phi0,
                                const EvaluationPoint& at);
Complex one_soliton_closed_form(const SolitonParams& p,
                                const EvaluationPoint& at);

// a = Re z0, b = Im z0, x0 = ln(|c0|/(2b))/(2b), phi0 = pi/2 + arg c0.
SolitonParams soliton_params_from_constant(Complex z0, Complex c0);

// Max over interior grid points of |i D_t psi + 1/2 D_xx psi + |psi|^2 psi|
// with second-order central differences; for convergence diagnostics.
double fnls_residual(const FieldSample& field, int margin_x = 1,
                     int margin_t = 1);

}  // namespace solgas
