#pragma once

#include "liecf/integrators.hpp"

namespace liecf {

// A benchmark: the problem, its initial data and time window, a reference
// solution at t1, and the distance used in convergence studies.
struct BenchmarkCase {
  Problem problem;
  Matrix Y0;
  double t0 = 0.0;
  double t1 = 0.0;
  // norm2 of the difference: Euclidean for vector states, spectral for
  // matrix states.
  std::function<double(const Matrix&, const Matrix&)> distance;

  // Closed-form solution (set only for the rigid body); when empty the
  // reference is a fine-step self-reference run.
  std::function<Matrix(double)> exact;
  double pinned_floor = 0.0;  // roundoff floor for closed-form references
  std::string ref_scheme;     // self-reference scheme (Munthe-Kaas stepper)
  double ref_h = 0.0;         // self-reference step size

  // Reference state at t1. Self-references are integrated once per
  // process and cached (mutex-guarded, compute-once).
  Matrix reference_solution() const;
  // Distance below which measured errors drown in reference error: the
  // pinned floor for closed-form cases, otherwise the distance between
  // the h_ref and h_ref/2 runs (cached alongside the reference).
  double reference_floor() const;
};

// Euler's free rigid body written as dY/dt = -hat(I^-1 Y) Y on the unit
// sphere, inertia diag(7/8, 5/8, 1/4), Y(0) = (-sqrt(8)/3, 0, 1/3),
// t: 0 -> 3. Reference: the closed-form elliptic solution.
BenchmarkCase rigid_body_problem();

// Closed-form rigid-body state at time t via Jacobi elliptic functions.
// The squared modulus of this orbit exceeds 1, so the values are obtained
// through the reciprocal-modulus transformation.
Matrix rigid_body_exact(double t);

// Isospectral flow on SO(5): A(Y) puts the first superdiagonal of Y on
// the superdiagonal, skew-symmetrized. Y(0) is a fixed orthogonal matrix
// (Gram-Schmidt of a full-rank sine seed), t: 0 -> 5.
BenchmarkCase so5_problem();

// Gradient-flow-style evolution on SU(3): A(Y) = -P{H Y} with P the
// traceless anti-Hermitian projection and H a fixed complex matrix.
// Y(0) = diag(e^i, e^i, e^{-2i}), t: 0 -> 10.
BenchmarkCase su3_flow_problem();

// Van der Pol oscillator (mu = 60) in matrix form on the state (x, xdot),
// Y(0) = (1, 1), t: 0 -> 2 across the needle near t = 1.53. Stiff enough
// that coarse steps can diverge.
BenchmarkCase vdp_problem();

// Non-autonomous rotation: A(t) = [[0, t, 1], [-t, 0, -t^2], [-1, t^2, 0]],
// Y(0) = I, t: 0 -> 1.
BenchmarkCase so3_nonautonomous_problem();

// Names accepted on the command line: rigid, so5, su3, vdp, so3t.
const std::vector<std::string>& benchmark_names();
BenchmarkCase benchmark_by_name(const std::string& name);

}  // namespace liecf
