#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lagflow/field/field.hpp"
#include "lagflow/lorentz/lorentz.hpp"

namespace lagflow {

struct SolverConfig {
  double nu = 0.05;
  double dt = 0.01;
  double t_end = 1.0;
  /// Mollifier index; 0 stands for no mollification.
  int n_moll = 0;
  bool dealias = true;
  Grid3 grid{32, 6.283185307179586};
  std::uint64_t seed = 1;
  /// Number of evenly spaced snapshots kept after the initial one.
  int snapshot_count = 20;
  /// Largest number of CFL halvings before a step is declared unstable.
  int max_halvings = 12;

  /// Throws std::invalid_argument on a bad field.
  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;     // ||u||_{L2}^2
  double enstrophy = 0.0;  // ||grad u||_{L2}^2
  double h2 = 0.0;         // ||u||_{H^2 dot}
  double grad_l31 = 0.0;   // ||grad u||_{L^{3,1}}, Frobenius magnitude
  double fl1 = 0.0;        // ||u||_{FL1}
  int substeps = 1;        // CFL subdivision used to reach t
};

struct Snapshot {
  double t = 0.0;
  SpectralVectorField u;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  int cfl_events = 0;
};

/// -Pi D[(rho_n * u) . grad u], D the optional 2/3 truncation.
SpectralVectorField nonlinear_term(const SpectralVectorField& u, const SolverConfig& cfg);

struct StepResult {
  SpectralVectorField u;
  int substeps = 1;
};

/// One step of length cfg.dt: Heun's method on the nonlinear term with the
/// viscous part integrated exactly. Subdivides by powers of two when the
/// advective CFL number exceeds 1/2; throws std::runtime_error on NaN.
StepResult step(const SpectralVectorField& u, const SolverConfig& cfg);

DiagnosticsRecord diagnostics(const SpectralVectorField& u, double t);

/// Fixed-step integration to t_end with diagnostics at every step.
RunResult run(const SpectralVectorField& u0, const SolverConfig& cfg);

/// Worst pair s < t of  E(t) + 2 nu int_s^t Z  against  E(s) (1 + tol).
InequalityReport check_energy_inequality(const std::vector<DiagnosticsRecord>& diag, double nu, double tol = 1e-3);

/// int_0^T ||u||_{H^2}^{2/3} dt  over  (1 + ||u0||^2) T^{1/3}; throws if T < 1.
InequalityReport check_fgt_bound(const std::vector<DiagnosticsRecord>& diag, double u0_energy, double T);

/// int_0^T (||grad u||_{L^{3,1}} + ||u||_{FL1}) dt  over
/// ||u0||^{1/2} (1 + ||u0||^2)^{3/4} T^{1/4}; throws if T < 1.
InequalityReport check_gradient_lorentz_integral(const std::vector<DiagnosticsRecord>& diag, double u0_energy,
                                                 double T);

/// Trapezoid rule for a diagnostic over [0, T] (records with t <= T).
double time_integral(const std::vector<DiagnosticsRecord>& diag, double T,
                     const std::function<double(const DiagnosticsRecord&)>& g);

/// L^2_T L^2 distance between two snapshot sequences on common times.
double l2t_l2_distance(const std::vector<Snapshot>& a, const std::vector<Snapshot>& b);

enum class InitialKind { taylor_green, shear, random_band };

InitialKind parse_initial_kind(const std::string& s);
std::string to_string(InitialKind k);

struct InitialDataParams {
  double amplitude = 1.0;
  /// Target ||u0||_{L2}^2 for random data; negative keeps the raw draw.
  double energy = -1.0;
  double k_min = 1.0;
  double k_max = 4.0;
  double slope = 1.0;
  /// Wavenumber index of the shear mode.
  int mode = 1;
};

SpectralVectorField make_initial_data(InitialKind kind, const Grid3& g, const InitialDataParams& p,
                                      std::uint64_t seed);

}  // namespace lagflow
