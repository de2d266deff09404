#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hjdyn/expr.hpp"
#include "hjdyn/hjpde.hpp"

namespace hjdyn {

namespace detail {
class Fft;
}

using Complex = std::complex<double>;

enum class Boundary { dirichlet, periodic };

std::string to_string(Boundary b);

/// Uniform grid x_j = x_min + j dx, dx = (x_max - x_min) / n. Dirichlet
/// grids vanish at x_min - dx and x_max; periodic grids identify x_max
/// with x_min.
struct Grid {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t n = 1024;
  Boundary boundary = Boundary::dirichlet;

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double length() const { return x_max - x_min; }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
  /// Throws ConfigError for an empty or reversed domain or n < 4.
  void validate() const;
};

struct Wavefunction {
  Grid grid;
  std::vector<Complex> values;
  double t = 0.0;

  /// sqrt(sum |psi_j|^2 dx)
  double norm() const;
  void normalize();
};

/// exp(-(x - center)^2 / (2 width^2) + i k x), normalized on the grid.
Wavefunction gaussian(const Grid& grid, double center, double width, double k = 0.0);
/// exp(i k x) with k = 2 pi mode / length, normalized. Needs a periodic grid.
Wavefunction plane_wave(const Grid& grid, int mode);

/// Names and concrete values used to read a Hamiltonian expression.
struct OperatorSymbols {
  std::string q = "q";
  std::string p = "p";
  FunctionTable definitions;
  Bindings constants;
};

struct EvolveMonitor;

/// Discretized H acting on one grid. Potential kind: p^2/2 + V(q) with the
/// fourth-order compact stencil for p^2. Relativistic kind: sqrt(p^2 + mc^2)
/// applied in momentum space (periodic grids only).
class HamiltonianOperator {
 public:
  enum class Kind { potential, relativistic };

  Kind kind() const { return kind_; }
  const Grid& grid() const { return grid_; }
  const Expr& expression() const { return expression_; }
  /// V at the grid points (potential kind).
  const std::vector<double>& potential() const { return potential_; }
  /// The constant mc under the square root (relativistic kind).
  double rest_energy() const { return rest_energy_; }
  /// omega(k) for DFT index m (relativistic kind).
  double frequency(std::size_t m) const;

  std::vector<Complex> apply(std::span<const Complex> psi) const;

 private:
  friend HamiltonianOperator build_operator(const Expr&, const Grid&, const OperatorSymbols&);
  friend Wavefunction evolve(const Wavefunction&, const HamiltonianOperator&, double, std::size_t,
                             EvolveMonitor*);

  Kind kind_ = Kind::potential;
  Grid grid_;
  Expr expression_;
  std::vector<double> potential_;
  double rest_energy_ = 0.0;
  std::vector<double> omega_;
  std::shared_ptr<const detail::Fft> fft_;
};

/// Recognizes p^2/2 + V(q) or sqrt(p^2 + mc^2) in `h` and discretizes it on
/// `grid`. Throws ConfigError for any other shape, for a V that cannot be
/// evaluated on the grid, or for a relativistic operator on a Dirichlet grid.
HamiltonianOperator build_operator(const Expr& h, const Grid& grid,
                                   const OperatorSymbols& symbols = {});

/// Reads H_alpha off the single primary constraint of a system with one
/// dynamical pair, with the system's definitions and constants applied.
std::pair<Expr, OperatorSymbols> schrodinger_hamiltonian(const HJPDESet& set);

/// Optional observer and statistics for evolve().
struct EvolveMonitor {
  /// Observer cadence in steps; 0 only reports the final state.
  std::size_t every = 0;
  std::function<void(const Wavefunction&)> observer;
  /// Amplitude threshold for the outer 10% of a Dirichlet grid.
  double boundary_tol = 1e-12;

  // Filled in by evolve().
  double max_norm_drift = 0.0;
  bool boundary_contaminated = false;
  double boundary_amplitude = 0.0;
  std::size_t contaminated_at = 0;
};

/// i dpsi/dt = H psi for `steps` steps of size dt: Crank-Nicolson with one
/// tridiagonal solve per step, or the exact spectral phase exp(-i omega t).
/// The observer sees the initial state, every `every`-th step and the last.
/// Boundary contamination is recorded in the monitor, not thrown.
Wavefunction evolve(const Wavefunction& psi, const HamiltonianOperator& op, double dt,
                    std::size_t steps, EvolveMonitor* monitor = nullptr);

struct Expectations {
  double q = 0.0;
  double p = 0.0;
  double h = 0.0;
};

/// <q> by quadrature, <p> from the central difference, <H> through the
/// operator. Throws ConfigError unless |norm - 1| <= 1e-8.
Expectations expectations(const Wavefunction& psi, const HamiltonianOperator& op);

/// max over trials of |<H a, b> - <a, H b>| / (|H a| |b| + |a| |H b|) for
/// random complex vectors.
double hermiticity_defect(const HamiltonianOperator& op, int trials = 4,
                          std::uint64_t seed = 20240917);

}  // namespace hjdyn
