#include "hjdyn/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fft.hpp"
#include "hjdyn/error.hpp"

namespace hjdyn {

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "dirichlet"; }

void Grid::validate() const {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("grid domain must satisfy x_min < x_max");
  }
  if (n < 4) throw ConfigError("grid needs at least 4 points");
}

double Wavefunction::norm() const {
  double s = 0.0;
  for (const Complex& z : values) s += std::norm(z);
  return std::sqrt(s * grid.dx());
}

void Wavefunction::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConfigError("wavefunction has no finite positive norm");
  for (Complex& z : values) z /= nrm;
}

Wavefunction gaussian(const Grid& grid, double center, double width, double k) {
  grid.validate();
  if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
  Wavefunction psi{grid, std::vector<Complex>(grid.n), 0.0};
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double u = (x - center) / width;
    psi.values[j] = std::exp(-0.5 * u * u) * std::polar(1.0, k * x);
  }
  psi.normalize();
  return psi;
}

Wavefunction plane_wave(const Grid& grid, int mode) {
  grid.validate();
  if (grid.boundary != Boundary::periodic) throw ConfigError("plane waves need a periodic grid");
  const double k = 2.0 * std::numbers::pi * mode / grid.length();
  Wavefunction psi{grid, std::vector<Complex>(grid.n), 0.0};
  for (std::size_t j = 0; j < grid.n; ++j) psi.values[j] = std::polar(1.0, k * grid.x(j));
  psi.normalize();
  return psi;
}

namespace {

// Tridiagonal system, cyclic when `periodic`; row j reads
// sub[j] x[j-1] + diag[j] x[j] + sup[j] x[j+1].
class Tridiagonal {
 public:
  Tridiagonal(std::vector<Complex> sub, std::vector<Complex> diag, std::vector<Complex> sup,
              bool periodic)
      : sub_(std::move(sub)), diag_(std::move(diag)), sup_(std::move(sup)), periodic_(periodic) {
    const std::size_t n = diag_.size();
    std::vector<Complex> b = diag_;
    if (periodic_) {
      gamma_ = -diag_[0];
      b[0] -= gamma_;
      b[n - 1] -= sup_[n - 1] * sub_[0] / gamma_;
    }
    cp_.resize(n);
    inv_.resize(n);
    inv_[0] = 1.0 / b[0];
    cp_[0] = sup_[0] * inv_[0];
    for (std::size_t i = 1; i < n; ++i) {
      inv_[i] = 1.0 / (b[i] - sub_[i] * cp_[i - 1]);
      cp_[i] = sup_[i] * inv_[i];
    }
    if (periodic_) {
      z_.assign(n, 0.0);
      z_[0] = gamma_;
      z_[n - 1] = sup_[n - 1];
      thomas(z_);
    }
  }

  void solve(std::span<Complex> r) const {
    thomas(r);
    if (!periodic_) return;
    const std::size_t n = r.size();
    const Complex beta = sub_[0];
    const Complex fact =
        (r[0] + beta * r[n - 1] / gamma_) / (1.0 + z_[0] + beta * z_[n - 1] / gamma_);
    for (std::size_t i = 0; i < n; ++i) r[i] -= fact * z_[i];
  }

  // Row j of the matrix times x.
  void multiply(std::span<const Complex> x, std::span<Complex> out, bool conjugate) const {
    const std::size_t n = x.size();
    auto c = [conjugate](Complex z) { return conjugate ? std::conj(z) : z; };
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = c(diag_[j]) * x[j];
      if (j > 0) s += c(sub_[j]) * x[j - 1];
      else if (periodic_) s += c(sub_[j]) * x[n - 1];
      if (j + 1 < n) s += c(sup_[j]) * x[j + 1];
      else if (periodic_) s += c(sup_[j]) * x[0];
      out[j] = s;
    }
  }

 private:
  void thomas(std::span<Complex> d) const {
    const std::size_t n = d.size();
    d[0] *= inv_[0];
    for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - sub_[i] * d[i - 1]) * inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp_[i] * d[i + 1];
  }

  std::vector<Complex> sub_, diag_, sup_;
  bool periodic_;
  Complex gamma_ = 0.0;
  std::vector<Complex> cp_, inv_, z_;
};

// Compact fourth-order mass matrix tridiag(1, 10, 1) / 12.
Tridiagonal mass_matrix(const Grid& g) {
  return Tridiagonal(std::vector<Complex>(g.n, 1.0 / 12.0), std::vector<Complex>(g.n, 10.0 / 12.0),
                     std::vector<Complex>(g.n, 1.0 / 12.0), g.boundary == Boundary::periodic);
}

Complex neighbour(std::span<const Complex> psi, std::size_t j, int offset, bool periodic) {
  const std::size_t n = psi.size();
  if (offset < 0) return j > 0 ? psi[j - 1] : (periodic ? psi[n - 1] : Complex{});
  return j + 1 < n ? psi[j + 1] : (periodic ? psi[0] : Complex{});
}

Expr concrete(const Expr& h, const OperatorSymbols& symbols) {
  std::map<std::string, Expr, std::less<>> values;
  for (const auto& [k, v] : symbols.constants) values.emplace(k, Expr(v));
  return simplify(substitute(substitute_functions(h, symbols.definitions), values));
}

[[noreturn]] void unsupported(const Expr& h) {
  throw ConfigError("unsupported Hamiltonian shape " + h.str() +
                    " (expected p^2/2 + V(q) or sqrt(p^2 + m^2 c^2))");
}

}  // namespace

double HamiltonianOperator::frequency(std::size_t m) const {
  if (kind_ != Kind::relativistic) throw ConfigError("frequency needs a relativistic operator");
  return omega_.at(m);
}

std::vector<Complex> HamiltonianOperator::apply(std::span<const Complex> psi) const {
  const std::size_t n = grid_.n;
  if (psi.size() != n) throw ConfigError("wavefunction does not match the operator grid");
  std::vector<Complex> out(n);
  if (kind_ == Kind::relativistic) {
    fft_->forward(psi, out);
    for (std::size_t m = 0; m < n; ++m) out[m] *= omega_[m];
    fft_->backward(out, out);
    return out;
  }
  const bool periodic = grid_.boundary == Boundary::periodic;
  const double dx = grid_.dx();
  const double w = -0.5 / (dx * dx);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = w * (neighbour(psi, j, -1, periodic) - 2.0 * psi[j] + neighbour(psi, j, 1, periodic));
  }
  mass_matrix(grid_).solve(out);
  for (std::size_t j = 0; j < n; ++j) out[j] += potential_[j] * psi[j];
  return out;
}

HamiltonianOperator build_operator(const Expr& h, const Grid& grid, const OperatorSymbols& symbols) {
  grid.validate();
  const Expr hc = concrete(h, symbols);
  const Expr p = Expr::symbol(symbols.p);
  HamiltonianOperator op;
  op.grid_ = grid;
  op.expression_ = hc;

  if (hc.kind() == Kind::sqrt) {
    const Expr rest = simplify(pow(hc, Expr(2.0)) - pow(p, Expr(2.0)));
    if (!rest.is_constant() || rest.value() < 0.0) unsupported(hc);
    if (grid.boundary != Boundary::periodic) {
      throw ConfigError("the relativistic operator is spectral and needs a periodic grid");
    }
    op.kind_ = HamiltonianOperator::Kind::relativistic;
    op.rest_energy_ = std::sqrt(rest.value());
    op.fft_ = std::make_shared<const detail::Fft>(grid.n);
    op.omega_.resize(grid.n);
    const double dk = 2.0 * std::numbers::pi / grid.length();
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      const double k = dk * static_cast<double>(m < (n + 1) / 2 ? m : m - n);
      op.omega_[static_cast<std::size_t>(m)] = std::sqrt(k * k + rest.value());
    }
    return op;
  }

  const Expr v = simplify(hc - pow(p, Expr(2.0)) / Expr(2.0));
  if (depends_on(v, symbols.p)) unsupported(hc);
  for (const std::string& s : free_symbols(v)) {
    if (s != symbols.q) throw ConfigError("potential " + v.str() + " has an unbound symbol " + s);
  }
  op.kind_ = HamiltonianOperator::Kind::potential;
  op.potential_.resize(grid.n);
  Bindings at;
  for (std::size_t j = 0; j < grid.n; ++j) {
    at[symbols.q] = grid.x(j);
    try {
      op.potential_[j] = evaluate(v, at);
    } catch (const EvalError& e) {
      throw ConfigError("potential " + v.str() + " cannot be evaluated at x = " +
                        std::to_string(grid.x(j)) + ": " + e.what());
    }
  }
  return op;
}

std::pair<Expr, OperatorSymbols> schrodinger_hamiltonian(const HJPDESet& set) {
  const ConjugatePair* dyn = nullptr;
  for (const ConjugatePair& pr : set.phase.pairs) {
    if (pr.parameter) continue;
    if (dyn) throw ConfigError("quantization needs exactly one dynamical coordinate");
    dyn = &pr;
  }
  if (!dyn) throw ConfigError("system has no dynamical coordinate");
  const Constraint* primary = nullptr;
  for (const Constraint& c : set.constraints) {
    if (c.parameter.empty()) continue;
    if (primary) throw ConfigError("quantization needs exactly one primary constraint");
    primary = &c;
  }
  if (!primary) throw ConfigError("system has no primary constraint");

  OperatorSymbols symbols;
  symbols.q = dyn->q;
  symbols.p = dyn->p;
  symbols.definitions = set.system.definitions;
  symbols.constants = set.system.parameter_values;
  for (const std::string& p : set.system.parameters) symbols.constants.emplace(p, 1.0);
  return {primary->hamiltonian, std::move(symbols)};
}

namespace {

void check_boundary(const Wavefunction& psi, std::size_t step, EvolveMonitor& mon) {
  if (psi.grid.boundary != Boundary::dirichlet) return;
  const std::size_t n = psi.values.size();
  const std::size_t outer = std::max<std::size_t>(1, n / 10);
  double amp = 0.0;
  for (std::size_t j = 0; j < outer; ++j) {
    amp = std::max({amp, std::abs(psi.values[j]), std::abs(psi.values[n - 1 - j])});
  }
  mon.boundary_amplitude = std::max(mon.boundary_amplitude, amp);
  if (amp > mon.boundary_tol && !mon.boundary_contaminated) {
    mon.boundary_contaminated = true;
    mon.contaminated_at = step;
  }
}

}  // namespace

Wavefunction evolve(const Wavefunction& psi, const HamiltonianOperator& op, double dt,
                    std::size_t steps, EvolveMonitor* monitor) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (psi.values.size() != op.grid_.n || psi.grid.boundary != op.grid_.boundary) {
    throw ConfigError("wavefunction does not match the operator grid");
  }
  EvolveMonitor local;
  EvolveMonitor& mon = monitor ? *monitor : local;
  const auto observe = [&](const Wavefunction& w, std::size_t step) {
    if (!mon.observer) return;
    if (step == 0 || step == steps || (mon.every > 0 && step % mon.every == 0)) mon.observer(w);
  };

  Wavefunction cur = psi;
  const double t0 = psi.t;
  double last_norm = cur.norm();
  check_boundary(cur, 0, mon);
  observe(cur, 0);

  if (op.kind_ == HamiltonianOperator::Kind::relativistic) {
    std::vector<Complex> hat(cur.values.size());
    op.fft_->forward(psi.values, hat);
    std::vector<Complex> buf(hat.size());
    std::size_t last_step = 0;
    for (std::size_t s = 1; s <= steps; ++s) {
      const bool wanted = s == steps || (mon.observer && mon.every > 0 && s % mon.every == 0);
      if (!wanted) continue;
      // Phases are taken from the initial spectrum, so no error accumulates.
      const double t = static_cast<double>(s) * dt;
      for (std::size_t m = 0; m < hat.size(); ++m) buf[m] = hat[m] * std::polar(1.0, -op.omega_[m] * t);
      op.fft_->backward(buf, cur.values);
      cur.t = t0 + t;
      const double nrm = cur.norm();
      mon.max_norm_drift =
          std::max(mon.max_norm_drift, std::abs(nrm - last_norm) / static_cast<double>(s - last_step));
      last_norm = nrm;
      last_step = s;
      observe(cur, s);
    }
    return cur;
  }

  const Grid& g = op.grid_;
  const bool periodic = g.boundary == Boundary::periodic;
  const std::size_t n = g.n;
  const double dx = g.dx();
  const double off = -0.5 / (dx * dx);
  const double on = 1.0 / (dx * dx);
  const Complex a(0.0, 0.5 * dt);
  const std::vector<double>& v = op.potential_;
  std::vector<Complex> sub(n), diag(n), sup(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double vm = j > 0 ? v[j - 1] : v[n - 1];
    const double vp = j + 1 < n ? v[j + 1] : v[0];
    sub[j] = 1.0 / 12.0 + a * (off + vm / 12.0);
    diag[j] = 10.0 / 12.0 + a * (on + 10.0 * v[j] / 12.0);
    sup[j] = 1.0 / 12.0 + a * (off + vp / 12.0);
  }
  const Tridiagonal lhs(std::move(sub), std::move(diag), std::move(sup), periodic);
  std::vector<Complex> rhs(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    lhs.multiply(cur.values, rhs, true);
    lhs.solve(rhs);
    cur.values.swap(rhs);
    cur.t = t0 + static_cast<double>(s) * dt;
    const double nrm = cur.norm();
    if (!std::isfinite(nrm)) throw EvalError("wavefunction became non-finite");
    mon.max_norm_drift = std::max(mon.max_norm_drift, std::abs(nrm - last_norm));
    last_norm = nrm;
    check_boundary(cur, s, mon);
    observe(cur, s);
  }
  return cur;
}

Expectations expectations(const Wavefunction& psi, const HamiltonianOperator& op) {
  const double nrm = psi.norm();
  if (!(std::abs(nrm - 1.0) <= 1e-8)) {
    throw ConfigError("expectations need a normalized wavefunction (norm " + std::to_string(nrm) + ")");
  }
  const Grid& g = psi.grid;
  const double dx = g.dx();
  const bool periodic = g.boundary == Boundary::periodic;
  Expectations out;
  Complex pe = 0.0;
  Complex he = 0.0;
  const std::vector<Complex> hpsi = op.apply(psi.values);
  for (std::size_t j = 0; j < psi.values.size(); ++j) {
    const Complex c = std::conj(psi.values[j]);
    out.q += g.x(j) * std::norm(psi.values[j]);
    const Complex d = (neighbour(psi.values, j, 1, periodic) - neighbour(psi.values, j, -1, periodic)) /
                      (2.0 * dx);
    pe += c * Complex(0.0, -1.0) * d;
    he += c * hpsi[j];
  }
  out.q *= dx;
  out.p = pe.real() * dx;
  out.h = he.real() * dx;
  return out;
}

double hermiticity_defect(const HamiltonianOperator& op, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t n = op.grid().n;
  auto dot = [](std::span<const Complex> x, std::span<const Complex> y) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
  };
  auto len = [&](std::span<const Complex> x) { return std::sqrt(dot(x, x).real()); };
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Complex> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = {normal(rng), normal(rng)};
      y[i] = {normal(rng), normal(rng)};
    }
    const std::vector<Complex> hx = op.apply(x);
    const std::vector<Complex> hy = op.apply(y);
    const double scale = len(hx) * len(y) + len(x) * len(hy);
    worst = std::max(worst, std::abs(dot(hx, y) - dot(x, hy)) / scale);
  }
  return worst;
}

}  // namespace hjdyn
