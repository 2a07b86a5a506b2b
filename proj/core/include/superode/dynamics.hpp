#ifndef SUPERODE_DYNAMICS_HPP
#define SUPERODE_DYNAMICS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "superode/freepoly.hpp"
#include "superode/grassmann.hpp"
#include "superode/linalg.hpp"
#include "superode/nary.hpp"

namespace superode {

/// Commutative polynomial in real coordinates; a monomial is the sorted
/// list of its coordinate indices (with repetition).
struct RealPolynomial {
  std::map<std::vector<std::size_t>, Rational> terms;

  double eval(const std::vector<double>& x) const;
  std::size_t degree() const;
};

/// One real ODE per (variable, Grassmann monomial) coordinate.
struct RealSystem {
  std::vector<std::string> coords;
  std::vector<std::pair<std::string, MultiIndex>> origin;
  std::vector<RealPolynomial> rhs;

  std::size_t size() const noexcept { return coords.size(); }
  std::size_t index(const std::string& variable, const MultiIndex& idx = {}) const;
  void eval(const std::vector<double>& x, std::vector<double>& dx) const;

  /// Coordinates of Grassmann values; missing variables are zero.
  std::vector<double> state(const std::map<std::string, GrassmannElement>& values) const;
};

RealSystem expand_to_real(const FlowSpec& flow);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::string scheme;
};

using VectorField = std::function<void(double t, const std::vector<double>& x, std::vector<double>& dx)>;

/// Classical RK4 with fixed step; the last step is shortened to land on t_end.
/// Throws DivergenceError on a non-finite state.
Trajectory rk4_integrate(const VectorField& f, std::vector<double> x0, double t0, double t_end, double step);
Trajectory rk4_integrate(const RealSystem& sys, std::vector<double> x0, double t_end, double step);

struct AbelReport {
  double second_kind = 0;  ///< max |w w' - w - f(x)|
  double first_kind = 0;   ///< max |u' + f(x) u^3 + u^2|, u = 1/w
  std::size_t samples = 0;
};

/// w = x' taken from the system, derivatives in x by centered differences.
/// Throws DomainError when x is not strictly monotone on the window.
AbelReport abel_correspondence_check(const RealSystem& sys, const Trajectory& traj, std::size_t x_index,
                                     const std::function<double(double)>& f = [](double x) { return x * x; });

struct DifferenceResult {
  std::vector<SuperVector> states;
  bool equilibrium_start = false;
  bool idempotent_start = false;
};

/// X(k+1) = X(k) + h mu(X(k), ..., X(k)), exact.
DifferenceResult difference_iterate(const StructureTensor& t, const SuperVector& x0, const Rational& h, std::size_t steps);

/// X(k+1) = X(k) + h F(X(k)) in doubles.
Trajectory difference_real(const RealSystem& sys, std::vector<double> x0, double h, std::size_t steps);

enum class ProductRule {
  shifted_right,  ///< D(fg) = Df Eg + f Dg
  shifted_left,   ///< D(fg) = Ef Dg + Df g
  naive           ///< D(fg) = Df g + f Dg
};

/// Checks a discrete product rule at every index of two sequences, with
/// Df(k) = (f(k+1) - f(k)) / h and Ef(k) = f(k+1).
bool delta_product_rule_check(const std::vector<RationalMatrix>& f, const std::vector<RationalMatrix>& g,
                              const Rational& h, ProductRule rule = ProductRule::shifted_right);

/// X' = X A X + B X + X C + D with X of size p x q.
struct RiccatiSpec {
  std::size_t p = 0, q = 0;
  RationalMatrix A, B, C, D;

  void validate() const;
};

/// [[B, D], [-A, -C]] acting on (u; v).
RationalMatrix riccati_linearize(const RiccatiSpec& spec);

RealMatrix riccati_rhs(const RiccatiSpec& spec, const RealMatrix& x);
/// RK4 on the Riccati equation itself.
RealMatrix riccati_direct(const RiccatiSpec& spec, const RealMatrix& x0, double t_end, double step);
/// RK4 on the linear system from u(0) = X0, v(0) = I, then X = u v^-1.
RealMatrix riccati_via_linear(const RiccatiSpec& spec, const RealMatrix& x0, double t_end, double step);

struct RiccatiDifferenceResult {
  std::vector<RationalMatrix> states;
  bool identity_holds = true;
  std::optional<std::size_t> first_failure;
};

/// Implicit scheme Du = b Eu + d Ev, Dv = -a Eu - c Ev, x = u v^-1; every step
/// is checked against Dx = x a Ex + b Ex + x c + d.
RiccatiDifferenceResult riccati_difference(const RiccatiSpec& spec, const RationalMatrix& x0, const Rational& h,
                                           std::size_t steps);

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& names);

}  // namespace superode

#endif  // SUPERODE_DYNAMICS_HPP
