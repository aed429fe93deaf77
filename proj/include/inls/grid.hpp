#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace inls {

using cplx = std::complex<double>;

// Cell-centred radial grid: r_j = (j + 1/2) h, j = 0..J-1, r_max = J h.
// Faces sit at (f + 1) h for f = 0..J-1; the last face is r_max.
class RadialGrid {
 public:
  RadialGrid(int N, int J, double h);
  static std::shared_ptr<const RadialGrid> create(int N, int J, double h) {
    return std::make_shared<const RadialGrid>(N, J, h);
  }
  // Grid of spacing h covering [0, r_max] (J = round(r_max / h)).
  static std::shared_ptr<const RadialGrid> covering(int N, double r_max, double h);

  int N() const { return N_; }
  int J() const { return J_; }
  double h() const { return h_; }
  double r_max() const { return J_ * h_; }
  double omega() const { return omega_; }  // area of the unit sphere S^{N-1}

  double node(int j) const { return (j + 0.5) * h_; }
  double face(int f) const { return (f + 1) * h_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  // omega * face^{N-1} * h, the quadrature weight attached to face f.
  const std::vector<double>& face_weights() const { return face_weights_; }

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
    return a.N_ == b.N_ && a.J_ == b.J_ && a.h_ == b.h_;
  }

 private:
  int N_;
  int J_;
  double h_;
  double omega_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> face_weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<cplx> values);

  static RadialField zeros(GridPtr grid) {
    const int J = grid->J();
    return RadialField(std::move(grid), std::vector<cplx>(J));
  }
  template <class F>
  static RadialField sample(GridPtr grid, F&& f) {
    std::vector<cplx> v(grid->J());
    for (int j = 0; j < grid->J(); ++j) v[j] = cplx(f(grid->node(j)));
    return RadialField(std::move(grid), std::move(v));
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  cplx operator[](int j) const { return values_[j]; }

  RadialField scaled(cplx c) const;
  std::vector<double> moduli() const;
  std::vector<double> real_part() const;

 private:
  GridPtr grid_;
  std::vector<cplx> values_;
};

double l2_norm(const RadialField& u);
// sqrt of sum over faces of face_weight * |(u_{f+1} - u_f)/h|^2, u_J = 0.
// Equals <-Delta_h u, u> exactly.
double grad_norm(const RadialField& u);
double potential_term(const RadialField& u, double alpha, double b);
// Sum_j w_j u_j conj(v_j).
cplx inner(const RadialField& u, const RadialField& v);
// |u|^p integrated with the radial weights; p >= 1.
double lp_norm(const RadialField& u, double p);

// Coefficients of the flux-form radial Laplacian:
// (Delta u)_j = lower_j u_{j-1} + diag_j u_j + upper_j u_{j+1},
// with zero flux through r = 0 and the ghost u_J = 0.
struct LaplacianStencil {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
};
LaplacianStencil laplacian_stencil(const RadialGrid& g);

RadialField laplacian_radial(const RadialField& u);

struct StraussResult {
  double lhs;
  double rhs;
  double tol;
  bool holds;
};
StraussResult strauss_check(const RadialField& u, double R);

// Fraction of the mass carried by the outermost `fraction` of the domain.
double boundary_mass_fraction(const RadialField& u, double fraction = 0.05);

// Cubic Lagrange interpolation with even reflection at r = 0 and zero
// outside the grid.
cplx interpolate(const RadialField& u, double r);
// v(r) = delta^amplitude_exponent * u(delta r), resampled on the same grid.
RadialField rescale(const RadialField& u, double delta, double amplitude_exponent);

class LinearSolveFailure : public std::runtime_error {
 public:
  explicit LinearSolveFailure(const std::string& what) : std::runtime_error(what) {}
};

// Constant tridiagonal matrix with a precomputed Thomas factorisation.
template <class T>
class Tridiagonal {
 public:
  Tridiagonal(std::vector<T> lower, std::vector<T> diag, std::vector<T> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), cprime_(diag.size()), inv_denom_(diag.size()) {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      T d = diag[i];
      if (i > 0) d -= lower_[i] * cprime_[i - 1];
      if (!(std::abs(d) > 0.0) || !std::isfinite(std::abs(d)))
        throw LinearSolveFailure("tridiagonal pivot breakdown at row " + std::to_string(i));
      inv_denom_[i] = T(1) / d;
      cprime_[i] = (i + 1 < n) ? upper_[i] * inv_denom_[i] : T(0);
    }
  }

  template <class V>
  void solve_in_place(std::vector<V>& x) const {
    const std::size_t n = inv_denom_.size();
    if (x.size() != n) throw std::invalid_argument("tridiagonal: size mismatch");
    x[0] = x[0] * inv_denom_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) * inv_denom_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime_[i] * x[i + 1];
  }

 private:
  std::vector<T> lower_;
  std::vector<T> upper_;
  std::vector<T> cprime_;
  std::vector<T> inv_denom_;
};

void write_field_csv(std::ostream& out, const RadialField& u, int precision);
// Rebuilds the grid from the r column; rows must be r_j = (j + 1/2) h.
RadialField read_field_csv(std::istream& in, int N);

}  // namespace inls
