#include "inls/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "inls/csv.hpp"

namespace inls {

RadialGrid::RadialGrid(int N, int J, double h) : N_(N), J_(J), h_(h) {
  if (N < 1) throw std::invalid_argument("grid: N must be >= 1");
  if (J < 4) throw std::invalid_argument("grid: J must be >= 4");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid: h must be > 0");
  omega_ = 2.0 * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0);
  nodes_.resize(J);
  weights_.resize(J);
  face_weights_.resize(J);
  for (int j = 0; j < J; ++j) {
    nodes_[j] = node(j);
    weights_[j] = omega_ * std::pow(nodes_[j], N - 1) * h;
    face_weights_[j] = omega_ * std::pow(face(j), N - 1) * h;
  }
}

std::shared_ptr<const RadialGrid> RadialGrid::covering(int N, double r_max, double h) {
  if (!(r_max > 0.0) || !(h > 0.0)) throw std::invalid_argument("grid: r_max and h must be > 0");
  return create(N, static_cast<int>(std::lround(r_max / h)), h);
}

RadialField::RadialField(GridPtr grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("field: null grid");
  if (static_cast<int>(values_.size()) != grid_->J())
    throw std::invalid_argument("field: value count does not match grid");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("field: non-finite sample");
}

RadialField RadialField::scaled(cplx c) const {
  std::vector<cplx> v(values_);
  for (auto& x : v) x *= c;
  return RadialField(grid_, std::move(v));
}

std::vector<double> RadialField::moduli() const {
  std::vector<double> m(values_.size());
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = std::abs(values_[j]);
  return m;
}

std::vector<double> RadialField::real_part() const {
  std::vector<double> m(values_.size());
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = values_[j].real();
  return m;
}

double l2_norm(const RadialField& u) {
  const auto& w = u.grid().weights();
  double s = 0.0;
  for (int j = 0; j < u.size(); ++j) s += w[j] * std::norm(u[j]);
  return std::sqrt(s);
}

double grad_norm(const RadialField& u) {
  const auto& g = u.grid();
  const auto& fw = g.face_weights();
  const double inv_h = 1.0 / g.h();
  const int J = u.size();
  double s = 0.0;
  for (int f = 0; f < J; ++f) {
    const cplx next = f + 1 < J ? u[f + 1] : cplx(0.0);
    s += fw[f] * std::norm((next - u[f]) * inv_h);
  }
  return std::sqrt(s);
}

double potential_term(const RadialField& u, double alpha, double b) {
  const auto& g = u.grid();
  if (!(b < g.N())) throw std::invalid_argument("potential_term: b must be < N");
  const auto& w = g.weights();
  double s = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double m = std::abs(u[j]);
    if (m == 0.0) continue;
    s += w[j] * std::pow(g.node(j), -b) * std::pow(m, alpha + 2.0);
  }
  return s;
}

cplx inner(const RadialField& u, const RadialField& v) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("inner: grids differ");
  const auto& w = u.grid().weights();
  cplx s = 0.0;
  for (int j = 0; j < u.size(); ++j) s += w[j] * u[j] * std::conj(v[j]);
  return s;
}

double lp_norm(const RadialField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto& w = u.grid().weights();
  double s = 0.0;
  for (int j = 0; j < u.size(); ++j) s += w[j] * std::pow(std::abs(u[j]), p);
  return std::pow(s, 1.0 / p);
}

LaplacianStencil laplacian_stencil(const RadialGrid& g) {
  const int J = g.J();
  const int N = g.N();
  const double h2 = g.h() * g.h();
  LaplacianStencil s{std::vector<double>(J), std::vector<double>(J), std::vector<double>(J)};
  for (int j = 0; j < J; ++j) {
    const double rj = std::pow(g.node(j), N - 1);
    const double out = std::pow(g.face(j), N - 1) / (rj * h2);
    const double in = j > 0 ? std::pow(g.face(j - 1), N - 1) / (rj * h2) : 0.0;
    s.lower[j] = in;
    s.upper[j] = j + 1 < J ? out : 0.0;
    s.diag[j] = -(in + out);
  }
  return s;
}

RadialField laplacian_radial(const RadialField& u) {
  const auto st = laplacian_stencil(u.grid());
  const int J = u.size();
  std::vector<cplx> out(J);
  for (int j = 0; j < J; ++j) {
    cplx v = st.diag[j] * u[j];
    if (j > 0) v += st.lower[j] * u[j - 1];
    if (j + 1 < J) v += st.upper[j] * u[j + 1];
    out[j] = v;
  }
  return RadialField(u.grid_ptr(), std::move(out));
}

StraussResult strauss_check(const RadialField& u, double R) {
  const auto& g = u.grid();
  if (!(R > 0.0) || !(R < g.r_max())) throw std::invalid_argument("strauss_check: R must lie in (0, r_max)");
  double lhs = 0.0;
  for (int j = 0; j < u.size(); ++j)
    if (g.node(j) >= R) lhs = std::max(lhs, std::abs(u[j]));
  const double rhs = std::pow(R, -(g.N() - 1) / 2.0) * std::sqrt(l2_norm(u) * grad_norm(u));
  // first-order allowance for the face-difference gradient and the node offset
  const double tol = 4.0 * g.h() / std::min(R, 1.0);
  return {lhs, rhs, tol, lhs <= rhs * (1.0 + tol)};
}

double boundary_mass_fraction(const RadialField& u, double fraction) {
  const auto& g = u.grid();
  const auto& w = g.weights();
  const double cut = (1.0 - fraction) * g.r_max();
  double inner_mass = 0.0, total = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double m = w[j] * std::norm(u[j]);
    total += m;
    if (g.node(j) >= cut) inner_mass += m;
  }
  return total > 0.0 ? inner_mass / total : 0.0;
}

cplx interpolate(const RadialField& u, double r) {
  const auto& g = u.grid();
  const int J = u.size();
  r = std::abs(r);
  const double x = r / g.h() - 0.5;  // fractional node index
  const int i0 = static_cast<int>(std::floor(x));
  if (i0 >= J) return 0.0;
  auto at = [&](int k) -> cplx {
    if (k < 0) k = -1 - k;  // even reflection: u_{-1-k} = u_k
    return k < J ? u[k] : cplx(0.0);
  };
  const double t = x - i0;
  // Lagrange weights on nodes i0-1, i0, i0+1, i0+2
  const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return w0 * at(i0 - 1) + w1 * at(i0) + w2 * at(i0 + 1) + w3 * at(i0 + 2);
}

RadialField rescale(const RadialField& u, double delta, double amplitude_exponent) {
  if (!(delta > 0.0)) throw std::invalid_argument("rescale: delta must be > 0");
  const double amp = std::pow(delta, amplitude_exponent);
  const auto& g = u.grid();
  std::vector<cplx> v(u.size());
  for (int j = 0; j < u.size(); ++j) v[j] = amp * interpolate(u, delta * g.node(j));
  return RadialField(u.grid_ptr(), std::move(v));
}

void write_field_csv(std::ostream& out, const RadialField& u, int precision) {
  out << "r,re,im\n";
  for (int j = 0; j < u.size(); ++j)
    out << format_real(u.grid().node(j), precision) << ',' << format_real(u[j].real(), precision) << ','
        << format_real(u[j].imag(), precision) << '\n';
}

RadialField read_field_csv(std::istream& in, int N) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("field csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,re,im") throw std::invalid_argument("field csv: header must be r,re,im");
  std::vector<double> r;
  std::vector<cplx> v;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw std::invalid_argument("field csv: expected 3 columns");
    double x[3];
    for (int k = 0; k < 3; ++k) {
      // from_chars, unlike stod, accepts the subnormals we write ourselves
      const std::string& c = cells[k];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), x[k]);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw std::invalid_argument("field csv: malformed number in '" + line + "'");
    }
    r.push_back(x[0]);
    v.emplace_back(x[1], x[2]);
  }
  if (r.size() < 4) throw std::invalid_argument("field csv: need at least 4 rows");
  const double h = 2.0 * r[0];
  for (std::size_t j = 0; j < r.size(); ++j)
    if (std::abs(r[j] - (j + 0.5) * h) > 1e-9 * std::max(1.0, r[j]))
      throw std::invalid_argument("field csv: nodes must be r_j = (j+1/2)h");
  return RadialField(RadialGrid::create(N, static_cast<int>(r.size()), h), std::move(v));
}

}  // namespace inls
