#include "orbitlab/builtin.hpp"

#include "orbitlab/errors.hpp"

#include <charconv>
#include <vector>

namespace orbitlab {

namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// Matrix of X -> -X^T in the coordinates of `basis`.
LinearMap minus_transpose(const std::vector<Matrix>& basis, const std::string& description) {
  const int dim = static_cast<int>(basis.size());
  const Eigen::Index m = basis.front().rows();
  Matrix stacked(m * m, dim);
  for (int i = 0; i < dim; ++i) stacked.col(i) = basis[static_cast<std::size_t>(i)].reshaped();
  Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
  Matrix theta(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const Matrix image = -basis[static_cast<std::size_t>(j)].transpose();
    const Vector flat = image.reshaped();
    theta.col(j) = qr.solve(flat);
  }
  theta = theta.unaryExpr([](double v) { return std::abs(v) < 1e-14 ? 0.0 : v; });
  return LinearMap(theta, description);
}

BuiltinAlgebra make_sl(int n, double tol) {
  if (n < 2) throw InputError("sl(n) needs n >= 2");
  std::vector<Matrix> basis;
  std::vector<std::string> labels;
  for (int k = 0; k + 1 < n; ++k) {
    basis.push_back(unit(n, k, k) - unit(n, k + 1, k + 1));
    labels.push_back(n == 2 ? "H" : "H" + std::to_string(k + 1));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      basis.push_back(unit(n, i, j));
      labels.push_back(n == 2 ? "E" : "E" + std::to_string(i + 1) + std::to_string(j + 1));
      basis.push_back(unit(n, j, i));
      labels.push_back(n == 2 ? "F" : "E" + std::to_string(j + 1) + std::to_string(i + 1));
    }
  const std::string name = "sl:" + std::to_string(n);
  return {name, algebra_from_matrices(basis, labels, tol), minus_transpose(basis, "theta(X) = -X^T on " + name),
          std::nullopt};
}

BuiltinAlgebra make_so(int p, int q, double tol) {
  if (p < 0 || q < 0 || p + q < 2) throw InputError("so(p,q) needs p, q >= 0 and p + q >= 2");
  const int n = p + q;
  std::vector<Matrix> basis;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool compact = (i < p) == (j < p);
      basis.push_back(compact ? Matrix(unit(n, i, j) - unit(n, j, i)) : Matrix(unit(n, i, j) + unit(n, j, i)));
      labels.push_back((compact ? "K" : "P") + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  const std::string name = "so:" + std::to_string(p) + "," + std::to_string(q);
  return {name, algebra_from_matrices(basis, labels, tol), minus_transpose(basis, "theta(X) = -X^T on " + name),
          std::nullopt};
}

BuiltinAlgebra make_heisenberg(int dim, double tol) {
  if (dim < 3 || dim % 2 == 0) throw InputError("heisenberg needs an odd dimension >= 3");
  const int m = (dim - 1) / 2;
  std::vector<std::string> labels;
  if (m == 1) {
    labels = {"e1", "e2", "e3"};
  } else {
    for (int i = 0; i < m; ++i) labels.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < m; ++i) labels.push_back("y" + std::to_string(i + 1));
    labels.push_back("z");
  }
  std::vector<BracketEntry> brackets;
  for (int i = 0; i < m; ++i) brackets.push_back({i, m + i, dim - 1, 1.0});
  // beta = 4 Ric / |mu|^2 for the standard (nilsoliton) bracket; m = 1 gives diag(-1,-1,1)
  Vector beta_diag = Vector::Constant(dim, -1.0 / m);
  beta_diag(dim - 1) = 1.0;
  return {"heisenberg:" + std::to_string(dim), LieAlgebra(dim, labels, brackets, tol), std::nullopt,
          Matrix(beta_diag.asDiagonal())};
}

BuiltinAlgebra make_abelian(int dim, double tol) {
  if (dim < 1) throw InputError("abelian needs dimension >= 1");
  return {"abelian:" + std::to_string(dim), LieAlgebra(dim, {}, {}, tol), std::nullopt, std::nullopt};
}

BuiltinAlgebra make_borel_sl2(double tol) {
  return {"borel_sl2", LieAlgebra(2, {"A", "E"}, {{0, 1, 1, 1.0}}, tol), std::nullopt, std::nullopt};
}

BuiltinAlgebra sum_of(const BuiltinAlgebra& a, const BuiltinAlgebra& b) {
  std::optional<LinearMap> theta;
  if (a.theta && b.theta) {
    const int na = a.algebra.dim(), nb = b.algebra.dim();
    Matrix t = Matrix::Zero(na + nb, na + nb);
    t.topLeftCorner(na, na) = a.theta->matrix;
    t.bottomRightCorner(nb, nb) = b.theta->matrix;
    theta = LinearMap(t, a.theta->description + " (+) " + b.theta->description);
  }
  return {a.name + "+" + b.name, direct_sum(a.algebra, b.algebra), theta, std::nullopt};
}

std::vector<int> parse_params(std::string_view text, std::string_view whole) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view token = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw InputError("bad builtin parameter '" + std::string(token) + "' in '" + std::string(whole) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

BuiltinAlgebra builtin_algebra(std::string_view name, std::span<const int> params, double tolerance) {
  auto expect = [&](std::size_t count) {
    if (params.size() != count)
      throw InputError("builtin '" + std::string(name) + "' takes " + std::to_string(count) + " parameter(s)");
  };
  if (name == "sl") {
    expect(1);
    return make_sl(params[0], tolerance);
  }
  if (name == "so_pq" || name == "so") {
    expect(2);
    return make_so(params[0], params[1], tolerance);
  }
  if (name == "heisenberg") {
    expect(1);
    return make_heisenberg(params[0], tolerance);
  }
  if (name == "abelian") {
    expect(1);
    return make_abelian(params[0], tolerance);
  }
  if (name == "borel_sl2") {
    expect(0);
    return make_borel_sl2(tolerance);
  }
  throw InputError("unknown builtin algebra '" + std::string(name) + "'");
}

BuiltinAlgebra parse_builtin(std::string_view spec, double tolerance) {
  if (spec.empty()) throw InputError("empty builtin name");
  const auto plus = spec.find('+');
  if (plus != std::string_view::npos) {
    return sum_of(parse_builtin(spec.substr(0, plus), tolerance), parse_builtin(spec.substr(plus + 1), tolerance));
  }
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  std::vector<int> params;
  if (colon != std::string_view::npos) params = parse_params(spec.substr(colon + 1), spec);
  return builtin_algebra(name, params, tolerance);
}

}  // namespace orbitlab
