#include "svstokes/pressure_spaces.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "svstokes/errors.hpp"
#include "svstokes/quadrature.hpp"

namespace svstokes {

std::string kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::FullMeanZero: return "full-mean-zero";
    case SpaceKind::Reduced: return "reduced";
    case SpaceKind::Modified: return "modified";
    case SpaceKind::Complement: return "complement";
  }
  return "unknown";
}

std::string variant_name(FunctionalVariant variant) {
  return variant == FunctionalVariant::Point ? "point" : "weighted";
}

FunctionalVariant parse_variant(std::string_view name) {
  if (name == "point") return FunctionalVariant::Point;
  if (name == "weighted") return FunctionalVariant::Weighted;
  throw InvalidParameter("unknown functional variant '" + std::string(name) + "'");
}

double functional_Atz(const BrokenPolynomial& q, const VertexPatch& patch) {
  const Point& z = q.mesh().vertex(patch.center);
  double s = 0.0;
  for (int l = 1; l <= patch.size(); ++l) s += (l % 2 == 0 ? 1.0 : -1.0) * q.value(patch.triangles[l - 1], z);
  return s;
}

Eigen::SparseVector<double> atz_row(const Mesh& mesh, int z, int degree) {
  const VertexPatch& patch = mesh.patch(z);
  const int dim = modal_dim(degree);
  Eigen::SparseVector<double> row(mesh.num_triangles() * dim);
  std::vector<std::pair<int, double>> entries;
  for (int l = 1; l <= patch.size(); ++l) {
    const int K = patch.triangles[l - 1];
    const Eigen::VectorXd v = modal_values(mesh, K, degree, mesh.vertex(z));
    for (int m = 0; m < dim; ++m) entries.emplace_back(K * dim + m, (l % 2 == 0 ? 1.0 : -1.0) * v(m));
  }
  std::sort(entries.begin(), entries.end());
  for (auto [i, v] : entries) row.insertBack(i) = v;
  return row;
}

// ---------------------------------------------------------------------------

CorrectionFunctional::CorrectionFunctional(const Mesh& mesh, int k, double eta, FunctionalVariant variant)
    : mesh_(&mesh), k_(k), eta_(eta), variant_(variant) {
  if (k < 1) throw InvalidParameter("pressure degree k - 1 must be >= 0");
  const int d = k - 1;
  const QuadratureRule rule = quadrature(2 * d);
  for (int z : critical_sets(mesh, eta).supercritical) {
    Entry e{z, companions(mesh, z), critical_function(mesh, z, k), 0.0, 0.0};
    e.b_norm2 = e.critical.l2_norm() * e.critical.l2_norm();
    if (variant == FunctionalVariant::Point) {
      e.denominator = e.critical.value(e.triangles.Kz, mesh.vertex(z));
    } else {
      const TrianglePoints T = triangle_points(mesh, e.triangles.Kz_prime);
      double s = 0.0;
      for (int i = 0; i < rule.size(); ++i) {
        const Eigen::Vector3d& b = rule.points[i];
        const double w = e.critical.value(e.triangles.Kz, b(0) * T[0] + b(1) * T[1] + b(2) * T[2]);
        s += rule.weights[i] * w * w;
      }
      e.denominator = mesh.area(e.triangles.Kz_prime) * s;
    }
    entries_.push_back(std::move(e));
  }
}

int CorrectionFunctional::index_of(int z) const {
  for (int i = 0; i < size(); ++i)
    if (entries_[i].z == z) return i;
  throw PreconditionError("vertex " + std::to_string(z) + " is not super-critical");
}

Eigen::VectorXd CorrectionFunctional::J_row(int index, int K) const {
  const Entry& e = entries_.at(static_cast<std::size_t>(index));
  const int d = k_ - 1;
  if (variant_ == FunctionalVariant::Point)
    return modal_values(*mesh_, K, d, mesh_->vertex(e.z)) / e.denominator;
  const QuadratureRule rule = quadrature(2 * d);
  const int Kp = e.triangles.Kz_prime;
  const TrianglePoints T = triangle_points(*mesh_, Kp);
  Eigen::VectorXd row = Eigen::VectorXd::Zero(modal_dim(d));
  for (int i = 0; i < rule.size(); ++i) {
    const Eigen::Vector3d& b = rule.points[i];
    const Point x = b(0) * T[0] + b(1) * T[1] + b(2) * T[2];
    row += rule.weights[i] * e.critical.value(e.triangles.Kz, x) * modal_values(*mesh_, K, d, x);
  }
  return mesh_->area(Kp) * row / e.denominator;
}

double CorrectionFunctional::f(int index, const BrokenPolynomial& q) const {
  const Entry& e = entries_.at(static_cast<std::size_t>(index));
  return J(index, q, e.triangles.Kz_prime) - J(index, q, e.triangles.Kz);
}

Eigen::SparseVector<double> CorrectionFunctional::f_row(int index) const {
  const Entry& e = entries_.at(static_cast<std::size_t>(index));
  const int dim = modal_dim(k_ - 1);
  const Eigen::VectorXd jp = J_row(index, e.triangles.Kz_prime);
  const Eigen::VectorXd jz = J_row(index, e.triangles.Kz);
  std::vector<std::pair<int, double>> entries;
  for (int m = 0; m < dim; ++m) {
    entries.emplace_back(e.triangles.Kz_prime * dim + m, jp(m));
    entries.emplace_back(e.triangles.Kz * dim + m, -jz(m));
  }
  std::sort(entries.begin(), entries.end());
  Eigen::SparseVector<double> row(mesh_->num_triangles() * dim);
  for (auto [i, v] : entries) row.insertBack(i) = v;
  return row;
}

// ---------------------------------------------------------------------------

int PressureSpaceBasis::dim() const {
  if (kind == SpaceKind::Complement) return static_cast<int>(basis.cols());
  return full_dim() - static_cast<int>(constraints.rows());
}

Eigen::VectorXd PressureSpaceBasis::project_reduced(const Eigen::VectorXd& q) const {
  const Eigen::VectorXd Cq = constraints * q;
  return q - constraints.transpose() * constraint_gram.solve(Cq);
}

Eigen::VectorXd PressureSpaceBasis::apply_E(const Eigen::VectorXd& q) const {
  if (G.cols() == 0) return q;
  return q + G * (F * q);
}

Eigen::VectorXd PressureSpaceBasis::apply_Et(const Eigen::VectorXd& r) const {
  if (G.cols() == 0) return r;
  return r + F.transpose() * (G.transpose() * r);
}

namespace {

PressureSpaceBasis constrained_space(const Mesh& mesh, int k, double eta, const std::vector<int>& vertices,
                                     SpaceKind kind, bool explicit_basis) {
  if (k < 1) throw InvalidParameter("velocity degree k must be >= 1");
  PressureSpaceBasis s;
  s.kind = kind;
  s.mesh = &mesh;
  s.k = k;
  s.eta = eta;
  s.constrained = vertices;
  const int d = k - 1;
  const int n = s.full_dim();

  std::vector<Eigen::SparseVector<double>> rows;
  for (int z : vertices) {
    Eigen::SparseVector<double> r = atz_row(mesh, z, d);
    r /= r.norm();
    rows.push_back(std::move(r));
  }
  {
    Eigen::VectorXd c = constant_coefficients(mesh, d);
    c.normalize();
    rows.push_back(c.sparseView());
  }

  // Rank-revealing selection of independent rows.
  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXd Ct(n, m);
  for (int i = 0; i < m; ++i) Ct.col(i) = Eigen::VectorXd(rows[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ct);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> keep;
  for (int i = 0; i < rank; ++i) keep.push_back(qr.colsPermutation().indices()(i));
  std::sort(keep.begin(), keep.end());
  if (rank < m) {
    for (int i = 0; i < m; ++i) {
      if (std::find(keep.begin(), keep.end(), i) != keep.end()) continue;
      if (i < static_cast<int>(vertices.size())) s.dropped.push_back(vertices[i]);
    }
    s.diagnostics.push_back("constraint rows rank deficient: rank " + std::to_string(rank) + " of " +
                            std::to_string(m));
  }

  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < rank; ++r) {
    for (Eigen::SparseVector<double>::InnerIterator it(rows[keep[r]]); it; ++it)
      trip.emplace_back(r, static_cast<int>(it.index()), it.value());
  }
  s.constraints.resize(rank, n);
  s.constraints.setFromTriplets(trip.begin(), trip.end());
  const Eigen::MatrixXd CCt = Eigen::MatrixXd(s.constraints * s.constraints.transpose());
  s.constraint_gram.compute(CCt);

  if (explicit_basis) {
    Eigen::MatrixXd Ck(n, rank);
    for (int r = 0; r < rank; ++r) Ck.col(r) = Ct.col(keep[r]);
    Eigen::HouseholderQR<Eigen::MatrixXd> hq(Ck);
    Eigen::MatrixXd Q = hq.householderQ();
    s.basis = Q.rightCols(n - rank);
  }
  return s;
}

}  // namespace

PressureSpaceBasis build_full_space(const Mesh& mesh, int k, bool explicit_basis) {
  return constrained_space(mesh, k, 0.0, {}, SpaceKind::FullMeanZero, explicit_basis);
}

PressureSpaceBasis build_reduced_space(const Mesh& mesh, int k, double eta, bool explicit_basis) {
  return constrained_space(mesh, k, eta, critical_sets(mesh, eta).critical, SpaceKind::Reduced, explicit_basis);
}

PressureSpaceBasis inject_modified(const PressureSpaceBasis& reduced, const CorrectionFunctional& func) {
  if (reduced.kind != SpaceKind::Reduced) throw PreconditionError("inject_modified needs a reduced space");
  if (func.k() != reduced.k || &func.mesh() != reduced.mesh)
    throw PreconditionError("correction functional does not match the space");
  PressureSpaceBasis s = reduced;
  s.kind = SpaceKind::Modified;
  const int n = s.full_dim();
  const int c = func.size();
  s.G.resize(n, c);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < c; ++i) {
    const auto& e = func.entries()[static_cast<std::size_t>(i)];
    s.corrected.push_back(e.z);
    s.G.col(i) = mean_value_zero(e.critical).coefficients();
    const Eigen::SparseVector<double> row = func.f_row(i);
    for (Eigen::SparseVector<double>::InnerIterator it(row); it; ++it)
      trip.emplace_back(i, static_cast<int>(it.index()), it.value());
  }
  s.F.resize(c, n);
  s.F.setFromTriplets(trip.begin(), trip.end());
  if (s.has_basis() && c > 0) s.basis += s.G * (s.F * s.basis);
  return s;
}

BrokenPolynomial riesz_representative(const PressureSpaceBasis& reduced, int z, const CorrectionFunctional& func) {
  if (reduced.kind != SpaceKind::Reduced) throw PreconditionError("Riesz representative needs a reduced space");
  const int index = func.index_of(z);
  if (reduced.constraint_gram.info() != Eigen::Success) throw SingularGram("constraint Gram matrix not positive definite");
  const Eigen::VectorXd g = Eigen::VectorXd(func.f_row(index));
  return BrokenPolynomial(*reduced.mesh, reduced.degree(), reduced.project_reduced(g));
}

PressureSpaceBasis complement_basis(const Mesh& mesh, int k, double eta, const CorrectionFunctional& func) {
  const auto flags = robinson_classify(mesh, eta);
  for (const auto& [z, ok] : flags)
    if (!ok) throw NotRobinson(z);
  const PressureSpaceBasis reduced = build_reduced_space(mesh, k, eta, false);
  const CriticalSets sets = critical_sets(mesh, eta);

  PressureSpaceBasis s;
  s.kind = SpaceKind::Complement;
  s.mesh = &mesh;
  s.k = k;
  s.eta = eta;
  s.constrained = sets.critical;
  s.corrected = sets.supercritical;
  const int n = s.full_dim();
  const double area = mesh.domain_area();

  std::map<int, Eigen::VectorXd> riesz;
  std::map<int, BrokenPolynomial> crit;
  for (int z : sets.critical) crit.emplace(z, critical_function(mesh, z, k));
  for (int z : sets.supercritical) riesz[z] = riesz_representative(reduced, z, func).coefficients();

  s.basis.resize(n, static_cast<Eigen::Index>(sets.critical.size()));
  int col = 0;
  for (int z : sets.critical) {
    const BrokenPolynomial& b = crit.at(z);
    if (!riesz.count(z)) {
      s.basis.col(col++) = b.coefficients();
      continue;
    }
    const double norm2 = b.l2_norm() * b.l2_norm();
    const double mean = b.integral() / area;
    Eigen::VectorXd bracket = mean_value_zero(b).coefficients();
    for (int y : sets.supercritical) bracket += mean * crit.at(y).integral() * riesz.at(y);
    s.basis.col(col++) = riesz.at(z) - bracket / norm2;
  }
  return s;
}

PressureSpaceBasis reduced_complement_basis(const Mesh& mesh, int k, double eta) {
  PressureSpaceBasis s;
  s.kind = SpaceKind::Complement;
  s.mesh = &mesh;
  s.k = k;
  s.eta = eta;
  s.constrained = critical_sets(mesh, eta).critical;
  s.basis.resize(s.full_dim(), static_cast<Eigen::Index>(s.constrained.size()));
  int col = 0;
  for (int z : s.constrained) s.basis.col(col++) = mean_value_zero(critical_function(mesh, z, k)).coefficients();
  return s;
}

Decomposition decompose_against(const PressureSpaceBasis& complement, const Eigen::VectorXd& q) {
  if (complement.kind != SpaceKind::Complement) throw PreconditionError("decompose_against needs a complement basis");
  Decomposition d;
  const Eigen::MatrixXd& W = complement.basis;
  if (W.cols() == 0) {
    d.projection = q;
    d.coefficients.resize(0);
    return d;
  }
  const Eigen::MatrixXd gram = W.transpose() * W;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  d.coefficients = ldlt.solve(W.transpose() * q);
  d.projection = q - W * d.coefficients;
  d.reconstruction_error = (q - d.projection - W * d.coefficients).norm();
  return d;
}

ModificationConstants modification_constants(const PressureSpaceBasis& reduced, const CorrectionFunctional& func) {
  ModificationConstants c;
  for (int i = 0; i < func.size(); ++i) {
    const auto& e = func.entries()[static_cast<std::size_t>(i)];
    const double phi = riesz_representative(reduced, e.z, func).l2_norm();
    c.C_fz[e.z] = std::sqrt(e.b_norm2) * phi;
    c.C_f += c.C_fz[e.z];
  }
  return c;
}

}  // namespace svstokes
