#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "svstokes/broken_polynomial.hpp"
#include "svstokes/criticality.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {

enum class SpaceKind { FullMeanZero, Reduced, Modified, Complement };
enum class FunctionalVariant { Point, Weighted };

std::string kind_name(SpaceKind kind);
std::string variant_name(FunctionalVariant variant);
FunctionalVariant parse_variant(std::string_view name);

/// Alternating sum of the traces at z of q on the patch triangles.
double functional_Atz(const BrokenPolynomial& q, const VertexPatch& patch);

/// Row r with A_{T,z}(q) = r . q over the full coefficient vector.
Eigen::SparseVector<double> atz_row(const Mesh& mesh, int z, int degree);

/// Correction functionals J_z of every super-critical vertex. Each J_z acts
/// on a single polynomial given as a modal block of some triangle K,
/// evaluated through its analytic extension:
///   point:    J_z(w) = w(z) / b|_{K_z}(z)
///   weighted: J_z(w) = (w, b|_{K_z}^ext)_{K'_z} / ||b|_{K_z}^ext||^2_{K'_z}
class CorrectionFunctional {
public:
  struct Entry {
    int z = -1;
    Companions triangles;
    BrokenPolynomial critical;  // b_{k-1,z}
    double b_norm2 = 0.0;       // ||b_{k-1,z}||^2
    double denominator = 0.0;   // b|_{K_z}(z) or ||b|_{K_z}^ext||^2_{K'_z}
  };

  /// Throws MissingCompanion if a super-critical vertex has no K'_z.
  CorrectionFunctional(const Mesh& mesh, int k, double eta, FunctionalVariant variant);

  FunctionalVariant variant() const noexcept { return variant_; }
  int k() const noexcept { return k_; }
  double eta() const noexcept { return eta_; }
  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  int size() const noexcept { return static_cast<int>(entries_.size()); }
  /// Position of z in entries(); throws PreconditionError if z is not corrected.
  int index_of(int z) const;

  /// Row j with J_z(q|_K^ext) = j . q.block(K).
  Eigen::VectorXd J_row(int index, int K) const;
  double J(int index, const BrokenPolynomial& q, int K) const { return J_row(index, K).dot(q.block(K)); }

  /// f_z(q) = J_z(q|_{K'_z}^ext) - J_z(q|_{K_z}^ext).
  double f(int index, const BrokenPolynomial& q) const;
  /// The same as a sparse row over the full coefficient vector.
  Eigen::SparseVector<double> f_row(int index) const;

private:
  const Mesh* mesh_;
  int k_;
  double eta_;
  FunctionalVariant variant_;
  std::vector<Entry> entries_;
};

inline double f_z(const BrokenPolynomial& q, const CorrectionFunctional& func, int z) {
  return func.f(func.index_of(z), q);
}

/// Subspace of piecewise P_{k-1} pressures. Reduced spaces are described by
/// independent constraint rows C (A_{T,z} rows of C_T(eta), each scaled to
/// unit length, and the mean row); modified spaces are the image of a
/// reduced space under E = I + G F. An explicit orthonormal basis of the
/// reduced space is built on request (dense, small meshes only).
struct PressureSpaceBasis {
  SpaceKind kind = SpaceKind::Reduced;
  const Mesh* mesh = nullptr;
  int k = 0;
  double eta = 0.0;
  std::vector<int> constrained;            // vertices of C_T(eta)
  std::vector<int> dropped;                // constrained vertices whose rows were dependent
  std::vector<int> corrected;              // SC_T(eta) for modified spaces
  Eigen::SparseMatrix<double, Eigen::RowMajor> constraints;
  Eigen::LLT<Eigen::MatrixXd> constraint_gram;  // of C C^T
  Eigen::MatrixXd G;                       // (b_z)_mvz columns
  Eigen::SparseMatrix<double, Eigen::RowMajor> F;  // f_z rows
  Eigen::MatrixXd basis;                   // explicit basis, empty unless requested
  std::vector<std::string> diagnostics;

  int degree() const noexcept { return k - 1; }
  int full_dim() const noexcept { return mesh->num_triangles() * modal_dim(k - 1); }
  int dim() const;
  bool has_basis() const noexcept { return basis.size() > 0; }

  /// Orthogonal projection onto the underlying reduced space.
  Eigen::VectorXd project_reduced(const Eigen::VectorXd& q) const;
  /// E q (identity for unmodified spaces).
  Eigen::VectorXd apply_E(const Eigen::VectorXd& q) const;
  /// E^T r.
  Eigen::VectorXd apply_Et(const Eigen::VectorXd& r) const;
};

/// P_{k-1,0}: only the mean constraint.
PressureSpaceBasis build_full_space(const Mesh& mesh, int k, bool explicit_basis = true);

/// M_{eta,k-1}. Dependent constraint rows (numerical rank, threshold
/// 1e-10 sigma_max) are dropped and reported in diagnostics.
PressureSpaceBasis build_reduced_space(const Mesh& mesh, int k, double eta, bool explicit_basis = true);

/// M^mod_{eta,k-1} = E(M_{eta,k-1}) with E q = q + sum_z f_z(q) (b_{k-1,z})_mvz.
PressureSpaceBasis inject_modified(const PressureSpaceBasis& reduced, const CorrectionFunctional& func);

/// Riesz representative of f_z in the reduced space. Throws PreconditionError
/// when z is not corrected and SingularGram on a defective basis.
BrokenPolynomial riesz_representative(const PressureSpaceBasis& reduced, int z, const CorrectionFunctional& func);

/// Basis of the orthogonal complement of M^mod_{eta,k-1} in P_{k-1,0}:
/// b_{k-1,z} for critical z that are not super-critical, phi_z for
/// super-critical z. Throws NotRobinson.
PressureSpaceBasis complement_basis(const Mesh& mesh, int k, double eta, const CorrectionFunctional& func);

/// Columns (b_{k-1,z})_mvz for z in C_T(eta): complement of M_{eta,k-1}.
PressureSpaceBasis reduced_complement_basis(const Mesh& mesh, int k, double eta);

struct Decomposition {
  Eigen::VectorXd projection;    // component in the space
  Eigen::VectorXd coefficients;  // coefficients against the complement columns
  double reconstruction_error = 0.0;
};

/// Splits q into its component in the space and its expansion in the given
/// complement basis (least squares against the complement columns).
Decomposition decompose_against(const PressureSpaceBasis& complement, const Eigen::VectorXd& q);

struct ModificationConstants {
  std::map<int, double> C_fz;  // ||b_z|| * ||f_z|| on the reduced space
  double C_f = 1.0;
};

ModificationConstants modification_constants(const PressureSpaceBasis& reduced, const CorrectionFunctional& func);

}  // namespace svstokes
