#pragma once

// Mean-vector / covariance-matrix description of m-mode Gaussian states.
//
// Conventions used everywhere in gtsim:
//   * quadratures are ordered (q_1, ..., q_m, p_1, ..., p_m);
//   * Omega = [[0, 1], [-1, 0]] (x) I_m;
//   * the vacuum has covariance matrix I (so a thermal state with mean photon
//     number N has covariance (2N + 1) I).

#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPhysicalTol = 1e-10;

class SymplecticForm {
 public:
  explicit SymplecticForm(int modes);

  int modes() const { return modes_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  int modes_;
  Matrix matrix_;
};

struct CovarianceDiagnostics {
  bool valid = false;
  double min_eigenvalue = 0.0;  // of the Hermitian matrix V + i Omega
  double asymmetry = 0.0;       // max |V - V^T|
  std::string message;
};

/// True iff V is symmetric and V + i Omega >= 0 up to kPhysicalTol (scaled by
/// max(1, ||V||)). Throws std::invalid_argument on a dimension mismatch.
CovarianceDiagnostics validate_covariance(const Matrix& cov, const SymplecticForm& omega);

class GaussianState {
 public:
  /// Throws std::invalid_argument unless cov is a valid quantum covariance matrix.
  GaussianState(Vector mean, Matrix cov);

  static GaussianState vacuum(int modes);
  static GaussianState thermal(double mean_photons);

  int modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  bool is_zero_mean(double tol = 1e-14) const;

 private:
  Vector mean_;
  Matrix cov_;
};

/// Two-mode squeezed vacuum with mean photon number n_s per mode; modes
/// ordered (R, A).
GaussianState make_tmsv_state(double n_s);

/// Direct sum: the modes of `b` are appended after those of `a`.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Marginal on the listed modes (in the listed order).
GaussianState reduce(const GaussianState& state, std::span<const int> modes);

/// S V S^T, S mu.
GaussianState transform(const GaussianState& state, const Matrix& symplectic);

struct WilliamsonDecomposition {
  Matrix symplectic;  // S with V = S (D (+) D) S^T
  Vector nus;         // symplectic eigenvalues, ascending
  bool physical = true;
};

WilliamsonDecomposition williamson(const GaussianState& state);

/// Raw-matrix variant. Requires cov symmetric positive definite; a covariance
/// with some nu < 1 - kPhysicalTol is returned with physical == false.
WilliamsonDecomposition williamson(const Matrix& cov);

Matrix reconstruct(const WilliamsonDecomposition& decomposition);

/// max |S Omega S^T - Omega|.
double symplectic_residual(const Matrix& s);

// Gaussian unitaries acting on an m-mode system.
Matrix beamsplitter(int modes, int i, int j, double theta);
Matrix single_mode_squeezer(int modes, int i, double r);
Matrix phase_rotation(int modes, int i, double phi);

/// Product of random beamsplitters, squeezers (|r| <= max_squeeze) and phase
/// rotations.
Matrix random_symplectic(int modes, std::mt19937_64& rng, double max_squeeze = 0.5);

/// Positions of the quadratures of `modes` inside an m-mode quadrature vector:
/// (q of each listed mode..., p of each listed mode...).
std::vector<int> quadrature_indices(std::span<const int> modes, int total_modes);

/// Places a (2k x 2k) matrix acting on `target_modes` into a (2m x 2m) one;
/// untouched diagonal entries are set to `diag_fill`.
Matrix embed_matrix(const Matrix& local, std::span<const int> target_modes, int total_modes,
                    double diag_fill);

Vector embed_vector(const Vector& local, std::span<const int> target_modes, int total_modes);

/// Covariance-level displacement: mean + z.
GaussianState displace(const GaussianState& state, const Vector& z);

}  // namespace gt
