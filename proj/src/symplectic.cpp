#include "gt/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace gt {

namespace {

Matrix symmetric_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("covariance matrix is not positive definite");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

void check_mode(int modes, int i) {
  if (i < 0 || i >= modes) throw std::out_of_range(fmt::format("mode {} out of range [0, {})", i, modes));
}

}  // namespace

SymplecticForm::SymplecticForm(int modes) : modes_(modes) {
  if (modes <= 0) throw std::invalid_argument("mode count must be positive");
  matrix_ = Matrix::Zero(2 * modes, 2 * modes);
  matrix_.topRightCorner(modes, modes) = Matrix::Identity(modes, modes);
  matrix_.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
}

CovarianceDiagnostics validate_covariance(const Matrix& cov, const SymplecticForm& omega) {
  const auto n = 2 * omega.modes();
  if (cov.rows() != n || cov.cols() != n) {
    throw std::invalid_argument(
        fmt::format("covariance is {}x{}, expected {}x{}", cov.rows(), cov.cols(), n, n));
  }
  CovarianceDiagnostics out;
  out.asymmetry = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  CMatrix h = cov.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * omega.matrix().cast<std::complex<double>>();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (out.asymmetry > kSymmetryTol * scale) {
    out.message = fmt::format("covariance not symmetric (max asymmetry {:.3g})", out.asymmetry);
  } else if (out.min_eigenvalue < -kPhysicalTol * scale) {
    out.message = fmt::format("V + i Omega has eigenvalue {:.6g} < 0", out.min_eigenvalue);
  } else {
    out.valid = true;
  }
  return out;
}

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("mean vector must have even, nonzero length");
  }
  const auto diag = validate_covariance(cov_, SymplecticForm(modes()));
  if (!diag.valid) throw std::invalid_argument("invalid Gaussian state: " + diag.message);
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

GaussianState GaussianState::vacuum(int modes) {
  return GaussianState(Vector::Zero(2 * modes), Matrix::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::thermal(double mean_photons) {
  if (!(mean_photons >= 0.0)) throw std::invalid_argument("thermal photon number must be >= 0");
  return GaussianState(Vector::Zero(2), (2.0 * mean_photons + 1.0) * Matrix::Identity(2, 2));
}

bool GaussianState::is_zero_mean(double tol) const { return mean_.cwiseAbs().maxCoeff() <= tol; }

GaussianState make_tmsv_state(double n_s) {
  if (!(n_s >= 0.0)) throw std::invalid_argument("TMSV photon number must be >= 0");
  const double a = 2.0 * n_s + 1.0;
  const double b = 2.0 * std::sqrt(n_s * (n_s + 1.0));
  Matrix v(4, 4);
  // (q_R, q_A, p_R, p_A)
  v << a, b, 0, 0,
       b, a, 0, 0,
       0, 0, a, -b,
       0, 0, -b, a;
  return GaussianState(Vector::Zero(4), v);
}

std::vector<int> quadrature_indices(std::span<const int> modes, int total_modes) {
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (int m : modes) {
    check_mode(total_modes, m);
    idx.push_back(m);
  }
  for (int m : modes) idx.push_back(total_modes + m);
  return idx;
}

Matrix embed_matrix(const Matrix& local, std::span<const int> target_modes, int total_modes,
                    double diag_fill) {
  const auto k = static_cast<Eigen::Index>(target_modes.size());
  if (local.rows() != 2 * k || local.cols() != 2 * k) {
    throw std::invalid_argument("local matrix does not match the number of target modes");
  }
  std::vector<int> sorted(target_modes.begin(), target_modes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("target modes must be distinct");
  }
  const auto idx = quadrature_indices(target_modes, total_modes);
  Matrix out = diag_fill * Matrix::Identity(2 * total_modes, 2 * total_modes);
  for (Eigen::Index r = 0; r < 2 * k; ++r) {
    for (Eigen::Index c = 0; c < 2 * k; ++c) out(idx[r], idx[c]) = local(r, c);
  }
  return out;
}

Vector embed_vector(const Vector& local, std::span<const int> target_modes, int total_modes) {
  const auto idx = quadrature_indices(target_modes, total_modes);
  if (local.size() != static_cast<Eigen::Index>(idx.size())) {
    throw std::invalid_argument("local vector does not match the number of target modes");
  }
  Vector out = Vector::Zero(2 * total_modes);
  for (std::size_t i = 0; i < idx.size(); ++i) out(idx[i]) = local(static_cast<Eigen::Index>(i));
  return out;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int ma = a.modes();
  const int mb = b.modes();
  const int m = ma + mb;
  std::vector<int> first(ma), second(mb);
  std::iota(first.begin(), first.end(), 0);
  std::iota(second.begin(), second.end(), ma);
  Matrix v = embed_matrix(a.cov(), first, m, 0.0);
  const auto ib = quadrature_indices(second, m);
  for (int r = 0; r < 2 * mb; ++r) {
    for (int c = 0; c < 2 * mb; ++c) v(ib[r], ib[c]) = b.cov()(r, c);
  }
  Vector mu = embed_vector(a.mean(), first, m) + embed_vector(b.mean(), second, m);
  return GaussianState(std::move(mu), std::move(v));
}

GaussianState reduce(const GaussianState& state, std::span<const int> modes) {
  const auto idx = quadrature_indices(modes, state.modes());
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix v(n, n);
  Vector mu(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    mu(r) = state.mean()(idx[r]);
    for (Eigen::Index c = 0; c < n; ++c) v(r, c) = state.cov()(idx[r], idx[c]);
  }
  return GaussianState(std::move(mu), std::move(v));
}

GaussianState transform(const GaussianState& state, const Matrix& symplectic) {
  return GaussianState(symplectic * state.mean(), symplectic * state.cov() * symplectic.transpose());
}

GaussianState displace(const GaussianState& state, const Vector& z) {
  if (z.size() != state.mean().size()) throw std::invalid_argument("displacement has wrong length");
  return GaussianState(state.mean() + z, state.cov());
}

WilliamsonDecomposition williamson(const GaussianState& state) { return williamson(state.cov()); }

WilliamsonDecomposition williamson(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0) {
    throw std::invalid_argument("covariance must be a nonempty even-dimensional square matrix");
  }
  const auto m = cov.rows() / 2;
  const Matrix omega = SymplecticForm(static_cast<int>(m)).matrix();
  const Matrix sym = 0.5 * (cov + cov.transpose());
  const Matrix root = symmetric_sqrt(sym);

  // i V^{1/2} Omega V^{1/2} is Hermitian and similar to i V Omega; its
  // spectrum is {+-nu_k}.
  const Matrix a = root * omega * root;
  const CMatrix h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("Williamson eigensolver failed");

  struct Pair {
    double nu;
    Vector x;
    Vector y;
  };
  std::vector<Pair> pairs;
  pairs.reserve(m);
  for (Eigen::Index k = m; k < 2 * m; ++k) {
    CVector w = es.eigenvectors().col(k);
    // Fix the free phase: the largest p-component of w is made real positive.
    Eigen::Index pivot = m;
    for (Eigen::Index j = m; j < 2 * m; ++j) {
      if (std::abs(w(j)) > std::abs(w(pivot)) + 1e-12) pivot = j;
    }
    if (std::abs(w(pivot)) > 0.0) w *= std::conj(w(pivot)) / std::abs(w(pivot));
    pairs.push_back({es.eigenvalues()(k), std::sqrt(2.0) * w.real(), std::sqrt(2.0) * w.imag()});
  }
  // ascending nu; ties broken lexicographically on x for a deterministic S
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
    if (std::abs(l.nu - r.nu) > 1e-10) return l.nu < r.nu;
    return std::lexicographical_compare(l.x.data(), l.x.data() + l.x.size(), r.x.data(),
                                        r.x.data() + r.x.size());
  });

  // A x = nu y, A y = -nu x. With O = [y_1..y_m, x_1..x_m],
  // O^T A O = [[0, D], [-D, 0]], and S = V^{1/2} O (D (+) D)^{-1/2}.
  Matrix o(2 * m, 2 * m);
  Vector nus(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    nus(k) = pairs[k].nu;
    o.col(k) = pairs[k].y;
    o.col(m + k) = pairs[k].x;
  }
  Vector scale(2 * m);
  scale << nus.cwiseSqrt().cwiseInverse(), nus.cwiseSqrt().cwiseInverse();
  WilliamsonDecomposition out;
  out.symplectic = root * o * scale.asDiagonal();
  out.nus = nus;
  out.physical = nus.minCoeff() >= 1.0 - kPhysicalTol;
  return out;
}

Matrix reconstruct(const WilliamsonDecomposition& decomposition) {
  const auto m = decomposition.nus.size();
  Vector d(2 * m);
  d << decomposition.nus, decomposition.nus;
  return decomposition.symplectic * d.asDiagonal() * decomposition.symplectic.transpose();
}

double symplectic_residual(const Matrix& s) {
  const Matrix omega = SymplecticForm(static_cast<int>(s.rows() / 2)).matrix();
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

Matrix beamsplitter(int modes, int i, int j, double theta) {
  check_mode(modes, i);
  check_mode(modes, j);
  if (i == j) throw std::invalid_argument("beamsplitter needs two distinct modes");
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  for (int off : {0, modes}) {
    s(off + i, off + i) = c;
    s(off + i, off + j) = sn;
    s(off + j, off + i) = -sn;
    s(off + j, off + j) = c;
  }
  return s;
}

Matrix single_mode_squeezer(int modes, int i, double r) {
  check_mode(modes, i);
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  s(i, i) = std::exp(-r);
  s(modes + i, modes + i) = std::exp(r);
  return s;
}

Matrix phase_rotation(int modes, int i, double phi) {
  check_mode(modes, i);
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  s(i, i) = c;
  s(i, modes + i) = sn;
  s(modes + i, i) = -sn;
  s(modes + i, modes + i) = c;
  return s;
}

Matrix random_symplectic(int modes, std::mt19937_64& rng, double max_squeeze) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> squeeze(-max_squeeze, max_squeeze);
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  for (int layer = 0; layer < 2; ++layer) {
    for (int i = 0; i < modes; ++i) {
      s = phase_rotation(modes, i, angle(rng)) * s;
      s = single_mode_squeezer(modes, i, squeeze(rng)) * s;
    }
    for (int i = 0; i + 1 < modes; ++i) {
      for (int j = i + 1; j < modes; ++j) s = beamsplitter(modes, i, j, angle(rng)) * s;
    }
  }
  return s;
}

}  // namespace gt
