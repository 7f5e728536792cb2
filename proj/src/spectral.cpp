#include "dynlap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>
#include <Eigen/SVD>

namespace dynlap {

namespace {

using Complex = std::complex<double>;
using ColMajorSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct RitzPair {
  Complex value;
  Vector vector;  // Euclidean unit norm
};

// Order: descending real part, then descending imaginary part for determinism.
bool ritz_before(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

Vector real_ritz_vector(const Eigen::VectorXcd& y) {
  // rotate so the largest component is real, then take the real part
  Eigen::Index arg = 0;
  y.cwiseAbs().maxCoeff(&arg);
  const Complex phase = std::abs(y(arg)) > 0.0 ? std::conj(y(arg)) / std::abs(y(arg)) : Complex(1.0);
  Vector v = (y * phase).real();
  const double nv = v.norm();
  if (nv > 0.0) v /= nv;
  return v;
}

// Eigenpairs of a small dense matrix, sorted by ritz_before.
std::vector<std::pair<Complex, Eigen::VectorXcd>> dense_eigs(const DenseMatrix& H) {
  Eigen::EigenSolver<DenseMatrix> es(H, true);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "dense eigensolver failed");
  std::vector<std::pair<Complex, Eigen::VectorXcd>> out;
  out.reserve(static_cast<std::size_t>(H.rows()));
  for (Eigen::Index i = 0; i < H.rows(); ++i) out.emplace_back(es.eigenvalues()(i), es.eigenvectors().col(i));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return ritz_before(a.first, b.first); });
  return out;
}

// Real vectors for the leading `want` eigenpairs. A conjugate pair (from a
// nearly degenerate real pair, or a genuinely complex one) contributes the real
// and imaginary parts of one member, which together span its real invariant
// subspace; taking the real part of both members would give one vector twice.
template <class Lift>
std::vector<RitzPair> real_pairs(const std::vector<std::pair<Complex, Eigen::VectorXcd>>& eigs, std::size_t want,
                                 Lift&& lift) {
  std::vector<RitzPair> out;
  for (std::size_t i = 0; i < want && i < eigs.size(); ++i) {
    const Complex value = eigs[i].first;
    const bool paired = value.imag() != 0.0 && i + 1 < eigs.size() && eigs[i + 1].first == std::conj(value);
    if (!paired) {
      out.push_back({value, real_ritz_vector(lift(eigs[i].second))});
      continue;
    }
    const Eigen::VectorXcd y = lift(eigs[i].second);
    Eigen::Index arg = 0;
    y.cwiseAbs().maxCoeff(&arg);
    const Complex phase = std::conj(y(arg)) / std::abs(y(arg));
    Vector re = (y * phase).real();
    Vector im = (y * phase).imag();
    re.normalize();
    im -= re.dot(im) * re;
    if (im.norm() > 0.0) im.normalize();
    out.push_back({value, re});
    if (i + 1 < want) out.push_back({eigs[i + 1].first, im});
    ++i;
  }
  return out;
}

// Values reported as ComplexSpectrum rather than rounded to their real part.
bool reported_complex(Complex v) { return std::abs(v.imag()) > 1e-6 * std::max(1.0, std::abs(v.real())); }

double residual(const SparseMatrix& A, const Vector& u, double lambda) {
  return (A * u - lambda * u).norm();
}

DenseMatrix orthonormalize(const DenseMatrix& W) {
  Eigen::HouseholderQR<DenseMatrix> qr(W);
  return qr.householderQ() * DenseMatrix::Identity(W.rows(), W.cols());
}

std::vector<RitzPair> dense_path(const SparseMatrix& A, std::size_t want) {
  const DenseMatrix D(A);
  return real_pairs(dense_eigs(D), want, [](const Eigen::VectorXcd& y) { return y; });
}

std::vector<RitzPair> iterative_path(const SparseMatrix& A, std::size_t want, const SpectralOptions& opt,
                                     double norm, std::size_t& iterations) {
  const Eigen::Index n = A.rows();
  const auto m = static_cast<Eigen::Index>(
      std::min<std::size_t>(static_cast<std::size_t>(n), opt.subspace ? opt.subspace : std::max(2 * want, want + 12)));
  const double sigma = std::isnan(opt.shift) ? std::max(1e-6 * norm, 1e-12) : opt.shift;

  ColMajorSparse shifted = A;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  shifted.makeCompressed();
  Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::Convergence, "shift-invert factorization failed (shift " + std::to_string(sigma) + ")");
  }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrix V(n, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index r = 0; r < n; ++r) V(r, c) = gauss(rng);
  V = orthonormalize(V);

  std::vector<RitzPair> pairs;
  double worst = 0.0;
  for (iterations = 1; iterations <= opt.max_iterations; ++iterations) {
    DenseMatrix W = lu.solve(V);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "shift-invert solve failed");
    V = orthonormalize(W);
    const DenseMatrix AV = A * V;
    const DenseMatrix H = V.transpose() * AV;
    auto eigs = dense_eigs(H);
    pairs = real_pairs(eigs, want, [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return V * y; });
    worst = 0.0;
    for (std::size_t i = 0; i < want; ++i) {
      if (reported_complex(eigs[i].first)) {
        // complex Ritz value: measure the complex residual
        const Eigen::VectorXcd y = V * eigs[i].second;
        const Eigen::VectorXcd r = A * y - eigs[i].first * y;
        worst = std::max(worst, r.norm() / y.norm());
      } else {
        // the reported residual, so a small imaginary part must also converge away
        worst = std::max(worst, residual(A, pairs[i].vector, pairs[i].value.real()));
      }
    }
    if (worst <= opt.tol * norm) return pairs;
  }
  std::ostringstream msg;
  msg << "no convergence after " << opt.max_iterations << " iterations: worst residual " << worst
      << " vs target " << opt.tol * norm << " (block " << m << ", shift " << sigma << ")";
  throw Error(ErrorKind::Convergence, msg.str());
}

void normalize_field(Vector& v, double area) {
  const double w = std::sqrt(area * v.squaredNorm());
  if (w > 0.0) v /= w;
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      arg = i;
    }
  }
  if (v(arg) < 0.0) v = -v;
}

}  // namespace

std::vector<std::vector<std::size_t>> Spectrum::clusters(double gap) const {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!out.empty() && std::abs(eigenvalues[i] - eigenvalues[out.back().back()]) < gap) {
      out.back().push_back(i);
    } else {
      out.push_back({i});
    }
  }
  return out;
}

Spectrum solve_leading(const DiscreteOperator& op, std::size_t k, const SpectralOptions& options) {
  const SparseMatrix& A = op.matrix;
  const auto n = static_cast<std::size_t>(A.rows());
  if (k == 0 || k >= n) throw Error(ErrorKind::InvalidArgument, "need 0 < k < n eigenpairs");
  const std::size_t want = options.deflate_constant ? k + 1 : k;
  if (want >= n) throw Error(ErrorKind::InvalidArgument, "deflation needs k + 1 < n");

  Spectrum s;
  s.operator_norm = norm_inf(A);
  const bool dense = options.method == EigenMethod::Dense ||
                     (options.method == EigenMethod::Auto && n <= options.dense_limit);
  std::vector<RitzPair> pairs;
  if (dense) {
    pairs = dense_path(A, want);
    s.method_used = EigenMethod::Dense;
  } else {
    pairs = iterative_path(A, want, options, s.operator_norm, s.iterations);
    s.method_used = EigenMethod::Iterative;
  }

  if (options.deflate_constant) {
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(n)) / std::sqrt(static_cast<double>(n));
    std::size_t drop = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double a = std::abs(pairs[i].vector.dot(ones));
      if (a > best) {
        best = a;
        drop = i;
      }
    }
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  pairs.resize(k);

  const double area = op.grid.box_area();
  for (RitzPair& p : pairs) {
    const double re = p.value.real();
    const double im = p.value.imag();
    if (reported_complex(p.value)) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "eigenvalue " << re << " + " << im << "i is not real";
      throw Error(ErrorKind::ComplexSpectrum, msg.str());
    }
    s.eigenvalues.push_back(re);
    s.imaginary_parts.push_back(im);
    s.residuals.push_back(residual(A, p.vector, re));
    Vector v = p.vector;
    normalize_field(v, area);
    s.eigenvectors.emplace_back(op.grid, std::vector<double>(v.data(), v.data() + v.size()));
  }
  return s;
}

double rayleigh_quotient(const DiscreteOperator& op, const ScalarField& f) {
  if (f.size() != static_cast<std::size_t>(op.matrix.rows())) {
    throw Error(ErrorKind::Dimension, "field size does not match operator");
  }
  const Eigen::Map<const Vector> v(f.values.data(), static_cast<Eigen::Index>(f.size()));
  const double area = op.grid.box_area();
  const double denom = area * v.squaredNorm();
  if (!(denom > 0.0)) throw Error(ErrorKind::DegenerateInput, "Rayleigh quotient of the zero field");
  const Vector Av = op.matrix * v;
  return area * v.dot(Av) / denom;
}

std::vector<double> principal_angle_sines(const DenseMatrix& U, const DenseMatrix& V) {
  if (U.cols() != V.cols() || U.rows() != V.rows()) {
    throw Error(ErrorKind::Dimension, "principal angles need blocks of equal shape");
  }
  const DenseMatrix Qu = orthonormalize(U);
  const DenseMatrix Qv = orthonormalize(V);
  // sines are the singular values of the part of Qv outside span(Qu);
  // this keeps full relative accuracy for tiny angles
  const DenseMatrix outside = Qv - Qu * (Qu.transpose() * Qv);
  Eigen::JacobiSVD<DenseMatrix> svd(outside);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    out.push_back(std::min(1.0, svd.singularValues()(i)));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

DenseMatrix eigenvector_block(const Spectrum& s, const std::vector<std::size_t>& indices) {
  const auto n = static_cast<Eigen::Index>(s.eigenvectors.at(indices.at(0)).size());
  DenseMatrix B(n, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const auto& vals = s.eigenvectors.at(indices[c]).values;
    B.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Vector>(vals.data(), n);
  }
  return B;
}

}  // namespace dynlap
