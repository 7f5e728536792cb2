#include "dynlap/laplacian.hpp"

#include <cmath>
#include <vector>

namespace dynlap {

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::StaticLaplacian: return "static_laplacian";
    case OperatorKind::DynamicLaplacian: return "dynamic_laplacian";
    case OperatorKind::MultistepLaplacian: return "multistep_laplacian";
  }
  return "unknown";
}

namespace {

using Triplet = Eigen::Triplet<double>;

// Neighbor indices along one axis with mirror closure at non-periodic edges.
struct AxisNeighbors {
  std::size_t lo;
  std::size_t hi;
};

AxisNeighbors neighbors(std::size_t i, std::size_t n, bool periodic) {
  if (periodic) return {(i + n - 1) % n, (i + 1) % n};
  if (i == 0) return {1, 1};
  if (i == n - 1) return {n - 2, n - 2};
  return {i - 1, i + 1};
}

DiscreteOperator combine(const std::vector<DiscreteOperator>& laps, const std::vector<SparseMatrix>& transfers,
                         const std::vector<double>& weights, OperatorKind kind) {
  const Grid& grid = laps.front().grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  SparseMatrix acc(n, n);
  std::string fingerprint;
  std::size_t q = 0;
  for (std::size_t i = 0; i < laps.size(); ++i) {
    const SparseMatrix& T = transfers[i];
    if (T.cols() != n || T.rows() != laps[i].matrix.rows() || laps[i].matrix.rows() != laps[i].matrix.cols()) {
      throw Error(ErrorKind::Dimension, "transfer matrix " + std::to_string(i) + " does not conform");
    }
    SparseMatrix term = is_identity(T) ? laps[i].matrix : SparseMatrix(T.transpose() * laps[i].matrix * T);
    if (i == 0) {
      acc = weights[i] * term;
    } else {
      acc = SparseMatrix(acc + weights[i] * term);
    }
    if (!laps[i].fingerprint.empty()) {
      fingerprint += (fingerprint.empty() ? "" : ";") + laps[i].fingerprint;
    }
    q = std::max(q, laps[i].q_per_axis);
  }
  acc.makeCompressed();
  return {std::move(acc), grid, kind, fingerprint, q};
}

}  // namespace

DiscreteOperator assemble_laplacian(const Grid& grid) {
  const Domain& d = grid.domain();
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  if (!d.periodic_x && nx < 3) throw Error(ErrorKind::GridTooCoarse, "need nx >= 3 on a non-periodic x axis");
  if (!d.periodic_y && ny < 3) throw Error(ErrorKind::GridTooCoarse, "need ny >= 3 on a non-periodic y axis");
  const double ax = 1.0 / (grid.box_width() * grid.box_width());
  const double ay = 1.0 / (grid.box_height() * grid.box_height());
  std::vector<Triplet> trips;
  trips.reserve(5 * grid.size());
  for (std::size_t j = 0; j < ny; ++j) {
    const AxisNeighbors nj = neighbors(j, ny, d.periodic_y);
    for (std::size_t i = 0; i < nx; ++i) {
      const AxisNeighbors ni = neighbors(i, nx, d.periodic_x);
      const auto row = static_cast<int>(grid.index(i, j));
      trips.emplace_back(row, row, -2.0 * ax - 2.0 * ay);
      trips.emplace_back(row, static_cast<int>(grid.index(ni.lo, j)), ax);
      trips.emplace_back(row, static_cast<int>(grid.index(ni.hi, j)), ax);
      trips.emplace_back(row, static_cast<int>(grid.index(i, nj.lo)), ay);
      trips.emplace_back(row, static_cast<int>(grid.index(i, nj.hi)), ay);
    }
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  SparseMatrix L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  L.prune(0.0);
  L.makeCompressed();
  return {std::move(L), grid, OperatorKind::StaticLaplacian, "", 0};
}

DiscreteOperator assemble_dynamic_laplacian(const DiscreteOperator& lap_source, const DiscreteOperator& lap_image,
                                            const SparseMatrix& transfer) {
  if (transfer.rows() != lap_image.matrix.rows() || transfer.cols() != lap_source.matrix.rows()) {
    throw Error(ErrorKind::Dimension, "transfer matrix shape does not match the Laplacians");
  }
  const auto n = static_cast<Eigen::Index>(lap_source.grid.size());
  DiscreteOperator image = lap_image;
  DiscreteOperator out =
      combine({lap_source, image}, {sparse_identity(n), transfer}, {0.5, 0.5}, OperatorKind::DynamicLaplacian);
  return out;
}

DiscreteOperator assemble_multistep(const std::vector<DiscreteOperator>& laps,
                                    const std::vector<SparseMatrix>& transfers, const std::vector<double>& weights) {
  if (laps.empty() || laps.size() != transfers.size() || laps.size() != weights.size()) {
    throw Error(ErrorKind::Configuration, "multistep lists must be non-empty and of equal length");
  }
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::Configuration, "multistep weights sum to " + std::to_string(sum) + ", not 1");
  }
  if (!is_identity(transfers.front())) {
    throw Error(ErrorKind::Configuration, "the first multistep transfer must be the identity");
  }
  return combine(laps, transfers, weights, OperatorKind::MultistepLaplacian);
}

std::vector<double> trapezoid_weights(std::size_t samples) {
  if (samples < 2) throw Error(ErrorKind::Configuration, "trapezoidal rule needs at least 2 samples");
  const double h = 1.0 / static_cast<double>(samples - 1);
  std::vector<double> w(samples, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

DiscreteOperator symmetrized(const DiscreteOperator& op) {
  DiscreteOperator out = op;
  SparseMatrix t = op.matrix.transpose();
  out.matrix = SparseMatrix(0.5 * (op.matrix + t));
  out.matrix.makeCompressed();
  return out;
}

double kernel_defect(const DiscreteOperator& op) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(op.matrix, r); it; ++it) s += it.value();
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace dynlap
