#include "dynlap/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace dynlap {

namespace {

using Row = std::vector<std::pair<int, int>>;  // (image box, count), sorted by box

void check_grids(const Grid& source, const Grid& image, const FlowMap& map, std::size_t q) {
  if (q == 0) throw Error(ErrorKind::InvalidArgument, "q_per_axis must be >= 1");
  if (!(source.domain() == map.source())) {
    throw Error(ErrorKind::Dimension, "source grid does not cover the map's source domain");
  }
  if (!(image.domain() == map.image())) {
    throw Error(ErrorKind::Dimension, "image grid does not cover the map's image domain");
  }
}

// Images this close below a box edge (in box widths) count for the box above.
// Test points that land exactly on an edge in exact arithmetic otherwise fall
// on either side depending on rounding, which breaks the column sums of P.
constexpr double kEdgeSnap = 1e-9;

std::size_t image_box(const Grid& image, Point p) {
  const Domain& d = image.domain();
  const Point w = d.wrap(p);
  auto nudge = [](double v, double lo, double hi, double h, bool periodic) {
    const double u = v + kEdgeSnap * h;
    return periodic || u < hi ? u : std::max(lo, v);
  };
  return image.box_index_of({nudge(w.x, d.x_min, d.x_max, image.box_width(), d.periodic_x),
                             nudge(w.y, d.y_min, d.y_max, image.box_height(), d.periodic_y)});
}

// Maps every test point of `box` and run-length encodes the sorted image boxes.
Row count_box(const Grid& source, const Grid& image, const FlowMap& map, std::size_t q, std::size_t box,
              std::vector<int>& scratch) {
  const auto [bi, bj] = source.box(box);
  const Domain& d = source.domain();
  const double x0 = d.x_min + static_cast<double>(bi) * source.box_width();
  const double y0 = d.y_min + static_cast<double>(bj) * source.box_height();
  const double qd = static_cast<double>(q);
  scratch.clear();
  for (std::size_t b = 0; b < q; ++b) {
    const double y = y0 + (static_cast<double>(b) + 0.5) / qd * source.box_height();
    for (std::size_t a = 0; a < q; ++a) {
      const Point p{x0 + (static_cast<double>(a) + 0.5) / qd * source.box_width(), y};
      try {
        scratch.push_back(static_cast<int>(image_box(image, map(p))));
      } catch (const Error& e) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "source box " << box << " test point (" << p.x << ", " << p.y << "): " << e.what();
        throw Error(e.kind(), msg.str());
      }
    }
  }
  std::sort(scratch.begin(), scratch.end());
  Row row;
  for (std::size_t k = 0; k < scratch.size();) {
    std::size_t e = k;
    while (e < scratch.size() && scratch[e] == scratch[k]) ++e;
    row.emplace_back(scratch[k], static_cast<int>(e - k));
    k = e;
  }
  return row;
}

TransitionMatrix assemble(const Grid& source, const Grid& image, const FlowMap& map, std::size_t q,
                          const std::vector<Row>& rows) {
  std::size_t nnz = 0;
  for (const Row& r : rows) nnz += r.size();
  const double total = static_cast<double>(q * q);
  SparseMatrix P(static_cast<Eigen::Index>(source.size()), static_cast<Eigen::Index>(image.size()));
  P.reserve(static_cast<Eigen::Index>(nnz));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    P.startVec(static_cast<Eigen::Index>(i));
    for (const auto& [j, c] : rows[i]) {
      P.insertBack(static_cast<Eigen::Index>(i), j) = static_cast<double>(c) / total;
    }
  }
  P.finalize();
  return {std::move(P), source, image, q, map.fingerprint()};
}

}  // namespace

TransitionMatrix build_ulam(const Grid& source, const Grid& image, const FlowMap& map, std::size_t q_per_axis) {
  check_grids(source, image, map, q_per_axis);
  const auto n = static_cast<long>(source.size());
  std::vector<Row> rows(source.size());
  // first failing box (lowest index) wins so errors are scheduling independent
  long failed_box = n;
  std::optional<Error> failure;

#pragma omp parallel
  {
    std::vector<int> scratch;
    scratch.reserve(q_per_axis * q_per_axis);
#pragma omp for schedule(dynamic, 16)
    for (long k = 0; k < n; ++k) {
      try {
        rows[static_cast<std::size_t>(k)] =
            count_box(source, image, map, q_per_axis, static_cast<std::size_t>(k), scratch);
      } catch (const Error& e) {
#pragma omp critical(dynlap_ulam_error)
        {
          if (k < failed_box) {
            failed_box = k;
            failure = e;
          }
        }
      }
    }
  }
  if (failure) throw *failure;
  return assemble(source, image, map, q_per_axis, rows);
}

TransitionMatrix build_ulam_serial(const Grid& source, const Grid& image, const FlowMap& map,
                                   std::size_t q_per_axis) {
  check_grids(source, image, map, q_per_axis);
  std::vector<Row> rows(source.size());
  std::vector<int> scratch;
  for (std::size_t k = 0; k < source.size(); ++k) {
    rows[k] = count_box(source, image, map, q_per_axis, k, scratch);
  }
  return assemble(source, image, map, q_per_axis, rows);
}

ScalarField pushforward(const TransitionMatrix& tm, const ScalarField& f) {
  if (!(f.grid == tm.source)) throw Error(ErrorKind::Dimension, "field does not live on the source grid");
  const Eigen::Map<const Vector> v(f.values.data(), static_cast<Eigen::Index>(f.size()));
  const Vector out = tm.P.transpose() * v;
  return ScalarField(tm.image, std::vector<double>(out.data(), out.data() + out.size()));
}

double row_stochastic_defect(const SparseMatrix& P) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < P.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(P, r); it; ++it) s += it.value();
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace dynlap
