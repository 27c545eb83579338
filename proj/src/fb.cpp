#include "oblab/fb.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oblab {

namespace {

double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += a[d] * b[d];
  return s;
}

double norm(const Point& a, int dim) { return std::sqrt(dot(a, a, dim)); }

bool is_fb_node(const FreeBoundaryGeometry& geom, const Point& x) {
  const Grid& g = geom.grid;
  std::array<int, 3> idx{0, 0, 0};
  for (int d = 0; d < g.dim; ++d) {
    const double u = (x[d] + g.half_width) / g.spacing;
    const int i = static_cast<int>(std::lround(u));
    if (i < 0 || i >= g.nodes_per_axis ||
        std::abs(u - static_cast<double>(i)) > 1e-6) {
      return false;
    }
    idx[d] = i;
  }
  return geom.fb[g.flatten(idx)] != 0;
}

}  // namespace

std::vector<Point> FreeBoundaryGeometry::fb_points() const {
  std::vector<Point> pts;
  pts.reserve(fb_nodes.size());
  for (std::size_t i : fb_nodes) pts.push_back(grid.coords(i));
  return pts;
}

FreeBoundaryGeometry extract_geometry(const ScalarField& w, double tau_pos) {
  const Grid& g = w.grid;
  FreeBoundaryGeometry geom;
  geom.grid = g;
  geom.tau_pos = tau_pos < 0.0 ? g.spacing * g.spacing / 100.0 : tau_pos;
  const std::size_t n = g.node_count();
  geom.positive.assign(n, 0);
  geom.contact.assign(n, 0);
  geom.fb.assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    if (g.is_boundary(i)) continue;
    if (w.values[i] > geom.tau_pos) {
      geom.positive[i] = 1;
    } else {
      geom.contact[i] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!geom.contact[i]) continue;
    for (int d = 0; d < g.dim; ++d) {
      const std::size_t s = g.stride(d);
      if (geom.positive[i - s] || geom.positive[i + s]) {
        geom.fb[i] = 1;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (geom.positive[i]) geom.positive_nodes.push_back(i);
    if (geom.contact[i]) geom.contact_nodes.push_back(i);
    if (geom.fb[i]) geom.fb_nodes.push_back(i);
  }
  return geom;
}

double contact_density(const FreeBoundaryGeometry& geom, const Point& x,
                       double r) {
  const Grid& g = geom.grid;
  const double h = g.spacing;
  if (r < 4.0 * h - 1e-12) {
    throw std::invalid_argument("contact_density radius must be >= 4h");
  }
  for (int d = 0; d < g.dim; ++d) {
    if (std::abs(x[d]) + r > g.half_width + 1e-12) {
      throw std::invalid_argument("contact_density ball must lie in the box");
    }
  }
  const auto ball = ball_nodes(g, x, r, BallClosure::open);
  if (ball.empty()) {
    throw std::invalid_argument("contact_density ball contains no nodes");
  }
  double num = 0.0;
  for (std::size_t i : ball) {
    if (geom.contact[i]) num += geom.fb[i] ? 0.5 : 1.0;
  }
  return num / static_cast<double>(ball.size());
}

ClassifyResult classify_point(const FreeBoundaryGeometry& geom, const Point& x,
                              std::vector<double> radii) {
  if (radii.empty()) {
    throw std::invalid_argument("classify_point needs at least one radius");
  }
  if (!is_fb_node(geom, x)) {
    throw std::invalid_argument(
        "classification base point is not a free-boundary node");
  }
  std::sort(radii.begin(), radii.end(), std::greater<double>());
  ClassifyResult out;
  out.radii = radii;
  for (double r : radii) out.densities.push_back(contact_density(geom, x, r));

  const double d_min = out.densities.back();
  if (d_min <= 0.1) {
    out.cls = PointClass::singular;
    return out;
  }
  bool in_band = d_min >= 0.4 && d_min <= 0.6;
  bool settles = true;
  const std::size_t k0 = out.densities.size() > 3 ? out.densities.size() - 3 : 0;
  for (std::size_t k = k0; k + 1 < out.densities.size(); ++k) {
    if (std::abs(out.densities[k + 1] - 0.5) >
        std::abs(out.densities[k] - 0.5) + 0.02) {
      settles = false;
    }
  }
  out.cls = (in_band && settles) ? PointClass::regular
                                 : PointClass::undetermined;
  return out;
}

ScalarField rescale(const ScalarField& w, const Point& x0, double eps,
                    const Grid& target) {
  const Grid& src = w.grid;
  if (eps < 16.0 * src.spacing - 1e-12) {
    throw std::invalid_argument(
        "rescale factor must be >= 16 source spacings");
  }
  for (int d = 0; d < src.dim; ++d) {
    if (std::abs(x0[d]) + eps * target.half_width >
        src.half_width + 1e-12) {
      throw std::invalid_argument(
          "rescale window exceeds the source box");
    }
  }
  if (target.dim != src.dim) {
    throw std::invalid_argument("rescale target dimension mismatch");
  }
  ScalarField out;
  out.grid = target;
  out.values.resize(target.node_count());
  const double inv = 1.0 / (eps * eps);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    Point y = target.coords(i);
    Point p{0.0, 0.0, 0.0};
    for (int d = 0; d < src.dim; ++d) p[d] = x0[d] + eps * y[d];
    out.values[i] = inv * interpolate(w, p);
  }
  return out;
}

std::optional<double> hausdorff_distance(std::span<const Point> a,
                                         std::span<const Point> b, int dim) {
  if (a.empty() || b.empty()) return std::nullopt;
  auto directed = [dim](std::span<const Point> from, std::span<const Point> to) {
    double worst = 0.0;
    for (const Point& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : to) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double t = p[d] - q[d];
          s += t * t;
        }
        best = std::min(best, s);
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

Hyperplane best_plane(std::span<const Point> points, const Point& x, int dim) {
  Hyperplane plane;
  plane.point = x;
  plane.support = static_cast<int>(points.size());
  if (static_cast<int>(points.size()) < dim) {
    plane.degenerate = true;
    return plane;
  }
  if (dim == 1) {
    plane.normal = Point{1.0, 0.0, 0.0};
    return plane;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (const Point& p : points) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        m(i, j) += (p[i] - x[i]) * (p[j] - x[j]);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto v = es.eigenvectors().col(0);  // smallest eigenvalue first
  Point nrm{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) nrm[d] = v(d);
  // deterministic orientation
  for (int d = 0; d < dim; ++d) {
    if (std::abs(nrm[d]) > 1e-14) {
      if (nrm[d] < 0.0) {
        for (int k = 0; k < dim; ++k) nrm[k] = -nrm[k];
      }
      break;
    }
  }
  const double len = norm(nrm, dim);
  for (int d = 0; d < dim; ++d) nrm[d] /= len;
  plane.normal = nrm;
  return plane;
}

namespace {

std::vector<Point> plane_cap_samples(const Hyperplane& plane, double r,
                                     double step, int dim) {
  std::vector<Point> out;
  if (dim == 1) {
    out.push_back(plane.point);
    return out;
  }
  if (dim == 2) {
    // open cap, matching the strict inequality used for the fb cap
    const Point t{-plane.normal[1], plane.normal[0], 0.0};
    const int kmax = static_cast<int>(std::ceil(r / step - 1e-9)) - 1;
    for (int k = -kmax; k <= kmax; ++k) {
      out.push_back(Point{plane.point[0] + k * step * t[0],
                          plane.point[1] + k * step * t[1], 0.0});
    }
    return out;
  }
  // dim == 3: orthonormal in-plane basis
  const Point& n = plane.normal;
  int least = 0;
  for (int d = 1; d < 3; ++d) {
    if (std::abs(n[d]) < std::abs(n[least])) least = d;
  }
  Point e{0.0, 0.0, 0.0};
  e[least] = 1.0;
  Point u{n[1] * e[2] - n[2] * e[1], n[2] * e[0] - n[0] * e[2],
          n[0] * e[1] - n[1] * e[0]};
  const double ul = norm(u, 3);
  for (int d = 0; d < 3; ++d) u[d] /= ul;
  const Point v{n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2],
                n[0] * u[1] - n[1] * u[0]};
  const int kmax = static_cast<int>(std::floor(r / step + 1e-9));
  const double r2 = r * r * (1.0 - 1e-12);  // open cap, as in 2D
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      const double t1 = k1 * step, t2 = k2 * step;
      if (t1 * t1 + t2 * t2 >= r2) continue;
      out.push_back(Point{plane.point[0] + t1 * u[0] + t2 * v[0],
                          plane.point[1] + t1 * u[1] + t2 * v[1],
                          plane.point[2] + t1 * u[2] + t2 * v[2]});
    }
  }
  return out;
}

}  // namespace

FlatnessReport flatness_modulus(const FreeBoundaryGeometry& geom,
                                const Point& x, std::vector<double> radii) {
  if (radii.empty()) {
    throw std::invalid_argument("flatness_modulus needs at least one radius");
  }
  std::sort(radii.begin(), radii.end(), std::greater<double>());
  const auto all_fb = geom.fb_points();
  const double h = geom.grid.spacing;

  FlatnessReport rep;
  rep.x = x;
  for (double r : radii) {
    FlatnessRow row;
    row.r = r;
    std::vector<Point> cap;
    for (const Point& p : all_fb) {
      if (distance(p, x, geom.grid.dim) < r) cap.push_back(p);
    }
    Hyperplane plane = best_plane(cap, x, geom.grid.dim);
    row.plane = plane;
    if (plane.degenerate) {
      row.skipped = true;
      rep.rows.push_back(row);
      continue;
    }
    const auto samples = plane_cap_samples(plane, r, h / 2.0, geom.grid.dim);
    const auto dist = hausdorff_distance(samples, cap, geom.grid.dim);
    if (!dist) {
      row.skipped = true;
      rep.rows.push_back(row);
      continue;
    }
    row.dist = *dist;
    row.ratio = *dist / r;
    rep.rows.push_back(row);
  }

  // theta(r) = sup over listed rho <= r; suffix max in descending order
  rep.theta.assign(rep.rows.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = rep.rows.size(); k-- > 0;) {
    if (!rep.rows[k].skipped) acc = std::max(acc, rep.rows[k].ratio);
    rep.theta[k] = acc;
  }
  // restore the forward convention: theta[k] corresponds to rows[k].r and must
  // include every finer listed radius
  for (std::size_t k = 0; k + 1 < rep.theta.size(); ++k) {
    rep.theta[k] = std::max(rep.theta[k], rep.theta[k + 1]);
  }
  return rep;
}

BlowupFit homogeneity_fit(const ScalarField& rescaled) {
  const Grid& g = rescaled.grid;
  const double radius = std::min(1.0, g.half_width);
  const auto ball = ball_nodes(g, Point{0.0, 0.0, 0.0}, radius,
                               BallClosure::closed);
  BlowupFit fit;
  double wmax = 0.0;
  for (std::size_t i : ball) {
    wmax = std::max(wmax, std::abs(rescaled.values[i]));
  }
  if (wmax == 0.0) return fit;  // nothing to fit

  std::vector<Point> coords;
  std::vector<double> vals;
  coords.reserve(ball.size());
  vals.reserve(ball.size());
  for (std::size_t i : ball) {
    coords.push_back(g.coords(i));
    vals.push_back(rescaled.values[i]);
  }

  auto eval_direction = [&](const Point& e, double* c_out) {
    double sgw = 0.0, sgg = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const double t = dot(e, coords[i], g.dim);
      if (t <= 0.0) continue;
      const double gv = t * t;
      sgw += gv * vals[i];
      sgg += gv * gv;
    }
    if (!(sgg > 0.0)) return std::numeric_limits<double>::infinity();
    const double c = sgw / sgg;
    if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const double t = dot(e, coords[i], g.dim);
      const double gv = t > 0.0 ? t * t : 0.0;
      worst = std::max(worst, std::abs(vals[i] - c * gv));
    }
    *c_out = c;
    return worst / wmax;
  };

  double best_res = std::numeric_limits<double>::infinity();
  double best_c = 0.0;
  Point best_e{1.0, 0.0, 0.0};

  if (g.dim == 1) {
    for (double s : {1.0, -1.0}) {
      const Point e{s, 0.0, 0.0};
      double c = 0.0;
      const double res = eval_direction(e, &c);
      if (res < best_res) {
        best_res = res;
        best_c = c;
        best_e = e;
      }
    }
  } else if (g.dim == 2) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto probe = [&](double theta) {
      const Point e{std::cos(theta), std::sin(theta), 0.0};
      double c = 0.0;
      const double res = eval_direction(e, &c);
      if (res < best_res) {
        best_res = res;
        best_c = c;
        best_e = e;
        return theta;
      }
      return std::numeric_limits<double>::quiet_NaN();
    };
    double best_theta = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double th = two_pi * k / 64.0;
      const double got = probe(th);
      if (!std::isnan(got)) best_theta = got;
    }
    double step = two_pi / 64.0;
    for (int level = 0; level < 2; ++level) {
      const double center = best_theta;
      step /= 4.0;
      for (int j = -4; j <= 4; ++j) {
        if (j == 0) continue;
        const double got = probe(center + j * step);
        if (!std::isnan(got)) best_theta = got;
      }
    }
  } else {
    // Fibonacci sphere then two local refinements on the tangent plane
    constexpr int kSamples = 512;
    constexpr double golden = std::numbers::pi * (3.0 - 2.2360679774997896);
    for (int k = 0; k < kSamples; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / kSamples;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      const Point e{rho * std::cos(phi), rho * std::sin(phi), z};
      double c = 0.0;
      const double res = eval_direction(e, &c);
      if (res < best_res) {
        best_res = res;
        best_c = c;
        best_e = e;
      }
    }
    double step = 2.0 / std::sqrt(static_cast<double>(kSamples));
    for (int level = 0; level < 2; ++level) {
      const Point base = best_e;
      // tangent frame at base
      int least = 0;
      for (int d = 1; d < 3; ++d) {
        if (std::abs(base[d]) < std::abs(base[least])) least = d;
      }
      Point ea{0.0, 0.0, 0.0};
      ea[least] = 1.0;
      Point u{base[1] * ea[2] - base[2] * ea[1],
              base[2] * ea[0] - base[0] * ea[2],
              base[0] * ea[1] - base[1] * ea[0]};
      const double ul = norm(u, 3);
      for (int d = 0; d < 3; ++d) u[d] /= ul;
      const Point v{base[1] * u[2] - base[2] * u[1],
                    base[2] * u[0] - base[0] * u[2],
                    base[0] * u[1] - base[1] * u[0]};
      step /= 4.0;
      for (int a = -3; a <= 3; ++a) {
        for (int b = -3; b <= 3; ++b) {
          if (a == 0 && b == 0) continue;
          Point e{base[0] + step * (a * u[0] + b * v[0]),
                  base[1] + step * (a * u[1] + b * v[1]),
                  base[2] + step * (a * u[2] + b * v[2])};
          const double el = norm(e, 3);
          for (int d = 0; d < 3; ++d) e[d] /= el;
          double c = 0.0;
          const double res = eval_direction(e, &c);
          if (res < best_res) {
            best_res = res;
            best_c = c;
            best_e = e;
          }
        }
      }
    }
  }

  if (!std::isfinite(best_res)) return fit;
  fit.ok = true;
  fit.direction = best_e;
  fit.c = best_c;
  fit.residual = best_res;
  return fit;
}

}  // namespace oblab
