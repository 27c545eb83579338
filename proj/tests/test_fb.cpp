#include <doctest.h>

#include <cmath>

#include "oblab/fb.hpp"
#include "oracles.hpp"

using namespace oblab;

namespace {

// w = c max(x_last, 0)^2: positivity half-space, planar free boundary
ScalarField half_space_field(const Grid& g, double c = 0.5) {
  return sample_field(g, [&](const Point& p) {
    const double xp = std::max(p[g.dim - 1], 0.0);
    return c * xp * xp;
  });
}

// w = x1^2: contact set is the measure-zero hyperplane {x1 = 0}
ScalarField line_contact_field(const Grid& g) {
  return sample_field(g, [](const Point& p) { return p[0] * p[0]; });
}

}  // namespace

TEST_CASE("geometry splits interior nodes into the three layers") {
  const Grid g = build_grid(2, 1.0, 33);
  const auto geom = extract_geometry(half_space_field(g));
  CHECK(geom.tau_pos == doctest::Approx(g.spacing * g.spacing / 100.0));
  const std::size_t interior = (33 - 2) * (33 - 2);
  CHECK(geom.positive_nodes.size() + geom.contact_nodes.size() == interior);
  // free boundary is exactly the x2 = 0 row of interior nodes
  CHECK(geom.fb_nodes.size() == 31);
  for (std::size_t i : geom.fb_nodes) {
    CHECK(g.coords(i)[1] == 0.0);
    CHECK(geom.contact[i]);
  }
}

TEST_CASE("half-space contact density is exactly one half") {
  const Grid g = build_grid(2, 1.0, 65);
  const auto geom = extract_geometry(half_space_field(g));
  const double h = g.spacing;
  for (double r : {8 * h, 12 * h, 16 * h}) {
    CHECK(contact_density(geom, {0.0, 0.0, 0.0}, r) == 0.5);
  }
}

TEST_CASE("contact density rejects inadmissible radii") {
  const Grid g = build_grid(2, 1.0, 33);
  const auto geom = extract_geometry(half_space_field(g));
  CHECK_THROWS_AS(contact_density(geom, {0.0, 0.0, 0.0}, 2.0 * g.spacing),
                  std::invalid_argument);
  CHECK_THROWS_AS(contact_density(geom, {0.9, 0.0, 0.0}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("classification separates the three fixture types") {
  const Grid g = build_grid(2, 1.0, 129);
  const double h = g.spacing;
  const std::vector<double> radii{32 * h, 16 * h, 8 * h};

  const auto plane = extract_geometry(half_space_field(g));
  const auto plane_cls = classify_point(plane, {0.0, 0.0, 0.0}, radii);
  CHECK(plane_cls.cls == PointClass::regular);
  for (double d : plane_cls.densities) CHECK(d == 0.5);

  const auto line = extract_geometry(line_contact_field(g));
  const auto line_cls = classify_point(line, {0.0, 0.0, 0.0}, radii);
  CHECK(line_cls.cls == PointClass::singular);
  CHECK(line_cls.densities.back() <= 0.1);

  // positive only on the open first quadrant: three quadrants stay in
  // contact, so the density near the corner sits around 3/4
  const ScalarField quadrant = sample_field(g, [](const Point& p) {
    const double m = std::min(std::max(p[0], 0.0), std::max(p[1], 0.0));
    return 0.5 * m * m;
  });
  const auto quad = extract_geometry(quadrant);
  const auto quad_cls = classify_point(quad, {0.0, h, 0.0}, radii);
  CHECK(quad_cls.cls == PointClass::undetermined);
  CHECK(quad_cls.densities.back() > 0.6);
}

TEST_CASE("classification requires a free-boundary base point") {
  const Grid g = build_grid(2, 1.0, 33);
  const auto geom = extract_geometry(half_space_field(g));
  CHECK_THROWS_AS(classify_point(geom, {0.0, 0.25, 0.0}, {8.0 * g.spacing}),
                  std::invalid_argument);
}

TEST_CASE("rescaling a quadratic field on aligned nodes is exact") {
  const Grid g = build_grid(2, 1.0, 257);  // h = 1/128
  const ScalarField w = half_space_field(g);
  const Grid target = build_grid(2, 1.0, 33);
  const double eps = 16.0 * g.spacing;  // samples land on source nodes
  const ScalarField resc = rescale(w, {0.0, 0.0, 0.0}, eps, target);
  for (std::size_t i = 0; i < resc.values.size(); ++i) {
    const double yp = std::max(target.coords(i)[1], 0.0);
    CHECK(resc.values[i] == doctest::Approx(0.5 * yp * yp).epsilon(1e-13));
  }
}

TEST_CASE("rescaling validates the window and the scale floor") {
  const Grid g = build_grid(2, 1.0, 65);
  const ScalarField w = half_space_field(g);
  const Grid target = build_grid(2, 1.0, 33);
  CHECK_THROWS_AS(rescale(w, {0.0, 0.0, 0.0}, 8.0 * g.spacing, target),
                  std::invalid_argument);
  CHECK_THROWS_AS(rescale(w, {0.9, 0.0, 0.0}, 0.5, target),
                  std::invalid_argument);
}

TEST_CASE("hausdorff distance matches the brute-force double loop") {
  const std::vector<Point> a{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.3, 0.7, 0.0}};
  const std::vector<Point> b{{0.1, 0.0, 0.0}, {0.9, 0.4, 0.0}};
  const auto d = hausdorff_distance(a, b, 2);
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(oracles::naive_hausdorff(a, b, 2)).epsilon(1e-14));
  CHECK_FALSE(hausdorff_distance({}, b, 2).has_value());
  CHECK(*hausdorff_distance(a, a, 2) == 0.0);
}

TEST_CASE("plane fitting recovers an axis plane from its nodes") {
  const Grid g = build_grid(2, 1.0, 65);
  const auto geom = extract_geometry(half_space_field(g));
  const auto pts = geom.fb_points();
  const Hyperplane pl = best_plane(pts, {0.0, 0.0, 0.0}, 2);
  CHECK_FALSE(pl.degenerate);
  CHECK(std::abs(pl.normal[0]) <= 1e-12);
  CHECK(std::abs(std::abs(pl.normal[1]) - 1.0) <= 1e-12);
}

TEST_CASE("plane fitting degenerates below dim points") {
  const std::vector<Point> single{{0.0, 0.0, 0.0}};
  const Hyperplane pl = best_plane(single, {0.0, 0.0, 0.0}, 2);
  CHECK(pl.degenerate);
}

TEST_CASE("flatness of a planar free boundary is bounded by the lattice") {
  const Grid g = build_grid(2, 1.0, 129);
  const auto geom = extract_geometry(half_space_field(g));
  const double h = g.spacing;
  const auto rep = flatness_modulus(geom, {0.0, 0.0, 0.0},
                                    {32 * h, 16 * h, 8 * h});
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    CHECK_FALSE(row.skipped);
    CHECK(row.dist <= 2.0 * h);
  }
  // theta is a running sup over finer radii
  for (std::size_t k = 1; k < rep.theta.size(); ++k) {
    CHECK(rep.theta[k] >= rep.rows[k].ratio);
  }
}

TEST_CASE("homogeneity fit identifies a quadratic half-space profile") {
  const Grid target = build_grid(2, 1.0, 33);
  const ScalarField exact = sample_field(target, [](const Point& p) {
    const double yp = std::max(0.6 * p[0] + 0.8 * p[1], 0.0);
    return 0.7 * yp * yp;
  });
  const BlowupFit fit = homogeneity_fit(exact);
  REQUIRE(fit.ok);
  CHECK(fit.residual <= 0.02);
  CHECK(std::abs(fit.direction[0] - 0.6) <= 0.02);
  CHECK(std::abs(fit.direction[1] - 0.8) <= 0.02);
  CHECK(fit.c == doctest::Approx(0.7).epsilon(0.05));
}

TEST_CASE("homogeneity fit rejects a quartic profile") {
  const Grid target = build_grid(2, 1.0, 33);
  const ScalarField quartic = sample_field(target, [](const Point& p) {
    const double yp = std::max(p[1], 0.0);
    return yp * yp * yp * yp;
  });
  const BlowupFit fit = homogeneity_fit(quartic);
  CHECK(fit.residual > 0.05);
}

TEST_CASE("axis-aligned quadratic profiles are fitted to machine precision") {
  const Grid target = build_grid(2, 1.0, 33);
  const ScalarField exact = sample_field(target, [](const Point& p) {
    const double yp = std::max(p[1], 0.0);
    return 0.5 * yp * yp;
  });
  const BlowupFit fit = homogeneity_fit(exact);
  REQUIRE(fit.ok);
  CHECK(fit.residual <= 1e-12);
  CHECK(std::abs(fit.direction[0]) <= 1e-10);
  CHECK(std::abs(fit.direction[1] - 1.0) <= 1e-10);
  CHECK(fit.c == doctest::Approx(0.5).epsilon(1e-10));
}
