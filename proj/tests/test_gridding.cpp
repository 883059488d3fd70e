#include "support.hpp"

#include "slrecon/gridding.hpp"

#include <doctest.h>

#include <cmath>

using namespace slrecon;

TEST_CASE("full grid covers the lattice")
{
    const auto nodes = build_full_grid(Box::cube(2, -2, 2), 30);
    CHECK(nodes.interior_size() == 900);
    CHECK(nodes.lattice_size == 900);
    CHECK(nodes.dx == doctest::Approx(4.0 / 29));
    CHECK(nodes.grid_count() == 900);
    CHECK(nodes.interior.front() == make_vec(-2, -2));
    const auto n3 = build_full_grid(Box::cube(3, -1, 1), 5);
    CHECK(n3.interior_size() == 125);
}

TEST_CASE("data nodes are added once, merging with coincident lattice nodes")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 5); // spacing 1
    const PointSet data(2, {make_vec(0, 0), make_vec(0.5, 0.25), make_vec(1, 1)});
    add_data_nodes(nodes, data);
    CHECK(nodes.interior_size() == 26);
    CHECK(nodes.data_count() == 3);
    CHECK(nodes.grid_count() == 23);
    const PointSet outside(2, {make_vec(3, 0)});
    CHECK_THROWS_AS(add_data_nodes(nodes, outside), Error);
}

TEST_CASE("reduced grid keeps exactly the lattice nodes inside the band")
{
    const auto data = generate_shape({Shape::Heart2D, 24, 1});
    const Box dom = Box::cube(2, -2, 2);
    const DistanceIndex index(data, 4.0 / 29);
    const auto nodes = build_reduced_grid(dom, 30, index, 0.2);
    const auto full = build_full_grid(dom, 30);

    std::size_t expect = 0;
    for (const auto& x : full.interior) expect += testing::brute_distance(data.points(), x) < 0.2;
    CHECK(nodes.grid_count() == expect);
    for (std::size_t i = 0; i < nodes.interior_size(); ++i)
        if (nodes.kinds[i] == NodeKind::Grid) CHECK(testing::brute_distance(data.points(), nodes.interior[i]) < 0.2);
    CHECK(nodes.data_count() == 24);

    const double ratio = static_cast<double>(nodes.grid_count()) / 900.0;
    CHECK(ratio >= 0.08);
    CHECK(ratio <= 0.20);
    CHECK(nodes.interior_size() < full.interior_size());

    const auto all = build_reduced_grid(dom, 30, index, 100.0);
    CHECK(all.grid_count() == 900);
    CHECK_THROWS_AS(build_reduced_grid(dom, 30, index, 0.0), Error);
}

TEST_CASE("every data point is a node exactly once")
{
    const auto data = generate_shape({Shape::Heart3D, 300, 1});
    const DistanceIndex index(data, 0.1);
    const auto nodes = build_reduced_grid(Box::cube(3, -2, 2), 20, index, 0.3);
    for (const auto& p : data) {
        int hits = 0;
        for (std::size_t i = 0; i < nodes.interior_size(); ++i)
            hits += nodes.kinds[i] == NodeKind::Data && (nodes.interior[i] - p).norm() < 1e-12;
        CHECK(hits == 1);
    }
}

TEST_CASE("perimeter anchors: 32 at spacing 0.5 on [-2,2]^2")
{
    const PointSet data(2, {make_vec(0, 0), make_vec(0.1, 0.2)});
    const DistanceIndex index(data, 0.1);
    const auto frame = place_anchors(Box::cube(2, -2, 2), index, 0.4, 0.5, 7.0);
    CHECK(frame.positions.size() == 32);
    CHECK(frame.dropped == 0);
    CHECK(frame.value == 7.0);
    for (const auto& a : frame.positions) CHECK(std::abs(a.lpNorm<Eigen::Infinity>() - 2.0) < 1e-12);
}

TEST_CASE("anchors keep their distance from the data and cover the 3D faces")
{
    const auto data = generate_shape({Shape::Heart3D, 200, 1});
    const DistanceIndex index(data, 0.1);
    const auto frame = place_anchors(Box::cube(3, -2, 2), index, 0.2, 0.5, 1.0);
    CHECK(frame.positions.size() == 6 * 7 * 7 + 12 * 7 + 8);
    for (const auto& a : frame.positions) CHECK(index.distance(a) >= 0.2);

    // A margin reaching the boundary drops anchors and warns.
    const auto tight = place_anchors(Box::cube(3, -1.6, 1.6), index, 0.3, 0.4, 1.0);
    CHECK(tight.dropped > 0);
    CHECK_FALSE(tight.warnings.empty());
}

TEST_CASE("attaching anchors promotes coincident lattice nodes")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 5);
    const PointSet data(2, {make_vec(0.5, 0.5)});
    add_data_nodes(nodes, data);
    const DistanceIndex index(data, 1.0);
    const auto frame = place_anchors(Box::cube(2, -2, 2), index, 0.5, 1.0, 3.0);
    attach_anchors(nodes, frame);
    CHECK(nodes.anchors.size() == 16);
    CHECK(nodes.interior_size() == 9 + 1);
    CHECK(nodes.anchor_value == 3.0);
    for (const auto& x : nodes.interior) CHECK(x.lpNorm<Eigen::Infinity>() < 2.0);
    const auto centers = nodes.centers();
    CHECK(centers.size() == nodes.size());
    CHECK(centers.back() == nodes.anchors.back());
}

TEST_CASE("initial condition")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 5);
    const auto ic = initial_condition(nodes, 1.0, make_vec(0, 0));
    for (std::size_t i = 0; i < nodes.interior_size(); ++i) {
        const Vec& x = nodes.interior[i];
        CHECK(ic.state.values[i] == doctest::Approx(x.squaredNorm() - 1.0));
        if (x.norm() == 0.0) CHECK(ic.state.values[i] == -1.0);
    }
    CHECK(ic.state.iteration == 0);
    CHECK(ic.state.history.empty());

    // Radial monotonicity.
    std::mt19937_64 rng(31);
    NodeSet cloud = nodes;
    cloud.interior = testing::random_points(rng, 2, 200, -2, 2);
    cloud.kinds.assign(200, NodeKind::Grid);
    const auto u = initial_condition(cloud, 1.2, make_vec(0, 0)).state.values;
    for (std::size_t i = 0; i < 200; ++i)
        for (std::size_t j = 0; j < 200; ++j)
            if (cloud.interior[i].norm() < cloud.interior[j].norm()) CHECK(u[i] < u[j]);

    add_data_nodes(nodes, PointSet(2, {make_vec(1.5, 0)}));
    CHECK_FALSE(initial_condition(nodes, 1.0, make_vec(0, 0)).encloses_data);
    CHECK(initial_condition(nodes, 1.6, make_vec(0, 0)).encloses_data);
    CHECK_THROWS_AS(initial_condition(nodes, 0.0, make_vec(0, 0)), Error);
}

TEST_CASE("radius rules")
{
    CHECK(default_initial_radius(Box::cube(2, -2, 2), make_vec(0, 0)) == doctest::Approx(0.9 * std::sqrt(8.0)));
    const PointSet data(2, {make_vec(1, 0), make_vec(0, 2)});
    CHECK(data_initial_radius(data, make_vec(0, 0), 1.1) == doctest::Approx(2.2));
}

TEST_CASE("near-data lattice nodes can be dropped")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 5);
    const PointSet data(2, {make_vec(0.1, 0)});
    add_data_nodes(nodes, data);
    const DistanceIndex index(data, 1.0);
    CHECK(drop_near_data(nodes, index, 0.5) == 1);
    CHECK(nodes.interior_size() == 25);
    CHECK(nodes.data_count() == 1);
}
