#pragma once

#include "slrecon/distance_field.hpp"
#include "slrecon/pointcloud.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace slrecon {

enum class NodeKind { Grid, Data };

// Computational nodes: interior nodes updated by the scheme (lattice nodes in
// lexicographic order, then data nodes) followed by anchor nodes that hold a
// single fixed value.
struct NodeSet {
    int dim = 0;
    Box domain;
    double dx = 0.0;
    // Node count of the lattice the interior nodes were taken from.
    std::size_t lattice_size = 0;

    std::vector<Vec> interior;
    std::vector<NodeKind> kinds;

    std::vector<Vec> anchors;
    double anchor_value = 0.0;

    std::size_t interior_size() const { return interior.size(); }
    std::size_t size() const { return interior.size() + anchors.size(); }
    std::size_t grid_count() const;
    std::size_t data_count() const;

    // Interior nodes followed by anchors: the RBF center ordering.
    std::vector<Vec> centers() const;
};

// Nodal values u^n_j on the interior nodes, plus the iteration counter and the
// convergence history E^k_1 accumulated so far.
struct LevelSetState {
    std::vector<double> values;
    int iteration = 0;
    std::vector<double> history;
};

// Right-hand side for the RBF fit: interior values then the anchor value.
std::vector<double> center_values(const NodeSet& nodes, const LevelSetState& state);

NodeSet build_full_grid(const Box& domain, int per_axis_count);

// Adds every point of S as a data node. A point within 1e-9 dx of an existing
// node is merged into it (the node is relabelled as a data node).
void add_data_nodes(NodeSet& nodes, const PointSet& data);

// Removes lattice nodes closer than `radius` to S (data nodes are kept).
// Returns the number removed.
std::size_t drop_near_data(NodeSet& nodes, const DistanceIndex& index, double radius);

// Lattice nodes with d(x, S) < delta_s, plus all points of S as data nodes.
NodeSet build_reduced_grid(const Box& domain, int per_axis_count, const DistanceIndex& index, double delta_s);

struct AnchorFrame {
    std::vector<Vec> positions;
    double value = 0.0;
    std::size_t dropped = 0;
    std::vector<std::string> warnings;
};

// Anchors on the boundary of `domain`: the perimeter rectangle in 2D, the six
// faces in 3D, at (approximately) the requested spacing. Anchors closer than
// `margin` to the data set are dropped with a warning.
AnchorFrame place_anchors(const Box& domain, const DistanceIndex& index, double margin, double spacing, double value);

// Attaches anchors to a node set. A lattice node at an anchor position becomes
// that anchor; anchors on data nodes are skipped.
void attach_anchors(NodeSet& nodes, const AnchorFrame& frame);

struct InitialCondition {
    LevelSetState state;
    bool encloses_data = true;
};

// u^0_j = |x_j - center|^2 - R^2 on interior nodes.
InitialCondition initial_condition(const NodeSet& nodes, double radius, const Vec& center);

// factor times the largest distance from `center` to a point of S.
double data_initial_radius(const PointSet& data, const Vec& center, double factor);

// 0.9 times the distance from `center` to the nearest corner of the domain.
double default_initial_radius(const Box& domain, const Vec& center);

// One line per node: "grid|data|anchor x y [z]".
void write_node_dump(const NodeSet& nodes, const std::filesystem::path& path);

} // namespace slrecon
