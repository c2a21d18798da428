#pragma once

#include <array>
#include <string>
#include <vector>

#include "surfdist/surface.hpp"

namespace surfdist {

/// Triangle-mesh surface approximated by shortest paths in an edge graph with
/// uniform Steiner subdivision. Points are graph nodes; chart coordinates are
/// (node index, 0). Accuracy against the exact polyhedral metric is the
/// measured factor (1 + eps_geo) on the calibration meshes; exp_map walks the
/// straightest path by triangle unfolding and snaps to the nearest node.
class MeshSurface final : public Surface {
public:
    struct Stats {
        std::size_t vertex_count = 0;
        std::size_t triangle_count = 0;
        std::size_t node_count = 0;
        std::size_t boundary_edge_count = 0;
    };

    MeshSurface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                int steiner_per_edge = 4, double eps_geo = 0.05);

    std::string name() const override { return "mesh"; }
    bool contains(Vec2 coords) const override;

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override;
    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double tol = 1e-9,
                           int max_representatives = 16) const override;
    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override;
    double metric_dot(const SurfacePoint& at, Vec2 a, Vec2 b) const override;
    OrthoFrame orthoframe(const SurfacePoint& at) const override;
    double curvature_lower_bound() const override { return 0.0; }
    double injectivity_scale(const SurfacePoint& x) const override;

    const Stats& stats() const { return stats_; }
    double eps_geo() const { return eps_geo_; }
    double mean_edge_length() const { return mean_edge_; }

    SurfacePoint node_point(std::size_t node) const;
    std::size_t node_count() const { return node_pos_.size(); }
    Vec3 node_position(std::size_t node) const { return node_pos_.at(node); }
    SurfacePoint nearest_node(Vec3 p) const;

private:
    struct Neighbor {
        int node;
        double w;
    };

    std::size_t node_of(const SurfacePoint& p) const;
    void build_graph(int steiner_per_edge);
    std::vector<double> dijkstra(std::size_t source, std::size_t target,
                                 std::vector<int>* pred) const;
    Vec3 node_normal(std::size_t node) const;
    void node_frame(std::size_t node, Vec3& f1, Vec3& f2) const;

    std::vector<Vec3> verts_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<Vec3> node_pos_;
    std::vector<std::vector<Neighbor>> adj_;
    // For the straight walk: triangles adjacent to each node, the boundary
    // nodes of each triangle, and triangle adjacency across shared edges.
    std::vector<std::vector<int>> node_tris_;
    std::vector<std::vector<int>> tri_nodes_;
    std::vector<std::array<int, 3>> tri_neighbors_;
    double eps_geo_;
    double mean_edge_ = 0;
    Stats stats_;
};

std::shared_ptr<const MeshSurface> load_mesh_file(const std::string& path,
                                                  int steiner_per_edge = 4,
                                                  double eps_geo = 0.05);

// Calibration meshes.
std::shared_ptr<const MeshSurface> make_grid_mesh(int nx, int ny, double spacing,
                                                  int steiner_per_edge = 4);
std::shared_ptr<const MeshSurface> make_icosphere_mesh(int subdivisions, double radius,
                                                       int steiner_per_edge = 4);

}  // namespace surfdist
