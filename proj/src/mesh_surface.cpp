#include "surfdist/mesh_surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace surfdist {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
}  // namespace

MeshSurface::MeshSurface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                         int steiner_per_edge, double eps_geo)
    : Surface(Kind::Mesh, true),
      verts_(std::move(vertices)),
      tris_(std::move(triangles)),
      eps_geo_(eps_geo) {
    if (verts_.size() < 3 || tris_.empty()) throw UsageError("mesh needs vertices and triangles");
    for (const auto& t : tris_)
        for (int v : t)
            if (v < 0 || v >= static_cast<int>(verts_.size()))
                throw UsageError("mesh triangle references a missing vertex");
    build_graph(std::max(0, steiner_per_edge));
}

void MeshSurface::build_graph(int k) {
    // Enumerate vertex-pair edges, count incidences, place Steiner nodes.
    std::map<std::pair<int, int>, int> edge_id;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> edge_tris;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            auto key = ordered(tris_[t][i], tris_[t][(i + 1) % 3]);
            auto [it, inserted] = edge_id.try_emplace(key, static_cast<int>(edges.size()));
            if (inserted) {
                edges.push_back(key);
                edge_tris.push_back(0);
            }
            edge_tris[it->second] += 1;
        }
    }
    std::size_t boundary = 0;
    double edge_len_sum = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edge_tris[e] > 2)
            throw UsageError("non-manifold mesh: an edge has more than two triangles");
        if (edge_tris[e] == 1) ++boundary;
        edge_len_sum += norm(verts_[edges[e].second] - verts_[edges[e].first]);
    }
    mean_edge_ = edge_len_sum / edges.size();

    node_pos_ = verts_;
    auto steiner_node = [&](int e, int j) {
        return static_cast<int>(verts_.size()) + e * k + j;
    };
    for (std::size_t e = 0; e < edges.size(); ++e) {
        Vec3 a = verts_[edges[e].first], b = verts_[edges[e].second];
        for (int j = 0; j < k; ++j) {
            double f = static_cast<double>(j + 1) / (k + 1);
            node_pos_.push_back(a + f * (b - a));
        }
    }

    // Triangle adjacency across shared edges.
    std::map<std::pair<int, int>, std::array<int, 2>> edge_faces;
    for (std::size_t t = 0; t < tris_.size(); ++t)
        for (int i = 0; i < 3; ++i) {
            auto key = ordered(tris_[t][i], tris_[t][(i + 1) % 3]);
            auto& f = edge_faces.try_emplace(key, std::array<int, 2>{-1, -1}).first->second;
            (f[0] < 0 ? f[0] : f[1]) = static_cast<int>(t);
        }
    tri_neighbors_.assign(tris_.size(), {-1, -1, -1});
    for (std::size_t t = 0; t < tris_.size(); ++t)
        for (int i = 0; i < 3; ++i) {
            auto f = edge_faces[ordered(tris_[t][i], tris_[t][(i + 1) % 3])];
            tri_neighbors_[t][i] = (f[0] == static_cast<int>(t)) ? f[1] : f[0];
        }

    // Complete graph on the boundary nodes of each triangle (the triangle is
    // flat, so chords between its boundary nodes lie on the surface).
    tri_nodes_.assign(tris_.size(), {});
    std::vector<std::tuple<int, int, double>> raw_edges;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        std::vector<int>& nodes = tri_nodes_[t];
        for (int i = 0; i < 3; ++i) nodes.push_back(tris_[t][i]);
        for (int i = 0; i < 3; ++i) {
            int e = edge_id[ordered(tris_[t][i], tris_[t][(i + 1) % 3])];
            for (int j = 0; j < k; ++j) nodes.push_back(steiner_node(e, j));
        }
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = a + 1; b < nodes.size(); ++b) {
                double w = norm(node_pos_[nodes[a]] - node_pos_[nodes[b]]);
                if (w > 0) raw_edges.emplace_back(nodes[a], nodes[b], w);
            }
    }
    std::sort(raw_edges.begin(), raw_edges.end());
    raw_edges.erase(std::unique(raw_edges.begin(), raw_edges.end()), raw_edges.end());
    adj_.assign(node_pos_.size(), {});
    for (auto& [a, b, w] : raw_edges) {
        adj_[a].push_back({b, w});
        adj_[b].push_back({a, w});
    }

    node_tris_.assign(node_pos_.size(), {});
    for (std::size_t t = 0; t < tris_.size(); ++t)
        for (int n : tri_nodes_[t]) node_tris_[n].push_back(static_cast<int>(t));

    stats_ = Stats{verts_.size(), tris_.size(), node_pos_.size(), boundary};
}

bool MeshSurface::contains(Vec2 coords) const {
    double idx = coords.x;
    return coords.y == 0.0 && idx >= 0 && idx < static_cast<double>(node_pos_.size()) &&
           idx == std::floor(idx);
}

std::size_t MeshSurface::node_of(const SurfacePoint& p) const {
    check_point(p);
    if (!contains(p.coords)) throw UsageError("mesh point is not a graph node");
    return static_cast<std::size_t>(p.coords.x);
}

SurfacePoint MeshSurface::node_point(std::size_t node) const {
    if (node >= node_pos_.size()) throw UsageError("mesh node index out of range");
    return SurfacePoint{id_, {static_cast<double>(node), 0.0}};
}

SurfacePoint MeshSurface::nearest_node(Vec3 p) const {
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t i = 0; i < node_pos_.size(); ++i) {
        double d = norm(node_pos_[i] - p);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return node_point(best);
}

std::vector<double> MeshSurface::dijkstra(std::size_t source, std::size_t target,
                                          std::vector<int>* pred) const {
    std::vector<double> dist(node_pos_.size(), kInf);
    if (pred) pred->assign(node_pos_.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0;
    pq.push({0, static_cast<int>(source)});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (target != std::numeric_limits<std::size_t>::max() &&
            static_cast<std::size_t>(u) == target)
            break;
        for (const auto& nb : adj_[u]) {
            double nd = d + nb.w;
            if (nd < dist[nb.node]) {
                dist[nb.node] = nd;
                if (pred) (*pred)[nb.node] = u;
                pq.push({nd, nb.node});
            }
        }
    }
    return dist;
}

double MeshSurface::distance(const SurfacePoint& x, const SurfacePoint& y) const {
    check_same_surface(x, y);
    std::size_t a = node_of(x), b = node_of(y);
    if (a == b) return 0.0;
    auto dist = dijkstra(a, b, nullptr);
    return dist[b];
}

GeodesicList MeshSurface::geodesics(const SurfacePoint& x, const SurfacePoint& y, double,
                                    int) const {
    check_same_surface(x, y);
    std::size_t a = node_of(x), b = node_of(y);
    if (a == b) throw UsageError("geodesics requires x != y");
    std::vector<int> pred;
    auto dist = dijkstra(a, b, &pred);
    if (!std::isfinite(dist[b])) throw Error("mesh is disconnected between the points");

    std::vector<int> chain;
    for (int v = static_cast<int>(b); v != -1; v = pred[v]) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());

    std::vector<double> cum(chain.size(), 0.0);
    for (std::size_t i = 1; i < chain.size(); ++i)
        cum[i] = cum[i - 1] + norm(node_pos_[chain[i]] - node_pos_[chain[i - 1]]);

    Vec3 f1, f2;
    node_frame(a, f1, f2);
    Vec3 step = normalized(node_pos_[chain[1]] - node_pos_[chain[0]]);
    Vec2 comp{dot(step, f1), dot(step, f2)};
    TangentVector dir = unit_tangent(x, comp);

    GeodesicPath path;
    path.start = x;
    path.initial_dir = dir;
    path.length = dist[b];
    int sid = id_;
    path.eval = [chain, cum, sid](double s) {
        auto it = std::upper_bound(cum.begin(), cum.end(), s);
        std::size_t seg = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
        if (seg == 0) return SurfacePoint{sid, {static_cast<double>(chain[0]), 0.0}};
        // Snap to the nearer chain node of the containing segment.
        std::size_t pick = (s - cum[seg - 1] <= cum[seg] - s) ? seg - 1 : seg;
        return SurfacePoint{sid, {static_cast<double>(chain[pick]), 0.0}};
    };
    GeodesicList gl;
    gl.paths.push_back(std::move(path));
    return gl;
}

Vec3 MeshSurface::node_normal(std::size_t node) const {
    Vec3 acc{0, 0, 0};
    Vec3 ref{0, 0, 0};
    for (int t : node_tris_[node]) {
        Vec3 n = cross(verts_[tris_[t][1]] - verts_[tris_[t][0]],
                       verts_[tris_[t][2]] - verts_[tris_[t][0]]);
        n = normalized(n);
        if (norm(ref) == 0) ref = n;
        if (dot(n, ref) < 0) n = -n;  // tolerate inconsistent winding
        acc = acc + n;
    }
    return normalized(acc);
}

void MeshSurface::node_frame(std::size_t node, Vec3& f1, Vec3& f2) const {
    Vec3 n = node_normal(node);
    Vec3 a = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    f1 = normalized(cross(a, n));
    f2 = cross(n, f1);
}

double MeshSurface::metric_dot(const SurfacePoint&, Vec2 a, Vec2 b) const {
    return dot(a, b);
}

OrthoFrame MeshSurface::orthoframe(const SurfacePoint&) const {
    return {{1, 0}, {0, 1}};
}

double MeshSurface::injectivity_scale(const SurfacePoint&) const { return mean_edge_; }

SurfacePoint MeshSurface::exp_map(const SurfacePoint& x, const TangentVector& v,
                                  double t) const {
    std::size_t start = node_of(x);
    if (t < 0) throw UsageError("exp_map requires t >= 0");
    Vec3 f1, f2;
    node_frame(start, f1, f2);
    Vec3 dir3 = normalized(v.comp.x * f1 + v.comp.y * f2);

    // Pick the incident triangle whose plane best carries the direction.
    int tri = -1;
    double best = -kInf;
    Vec3 p = node_pos_[start];
    for (int cand : node_tris_[start]) {
        Vec3 n = normalized(cross(verts_[tris_[cand][1]] - verts_[tris_[cand][0]],
                                  verts_[tris_[cand][2]] - verts_[tris_[cand][0]]));
        Vec3 d = normalized(dir3 - dot(dir3, n) * n);
        if (norm(d) == 0) continue;
        // Score: does a small step stay inside the triangle?
        Vec3 q = p + (0.01 * mean_edge_) * d;
        const Vec3 &A = verts_[tris_[cand][0]], &B = verts_[tris_[cand][1]],
                   &C = verts_[tris_[cand][2]];
        Vec3 v0 = B - A, v1 = C - A, v2 = q - A;
        double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
        double d20 = dot(v2, v0), d21 = dot(v2, v1);
        double den = d00 * d11 - d01 * d01;
        if (den == 0) continue;
        double bb = (d11 * d20 - d01 * d21) / den;
        double cc = (d00 * d21 - d01 * d20) / den;
        double aa = 1 - bb - cc;
        double score = std::min({aa, bb, cc});
        if (score > best) {
            best = score;
            tri = cand;
        }
    }
    if (tri < 0) throw Error("mesh exp_map: no triangle carries the direction");

    double remaining = t;
    double traveled = 0;
    Vec3 pos = p;
    double perturb = 1e-7;
    int guard = static_cast<int>(20 * t / std::max(mean_edge_, 1e-12)) + 200;
    while (guard-- > 0) {
        const Vec3 &A = verts_[tris_[tri][0]], &B = verts_[tris_[tri][1]],
                   &C = verts_[tris_[tri][2]];
        Vec3 n = normalized(cross(B - A, C - A));
        Vec3 d = normalized(dir3 - dot(dir3, n) * n);
        if (norm(d) == 0) throw Error("mesh exp_map: degenerate direction");
        dir3 = d;

        auto inside = [&](Vec3 q) {
            Vec3 v0 = B - A, v1 = C - A, v2 = q - A;
            double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
            double d20 = dot(v2, v0), d21 = dot(v2, v1);
            double den = d00 * d11 - d01 * d01;
            if (den == 0) return false;
            double bb = (d11 * d20 - d01 * d21) / den;
            double cc = (d00 * d21 - d01 * d20) / den;
            return bb >= -1e-9 && cc >= -1e-9 && 1 - bb - cc >= -1e-9;
        };

        // Ray-edge intersections inside the triangle plane.
        int exit_edge = -1;
        double exit_s = kInf;
        const Vec3* corners[3] = {&A, &B, &C};
        for (int i = 0; i < 3; ++i) {
            Vec3 e0 = *corners[i];
            Vec3 e1 = *corners[(i + 1) % 3];
            Vec3 edge = e1 - e0;
            // Solve pos + s*d = e0 + u*edge in the plane.
            Vec3 w = e0 - pos;
            Vec3 n2 = cross(edge, n);  // in-plane normal of the edge line
            double denom = dot(d, n2);
            if (std::abs(denom) < 1e-15) continue;
            double s = dot(w, n2) / denom;
            if (s <= 1e-12) continue;
            Vec3 hit = pos + s * d;
            double u = dot(hit - e0, edge) / dot(edge, edge);
            if (u < -1e-9 || u > 1 + 1e-9) continue;
            if (s < exit_s) {
                exit_s = s;
                exit_edge = i;
            }
        }
        if (exit_edge < 0 || remaining <= exit_s) {
            Vec3 fin = pos + remaining * d;
            if (exit_edge < 0 && !inside(fin)) {
                // Degenerate exit through a vertex or along an edge. Re-seat
                // the walk on the 1-ring triangle that best carries the ray,
                // then fall back to a small tilt.
                int reseat = -1;
                double best_score = -kInf;
                std::vector<int> candidates;
                for (int c : tri_neighbors_[tri])
                    if (c >= 0) candidates.push_back(c);
                for (int corner = 0; corner < 3; ++corner)
                    for (int c : node_tris_[tris_[tri][corner]]) candidates.push_back(c);
                for (int c : candidates) {
                    if (c == tri) continue;
                    const Vec3 &A2 = verts_[tris_[c][0]], &B2 = verts_[tris_[c][1]],
                               &C2 = verts_[tris_[c][2]];
                    Vec3 n2 = normalized(cross(B2 - A2, C2 - A2));
                    Vec3 d2 = dir3 - dot(dir3, n2) * n2;
                    if (norm(d2) == 0) continue;
                    Vec3 q = pos + (0.01 * mean_edge_) * normalized(d2);
                    Vec3 v0 = B2 - A2, v1 = C2 - A2, v2 = q - A2;
                    double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
                    double d20 = dot(v2, v0), d21 = dot(v2, v1);
                    double den = d00 * d11 - d01 * d01;
                    if (den == 0) continue;
                    double bb = (d11 * d20 - d01 * d21) / den;
                    double cc = (d00 * d21 - d01 * d20) / den;
                    double score = std::min({1 - bb - cc, bb, cc});
                    if (score > best_score) {
                        best_score = score;
                        reseat = c;
                    }
                }
                if (reseat >= 0 && best_score > -1e-6) {
                    tri = reseat;
                    continue;
                }
                Vec3 side = cross(n, d);
                dir3 = normalized(d + std::abs(perturb) * side);
                perturb = -(perturb * 2);
                continue;
            }
            // Snap to the nearest boundary node of this triangle.
            int bestn = tri_nodes_[tri].front();
            double bd = kInf;
            for (int nidx : tri_nodes_[tri]) {
                double dd = norm(node_pos_[nidx] - fin);
                if (dd < bd) {
                    bd = dd;
                    bestn = nidx;
                }
            }
            return node_point(bestn);
        }
        pos = pos + exit_s * d;
        remaining -= exit_s;
        traveled += exit_s;
        int next = tri_neighbors_[tri][exit_edge];
        if (next < 0) throw DomainExit("mesh geodesic reached the boundary", traveled);
        // Transport the direction: keep the component along the shared edge,
        // map the perpendicular component to point into the next triangle.
        Vec3 e0 = *corners[exit_edge];
        Vec3 e1 = *corners[(exit_edge + 1) % 3];
        Vec3 e = normalized(e1 - e0);
        double along = dot(d, e);
        double perp = std::sqrt(std::max(0.0, 1 - along * along));
        // Inward perpendicular of the next triangle at this edge.
        int opp = -1;
        for (int i = 0; i < 3; ++i) {
            int vtx = tris_[next][i];
            if (vtx != tris_[tri][exit_edge] &&
                vtx != tris_[tri][(exit_edge + 1) % 3])
                opp = vtx;
        }
        if (opp < 0) throw Error("mesh exp_map: broken adjacency");
        Vec3 w = verts_[opp] - e0;
        Vec3 inward = normalized(w - dot(w, e) * e);
        dir3 = along * e + perp * inward;
        tri = next;
    }
    throw Error("mesh exp_map: step limit exceeded");
}

// ---------------------------------------------------------------------------

std::shared_ptr<const MeshSurface> load_mesh_file(const std::string& path,
                                                  int steiner_per_edge, double eps_geo) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file: " + path);
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> tris;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z))
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad vertex line");
            verts.push_back({x, y, z});
        } else if (tag == "f") {
            int i, j, k;
            if (!(ss >> i >> j >> k))
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad face line");
            tris.push_back({i - 1, j - 1, k - 1});
        } else {
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown record '" +
                             tag + "'");
        }
    }
    return std::make_shared<MeshSurface>(std::move(verts), std::move(tris), steiner_per_edge,
                                         eps_geo);
}

std::shared_ptr<const MeshSurface> make_grid_mesh(int nx, int ny, double spacing,
                                                  int steiner_per_edge) {
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) verts.push_back({i * spacing, j * spacing, 0});
    auto idx = [nx](int i, int j) { return j * nx + i; };
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            tris.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            tris.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    return std::make_shared<MeshSurface>(std::move(verts), std::move(tris), steiner_per_edge);
}

std::shared_ptr<const MeshSurface> make_icosphere_mesh(int subdivisions, double radius,
                                                       int steiner_per_edge) {
    const double phi = (1 + std::sqrt(5.0)) / 2;
    std::vector<Vec3> verts = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                               {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                               {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
    std::vector<std::array<int, 3>> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
        {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
        {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
        {8, 6, 7},  {9, 8, 1}};
    for (auto& v : verts) v = radius * normalized(v);
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = ordered(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = radius * normalized(0.5 * (verts[a] + verts[b]));
            verts.push_back(m);
            int id = static_cast<int>(verts.size()) - 1;
            midpoint[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        for (auto& t : tris) {
            int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    return std::make_shared<MeshSurface>(std::move(verts), std::move(tris), steiner_per_edge);
}

}  // namespace surfdist
