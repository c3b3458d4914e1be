#include "rigidflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace rigidflow {

namespace {

// ---------------------------------------------------------------------------
// Bowyer-Watson incremental Delaunay with an orientation walk for location.
// The triangulation always covers a convex super-triangle, so the walk
// terminates.
// ---------------------------------------------------------------------------

struct DelaunayTri {
    int v[3];
    int nb[3];  // neighbor across the edge opposite v[i]; -1 none
    bool alive = true;
};

struct Delaunay {
    std::vector<Vec2> pts;
    std::vector<DelaunayTri> tris;
    int last_alive = 0;

    static double orient(Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); }

    bool in_circumcircle(const DelaunayTri& t, Vec2 p) const {
        Vec2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
        double ax = a.x - p.x, ay = a.y - p.y;
        double bx = b.x - p.x, by = b.y - p.y;
        double cx = c.x - p.x, cy = c.y - p.y;
        double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                     (bx * bx + by * by) * (ax * cy - cx * ay) +
                     (cx * cx + cy * cy) * (ax * by - bx * ay);
        return det > 0.0;  // triangles are CCW
    }

    int locate(Vec2 p) const {
        int cur = last_alive;
        if (!tris[cur].alive) {
            for (std::size_t i = 0; i < tris.size(); ++i)
                if (tris[i].alive) {
                    cur = static_cast<int>(i);
                    break;
                }
        }
        for (int step = 0; step < static_cast<int>(tris.size()) + 8; ++step) {
            const DelaunayTri& t = tris[cur];
            int exit_edge = -1;
            for (int e = 0; e < 3; ++e) {
                Vec2 a = pts[t.v[(e + 1) % 3]], b = pts[t.v[(e + 2) % 3]];
                if (orient(a, b, p) < -1e-14) {
                    exit_edge = e;
                    break;
                }
            }
            if (exit_edge < 0) return cur;
            int next = t.nb[exit_edge];
            if (next < 0) return cur;  // on the hull; containing-ish
            cur = next;
        }
        // fallback: linear scan
        for (std::size_t i = 0; i < tris.size(); ++i) {
            if (!tris[i].alive) continue;
            const DelaunayTri& t = tris[i];
            bool inside = true;
            for (int e = 0; e < 3; ++e) {
                Vec2 a = pts[t.v[(e + 1) % 3]], b = pts[t.v[(e + 2) % 3]];
                if (orient(a, b, p) < -1e-12) inside = false;
            }
            if (inside) return static_cast<int>(i);
        }
        throw NumericError("delaunay: point location failed");
    }

    void insert(int pi) {
        Vec2 p = pts[pi];
        int seed = locate(p);
        // grow the cavity of circumcircle-violating triangles
        std::vector<int> cavity;
        std::vector<int> stack{seed};
        std::vector<char> visited(tris.size(), 0);
        visited[seed] = 1;
        while (!stack.empty()) {
            int ti = stack.back();
            stack.pop_back();
            if (!tris[ti].alive || !in_circumcircle(tris[ti], p)) continue;
            cavity.push_back(ti);
            for (int e = 0; e < 3; ++e) {
                int nb = tris[ti].nb[e];
                if (nb >= 0 && !visited[nb]) {
                    visited[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
        if (cavity.empty()) throw NumericError("delaunay: empty cavity (degenerate point set)");

        std::vector<char> in_cavity(tris.size(), 0);
        for (int ti : cavity) in_cavity[ti] = 1;

        // cavity boundary edges: (a, b) CCW with the outside neighbor
        struct Rim {
            int a, b, outside;
        };
        std::vector<Rim> rim;
        for (int ti : cavity) {
            const DelaunayTri& t = tris[ti];
            for (int e = 0; e < 3; ++e) {
                int nb = t.nb[e];
                if (nb < 0 || !in_cavity[nb]) rim.push_back({t.v[(e + 1) % 3], t.v[(e + 2) % 3], nb});
            }
        }
        for (int ti : cavity) tris[ti].alive = false;

        // fan of new triangles
        std::vector<int> fresh;
        fresh.reserve(rim.size());
        for (const Rim& r : rim) {
            DelaunayTri t;
            t.v[0] = pi;
            t.v[1] = r.a;
            t.v[2] = r.b;
            t.nb[0] = r.outside;  // across the rim edge
            t.nb[1] = -1;
            t.nb[2] = -1;
            tris.push_back(t);
            fresh.push_back(static_cast<int>(tris.size()) - 1);
            if (r.outside >= 0) {
                DelaunayTri& o = tris[r.outside];
                for (int e = 0; e < 3; ++e) {
                    if ((o.v[(e + 1) % 3] == r.b && o.v[(e + 2) % 3] == r.a) ||
                        (o.v[(e + 1) % 3] == r.a && o.v[(e + 2) % 3] == r.b))
                        o.nb[e] = fresh.back();
                }
            }
        }
        // link the fan: edge opposite v[1] is (v[2], pi), opposite v[2] is (pi, v[1])
        std::map<std::pair<int, int>, int> half;
        for (int ti : fresh) {
            const DelaunayTri& t = tris[ti];
            half[{t.v[1], t.v[2]}] = ti;
        }
        for (int ti : fresh) {
            DelaunayTri& t = tris[ti];
            auto it = half.find({t.v[2], pi});
            // neighbor across edge (v2, v0=pi) shares directed edge (pi, v2) reversed
            it = half.end();
            for (int tj : fresh) {
                if (tj == ti) continue;
                const DelaunayTri& u = tris[tj];
                if (u.v[2] == t.v[1]) t.nb[2] = tj;  // shares edge (pi, v1)
                if (u.v[1] == t.v[2]) t.nb[1] = tj;  // shares edge (v2, pi)
            }
            (void)it;
        }
        last_alive = fresh.front();
    }
};

std::uint64_t hash_mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

double jitter_unit(std::uint64_t seed, std::uint64_t i, std::uint64_t j, std::uint64_t axis) {
    std::uint64_t h = hash_mix(seed ^ hash_mix(i * 0x9e3779b97f4a7c15ULL + j * 0xbf58476d1ce4e5b9ULL + axis));
    return (static_cast<double>(h >> 11) / 9007199254740992.0) - 0.5;  // [-0.5, 0.5)
}

}  // namespace

// ---------------------------------------------------------------------------
// build_fluid_mesh
// ---------------------------------------------------------------------------

FluidDomainMesh build_fluid_mesh(const Cavity& cavity, const std::vector<const BodyShape*>& shapes,
                                 const std::vector<Pose2D>& poses, double h, std::uint64_t seed,
                                 int time_index) {
    if (shapes.size() != poses.size()) throw InputError("build_fluid_mesh: shape/pose count mismatch");
    if (!(h > 0.0)) throw InputError("build_fluid_mesh: h must be > 0");

    // clearance >= 2h (R1: disjoint bodies strictly inside the cavity)
    for (std::size_t b = 0; b < shapes.size(); ++b) {
        PlacedCurve pc{shapes[b], poses[b]};
        const int probes = 128;
        for (int i = 0; i < probes; ++i) {
            Vec2 x = pc.point(static_cast<double>(i) / probes);
            if (cavity.wall_distance(x) < 2.0 * h)
                throw GeometryError("build_fluid_mesh: body " + std::to_string(b) +
                                    " within 2h of the cavity wall");
            for (std::size_t c = 0; c < shapes.size(); ++c) {
                if (c == b) continue;
                if (distance_to_body(*shapes[c], poses[c], x) < 2.0 * h)
                    throw GeometryError("build_fluid_mesh: bodies " + std::to_string(b) + "," +
                                        std::to_string(c) + " within 2h of each other");
            }
        }
    }

    struct Seed {
        Vec2 x;
        int tag;
        double param;
    };
    std::vector<Seed> points;

    auto [lo, hi] = cavity.bounding_box();

    // interior lattice with deterministic jitter
    int nx = static_cast<int>(std::floor((hi.x - lo.x) / h));
    int ny = static_cast<int>(std::floor((hi.y - lo.y) / h));
    double clearance = 0.65 * h;
    for (int j = 1; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            Vec2 x{lo.x + i * h + 0.1 * h * jitter_unit(seed, i, j, 0),
                   lo.y + j * h + 0.1 * h * jitter_unit(seed, i, j, 1)};
            if (cavity.wall_distance(x) < clearance) continue;
            bool near_body = false;
            for (std::size_t b = 0; b < shapes.size() && !near_body; ++b)
                if (distance_to_body(*shapes[b], poses[b], x) < clearance) near_body = true;
            if (near_body) continue;
            points.push_back({x, FluidDomainMesh::kTagInterior, 0.0});
        }
    }

    // cavity boundary
    if (cavity.kind == Cavity::Kind::Box) {
        Vec2 corners[4] = {cavity.lo, {cavity.hi.x, cavity.lo.y}, cavity.hi, {cavity.lo.x, cavity.hi.y}};
        double perim = 2.0 * ((cavity.hi.x - cavity.lo.x) + (cavity.hi.y - cavity.lo.y));
        double arc = 0.0;
        for (int side = 0; side < 4; ++side) {
            Vec2 a = corners[side], b = corners[(side + 1) % 4];
            double len = (b - a).norm();
            int n = std::max(1, static_cast<int>(std::round(len / h)));
            for (int i = 0; i < n; ++i) {
                double f = static_cast<double>(i) / n;
                points.push_back({a + (b - a) * f, FluidDomainMesh::kTagCavity, (arc + f * len) / perim});
            }
            arc += len;
        }
    } else {
        double perim = kTwoPi * cavity.radius;
        int n = std::max(16, static_cast<int>(std::round(perim / (0.7 * h))));
        for (int i = 0; i < n; ++i) {
            double s = static_cast<double>(i) / n;
            double a = kTwoPi * s;
            points.push_back(
                {cavity.center + Vec2{cavity.radius * std::cos(a), cavity.radius * std::sin(a)},
                 FluidDomainMesh::kTagCavity, s});
        }
    }

    // body boundaries, equispaced in arclength
    for (std::size_t b = 0; b < shapes.size(); ++b) {
        PlacedCurve pc{shapes[b], poses[b]};
        // perimeter estimate
        double perim = 0.0;
        const int pn = 512;
        Vec2 prev = pc.point(0.0);
        for (int i = 1; i <= pn; ++i) {
            Vec2 cur = pc.point(static_cast<double>(i % pn) / pn);
            perim += (cur - prev).norm();
            prev = cur;
        }
        // curved boundaries are sampled a bit denser than the lattice to keep
        // the chord-polygon area deficit within O(h^2) with a small constant
        int n = std::max(16, static_cast<int>(std::round(perim / (0.7 * h))));
        std::vector<double> params = equispaced_params(pc, n);
        for (double s : params) points.push_back({pc.point(s), static_cast<int>(b), s});
    }

    // --- Delaunay ---
    Delaunay dt;
    double span = std::max(hi.x - lo.x, hi.y - lo.y);
    Vec2 mid = 0.5 * (lo + hi);
    dt.pts.push_back(mid + Vec2{-8.0 * span, -5.0 * span});
    dt.pts.push_back(mid + Vec2{8.0 * span, -5.0 * span});
    dt.pts.push_back(mid + Vec2{0.0, 9.0 * span});
    {
        DelaunayTri t;
        t.v[0] = 0;
        t.v[1] = 1;
        t.v[2] = 2;
        t.nb[0] = t.nb[1] = t.nb[2] = -1;
        if (Delaunay::orient(dt.pts[0], dt.pts[1], dt.pts[2]) < 0.0) std::swap(t.v[1], t.v[2]);
        dt.tris.push_back(t);
    }
    for (const Seed& s : points) dt.pts.push_back(s.x);
    for (std::size_t i = 0; i < points.size(); ++i) dt.insert(static_cast<int>(i) + 3);

    // --- extract the fluid part ---
    FluidDomainMesh mesh;
    mesh.cavity = &cavity;
    mesh.body_shapes = shapes;
    mesh.body_poses = poses;
    mesh.h = h;
    mesh.time_index = time_index;

    std::vector<int> remap(dt.pts.size(), -1);
    auto keep_node = [&](int pi) {
        if (remap[pi] < 0) {
            remap[pi] = static_cast<int>(mesh.nodes.size());
            mesh.nodes.push_back(dt.pts[pi]);
            const Seed& s = points[pi - 3];
            mesh.node_tag.push_back(s.tag);
            mesh.node_param.push_back(s.param);
        }
        return remap[pi];
    };

    auto centroid_in_fluid = [&](const DelaunayTri& t) {
        Vec2 c = (dt.pts[t.v[0]] + dt.pts[t.v[1]] + dt.pts[t.v[2]]) / 3.0;
        if (!cavity.contains(c)) return false;
        for (std::size_t b = 0; b < shapes.size(); ++b)
            if (point_in_body(*shapes[b], poses[b], c)) return false;
        return true;
    };

    std::map<std::pair<int, int>, int> edge_count;  // undirected edge -> occurrences
    std::map<std::pair<int, int>, std::pair<int, int>> edge_nodes;
    for (const DelaunayTri& t : dt.tris) {
        if (!t.alive) continue;
        if (t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;  // touches super-triangle
        if (!centroid_in_fluid(t)) continue;
        int a = keep_node(t.v[0]), b = keep_node(t.v[1]), c = keep_node(t.v[2]);
        Vec2 pa = mesh.nodes[a], pb = mesh.nodes[b], pc2 = mesh.nodes[c];
        double area2 = (pb - pa).cross(pc2 - pa);
        if (area2 < 0.0) {
            std::swap(b, c);
            area2 = -area2;
        }
        mesh.triangles.push_back({a, b, c});
        mesh.tri_area.push_back(0.5 * area2);
        mesh.total_area += 0.5 * area2;
        int vv[3] = {a, b, c};
        for (int e = 0; e < 3; ++e) {
            int u = vv[(e + 1) % 3], w = vv[(e + 2) % 3];
            auto key = std::minmax(u, w);
            edge_count[{key.first, key.second}]++;
        }
    }
    (void)edge_nodes;

    // boundary edges: seen exactly once
    for (const auto& [key, count] : edge_count) {
        if (count != 1) continue;
        int a = key.first, b = key.second;
        int ta = mesh.node_tag[a], tb = mesh.node_tag[b];
        if (ta == FluidDomainMesh::kTagInterior || tb == FluidDomainMesh::kTagInterior)
            throw GeometryError("build_fluid_mesh: boundary edge with an interior node (resolution too coarse)");
        if (ta != tb)
            throw GeometryError("build_fluid_mesh: boundary edge joining two different boundaries");
        FluidDomainMesh::BoundaryEdge be;
        be.n0 = a;
        be.n1 = b;
        be.tag = ta;
        be.s0 = mesh.node_param[a];
        double d = mesh.node_param[b] - be.s0;
        d -= std::round(d);
        be.s1 = be.s0 + d;
        mesh.boundary_edges.push_back(be);
    }

    if (mesh.triangles.empty()) throw GeometryError("build_fluid_mesh: empty fluid mesh");

    // locator buckets
    mesh.bucket_lo = lo - Vec2{h, h};
    mesh.bucket_hi = hi + Vec2{h, h};
    mesh.bucket_nx = std::max(1, static_cast<int>((mesh.bucket_hi.x - mesh.bucket_lo.x) / (2.0 * h)));
    mesh.bucket_ny = std::max(1, static_cast<int>((mesh.bucket_hi.y - mesh.bucket_lo.y) / (2.0 * h)));
    mesh.buckets.assign(static_cast<std::size_t>(mesh.bucket_nx) * mesh.bucket_ny, {});
    double bx = (mesh.bucket_hi.x - mesh.bucket_lo.x) / mesh.bucket_nx;
    double by = (mesh.bucket_hi.y - mesh.bucket_lo.y) / mesh.bucket_ny;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tv = mesh.triangles[ti];
        Vec2 tmin{1e300, 1e300}, tmax{-1e300, -1e300};
        for (int k = 0; k < 3; ++k) {
            Vec2 p = mesh.nodes[tv[k]];
            tmin.x = std::min(tmin.x, p.x);
            tmin.y = std::min(tmin.y, p.y);
            tmax.x = std::max(tmax.x, p.x);
            tmax.y = std::max(tmax.y, p.y);
        }
        int i0 = std::clamp(static_cast<int>((tmin.x - mesh.bucket_lo.x) / bx), 0, mesh.bucket_nx - 1);
        int i1 = std::clamp(static_cast<int>((tmax.x - mesh.bucket_lo.x) / bx), 0, mesh.bucket_nx - 1);
        int j0 = std::clamp(static_cast<int>((tmin.y - mesh.bucket_lo.y) / by), 0, mesh.bucket_ny - 1);
        int j1 = std::clamp(static_cast<int>((tmax.y - mesh.bucket_lo.y) / by), 0, mesh.bucket_ny - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                mesh.buckets[static_cast<std::size_t>(j) * mesh.bucket_nx + i].push_back(
                    static_cast<int>(ti));
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

int FluidDomainMesh::find_triangle(Vec2 x) const {
    if (x.x < bucket_lo.x || x.x > bucket_hi.x || x.y < bucket_lo.y || x.y > bucket_hi.y) return -1;
    double bx = (bucket_hi.x - bucket_lo.x) / bucket_nx;
    double by = (bucket_hi.y - bucket_lo.y) / bucket_ny;
    int i = std::clamp(static_cast<int>((x.x - bucket_lo.x) / bx), 0, bucket_nx - 1);
    int j = std::clamp(static_cast<int>((x.y - bucket_lo.y) / by), 0, bucket_ny - 1);
    const auto& bucket = buckets[static_cast<std::size_t>(j) * bucket_nx + i];
    for (int ti : bucket) {
        const auto& tv = triangles[ti];
        Vec2 a = nodes[tv[0]], b = nodes[tv[1]], c = nodes[tv[2]];
        double area2 = 2.0 * tri_area[ti];
        double w0 = (b - x).cross(c - x) / area2;
        double w1 = (c - x).cross(a - x) / area2;
        double w2 = (a - x).cross(b - x) / area2;
        if (w0 >= -1e-12 && w1 >= -1e-12 && w2 >= -1e-12) return ti;
    }
    return -1;
}

double FluidDomainMesh::interpolate(const std::vector<double>& nodal, Vec2 x, bool& found) const {
    int ti = find_triangle(x);
    if (ti < 0) {
        found = false;
        return 0.0;
    }
    found = true;
    const auto& tv = triangles[ti];
    Vec2 a = nodes[tv[0]], b = nodes[tv[1]], c = nodes[tv[2]];
    double area2 = 2.0 * tri_area[ti];
    double w0 = (b - x).cross(c - x) / area2;
    double w1 = (c - x).cross(a - x) / area2;
    double w2 = 1.0 - w0 - w1;
    return w0 * nodal[tv[0]] + w1 * nodal[tv[1]] + w2 * nodal[tv[2]];
}

double FluidDomainMesh::extrapolate(const std::vector<double>& nodal, const std::vector<Vec2>& tri_grad,
                                    Vec2 x) const {
    // nearest boundary node (linear scan over boundary edges; they are few)
    int best = -1;
    double best_d = 1e300;
    for (const auto& be : boundary_edges) {
        for (int n : {be.n0, be.n1}) {
            double d = (nodes[n] - x).norm2();
            if (d < best_d) {
                best_d = d;
                best = n;
            }
        }
    }
    if (best < 0) throw NumericError("mesh extrapolate: no boundary nodes");
    // an incident triangle
    for (std::size_t ti = 0; ti < triangles.size(); ++ti) {
        const auto& tv = triangles[ti];
        if (tv[0] == best || tv[1] == best || tv[2] == best)
            return nodal[best] + tri_grad[ti].dot(x - nodes[best]);
    }
    throw NumericError("mesh extrapolate: dangling boundary node");
}

double FluidDomainMesh::integrate_nodal(const std::vector<double>& nodal) const {
    double acc = 0.0;
    for (std::size_t ti = 0; ti < triangles.size(); ++ti) {
        const auto& tv = triangles[ti];
        acc += tri_area[ti] * (nodal[tv[0]] + nodal[tv[1]] + nodal[tv[2]]) / 3.0;
    }
    return acc;
}

}  // namespace rigidflow
