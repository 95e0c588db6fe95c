#include "graspkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace graspkit {

namespace {

// Fixed parity-ray direction, skewed off the axes so voxel-center rays do
// not graze shared edges of axis-aligned geometry.
const Vec3 kParityRayDir(1.0, 1e-4, 2e-4);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void PointCloud::validate() const {
    if (points.empty()) throw std::invalid_argument("empty point cloud");
    for (const Vec3& p : points) {
        if (!p.allFinite()) throw std::invalid_argument("point cloud contains non-finite coordinates");
    }
}

void Aabb::expand(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
}

double Aabb::squared_exterior_distance(const Vec3& p) const {
    Vec3 d = (min - p).cwiseMax(p - max).cwiseMax(Vec3::Zero());
    return d.squaredNorm();
}

Vec3 Aabb::corner(int k) const {
    return Vec3((k & 1) ? max.x() : min.x(), (k & 2) ? max.y() : min.y(),
                (k & 4) ? max.z() : min.z());
}

Aabb Aabb::intersection(const Aabb& a, const Aabb& b) {
    Aabb out;
    out.min = a.min.cwiseMax(b.min);
    out.max = a.max.cwiseMin(b.max);
    return out;
}

Aabb TriangleMesh::bounds() const {
    Aabb box;
    for (const Vec3& v : vertices.points) box.expand(v);
    return box;
}

void TriangleMesh::validate() const {
    vertices.validate();
    const int n = vertex_count();
    for (const auto& f : faces) {
        for (int idx : f) {
            if (idx < 0 || idx >= n) throw std::invalid_argument("face index out of range");
        }
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw std::invalid_argument("degenerate face with repeated vertex index");
    }
}

bool TriangleMesh::is_watertight() const {
    if (faces.empty()) return false;
    std::map<std::pair<int, int>, int> directed;
    for (const auto& f : faces) {
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            if (++directed[{a, b}] > 1) return false;  // non-manifold or duplicated face
        }
    }
    for (const auto& [edge, cnt] : directed) {
        auto rev = directed.find({edge.second, edge.first});
        if (rev == directed.end() || rev->second != 1) return false;
    }
    return true;
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
    return {rotation * inner.rotation, rotation * inner.translation + translation};
}

RigidTransform RigidTransform::inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
}

void RigidTransform::validate() const {
    if (!rotation.allFinite() || !translation.allFinite())
        throw std::invalid_argument("rigid transform has non-finite entries");
    Mat3 err = rotation.transpose() * rotation - Mat3::Identity();
    if (err.cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("rotation is not orthonormal");
    if (rotation.determinant() < 0.0)
        throw std::invalid_argument("improper rotation");
}

PointCloud transformed(const PointCloud& cloud, const RigidTransform& tf) {
    PointCloud out;
    out.points.reserve(cloud.points.size());
    for (const Vec3& p : cloud.points) out.points.push_back(tf.apply(p));
    return out;
}

TriangleMesh transformed(const TriangleMesh& mesh, const RigidTransform& tf) {
    return {transformed(mesh.vertices, tf), mesh.faces};
}

NearestVertex nearest_vertex(const Vec3& query, const PointCloud& cloud) {
    if (cloud.empty()) throw std::invalid_argument("empty point cloud");
    int best = 0;
    double best_d2 = (cloud[0] - query).squaredNorm();
    for (int i = 1; i < cloud.size(); ++i) {
        double d2 = (cloud[i] - query).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return {best, cloud[best] - query};
}

std::vector<int> farthest_point_sampling(const PointCloud& cloud, int k, int start) {
    const int n = cloud.size();
    if (n == 0) throw std::invalid_argument("empty point cloud");
    if (k < 1 || k > n) throw std::invalid_argument("farthest point sampling: k out of range");
    if (start < 0 || start >= n) throw std::invalid_argument("farthest point sampling: start out of range");

    std::vector<int> selected;
    selected.reserve(static_cast<size_t>(k));
    std::vector<double> min_d2(static_cast<size_t>(n), kInf);
    int current = start;
    selected.push_back(current);
    min_d2[static_cast<size_t>(current)] = -1.0;  // never reselected
    for (int step = 1; step < k; ++step) {
        int next = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            double d2 = (cloud[i] - cloud[current]).squaredNorm();
            if (d2 < min_d2[static_cast<size_t>(i)]) min_d2[static_cast<size_t>(i)] = d2;
            if (min_d2[static_cast<size_t>(i)] > best) {
                best = min_d2[static_cast<size_t>(i)];
                next = i;
            }
        }
        current = next;
        min_d2[static_cast<size_t>(current)] = -1.0;  // never reselected
        selected.push_back(current);
    }
    return selected;
}

namespace {

// Moller-Trumbore; hits with t > 0 only.
bool ray_triangle(const Vec3& origin, const Vec3& dir, const Vec3& v0, const Vec3& v1,
                  const Vec3& v2, double& t_out) {
    const Vec3 e1 = v1 - v0;
    const Vec3 e2 = v2 - v0;
    const Vec3 pv = dir.cross(e2);
    const double det = e1.dot(pv);
    if (std::abs(det) < 1e-14) return false;
    const double inv_det = 1.0 / det;
    const Vec3 tv = origin - v0;
    const double u = tv.dot(pv) * inv_det;
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 qv = tv.cross(e1);
    const double v = dir.dot(qv) * inv_det;
    if (v < 0.0 || u + v > 1.0) return false;
    const double t = e2.dot(qv) * inv_det;
    if (t <= 0.0) return false;
    t_out = t;
    return true;
}

// Closest point on triangle (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

bool ray_aabb(const Vec3& origin, const Vec3& inv_dir, const Aabb& box) {
    double tmin = 0.0, tmax = kInf;
    for (int k = 0; k < 3; ++k) {
        double t1 = (box.min[k] - origin[k]) * inv_dir[k];
        double t2 = (box.max[k] - origin[k]) * inv_dir[k];
        if (inv_dir[k] < 0.0) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
        if (tmin > tmax) return false;
    }
    return true;
}

}  // namespace

MeshBvh::MeshBvh(const TriangleMesh& mesh) : mesh_(mesh) {
    mesh.validate();
    std::vector<int> tris(static_cast<size_t>(mesh.face_count()));
    std::iota(tris.begin(), tris.end(), 0);
    tri_order_ = tris;
    if (!tris.empty()) build(tri_order_, 0, static_cast<int>(tri_order_.size()));
}

int MeshBvh::build(std::vector<int>& tris, int first, int count) {
    Node node;
    for (int i = first; i < first + count; ++i) {
        const auto& f = mesh_.faces[static_cast<size_t>(tris[static_cast<size_t>(i)])];
        for (int k = 0; k < 3; ++k) node.box.expand(mesh_.vertices[f[static_cast<size_t>(k)]]);
    }
    int node_index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (count <= 4) {
        nodes_[static_cast<size_t>(node_index)].first = first;
        nodes_[static_cast<size_t>(node_index)].count = count;
        return node_index;
    }
    // Median split on the longest axis; split by triangle centroid.
    Vec3 ext = node.box.extent();
    int axis = 0;
    if (ext.y() > ext.x()) axis = 1;
    if (ext.z() > ext[axis]) axis = 2;
    auto centroid = [&](int tri) {
        const auto& f = mesh_.faces[static_cast<size_t>(tri)];
        return (mesh_.vertices[f[0]][axis] + mesh_.vertices[f[1]][axis] +
                mesh_.vertices[f[2]][axis]) / 3.0;
    };
    std::sort(tris.begin() + first, tris.begin() + first + count,
              [&](int a, int b) {
                  double ca = centroid(a), cb = centroid(b);
                  if (ca != cb) return ca < cb;
                  return a < b;
              });
    int half = count / 2;
    int left = build(tris, first, half);
    int right = build(tris, first + half, count - half);
    nodes_[static_cast<size_t>(node_index)].left = left;
    nodes_[static_cast<size_t>(node_index)].right = right;
    return node_index;
}

int MeshBvh::count_ray_hits(const Vec3& origin, const Vec3& dir) const {
    if (nodes_.empty()) return 0;
    Vec3 inv_dir;
    for (int k = 0; k < 3; ++k)
        inv_dir[k] = (dir[k] != 0.0) ? 1.0 / dir[k] : kInf;
    int hits = 0;
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        int ni = stack.back();
        stack.pop_back();
        const Node& node = nodes_[static_cast<size_t>(ni)];
        if (!ray_aabb(origin, inv_dir, node.box)) continue;
        if (node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const auto& f = mesh_.faces[static_cast<size_t>(tri_order_[static_cast<size_t>(i)])];
                double t;
                if (ray_triangle(origin, dir, mesh_.vertices[f[0]], mesh_.vertices[f[1]],
                                 mesh_.vertices[f[2]], t))
                    ++hits;
            }
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    return hits;
}

double MeshBvh::unsigned_distance(const Vec3& p) const {
    if (nodes_.empty()) throw std::invalid_argument("mesh has no faces");
    double best = kInf;
    // Best-first descent: always expand the child whose box is closer.
    struct Entry {
        double d2;
        int node;
    };
    std::vector<Entry> stack = {{nodes_[0].box.squared_exterior_distance(p), 0}};
    while (!stack.empty()) {
        Entry e = stack.back();
        stack.pop_back();
        if (e.d2 > best * best) continue;
        const Node& node = nodes_[static_cast<size_t>(e.node)];
        if (node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const auto& f = mesh_.faces[static_cast<size_t>(tri_order_[static_cast<size_t>(i)])];
                Vec3 q = closest_point_on_triangle(p, mesh_.vertices[f[0]], mesh_.vertices[f[1]],
                                                   mesh_.vertices[f[2]]);
                best = std::min(best, (q - p).norm());
            }
        } else {
            Entry l{nodes_[static_cast<size_t>(node.left)].box.squared_exterior_distance(p), node.left};
            Entry r{nodes_[static_cast<size_t>(node.right)].box.squared_exterior_distance(p), node.right};
            if (l.d2 > r.d2) std::swap(l, r);  // nearer child expanded first
            stack.push_back(r);
            stack.push_back(l);
        }
    }
    return best;
}

bool MeshBvh::contains(const Vec3& p) const {
    return (count_ray_hits(p, kParityRayDir) % 2) == 1;
}

double point_mesh_distance(const Vec3& p, const TriangleMesh& mesh) {
    MeshBvh bvh(mesh);
    return point_mesh_distance(p, mesh, bvh);
}

double point_mesh_distance(const Vec3& p, const TriangleMesh& mesh, const MeshBvh& bvh) {
    if (mesh.faces.empty()) throw std::invalid_argument("mesh has no faces");
    double d = bvh.unsigned_distance(p);
    if (mesh.is_watertight() && bvh.contains(p)) return -d;
    return d;
}

namespace {

double voxel_count_to_cm3(long long count, double voxel_size) {
    return static_cast<double>(count) * voxel_size * voxel_size * voxel_size * 1e6;
}

}  // namespace

double voxelized_intersection_volume(const TriangleMesh& a, const TriangleMesh& b,
                                     double voxel_size) {
    if (voxel_size <= 0.0) throw std::invalid_argument("voxel size must be positive");
    if (!a.is_watertight() || !b.is_watertight())
        throw std::invalid_argument("open mesh cannot be voxelized for volume");

    Aabb inter = Aabb::intersection(a.bounds(), b.bounds());
    if (!inter.valid()) return 0.0;
    const Vec3 lo = inter.min - Vec3::Constant(voxel_size);
    const Vec3 hi = inter.max + Vec3::Constant(voxel_size);

    Eigen::Vector3i n;
    for (int k = 0; k < 3; ++k)
        n[k] = std::max(1, static_cast<int>(std::ceil((hi[k] - lo[k]) / voxel_size)));

    // Probe the mesh with fewer triangles first; the conjunction is
    // symmetric so the result does not depend on this ordering.
    const bool a_first = a.face_count() <= b.face_count();
    MeshBvh bvh_first(a_first ? a : b);
    MeshBvh bvh_second(a_first ? b : a);

    long long inside = 0;
    for (int i = 0; i < n.x(); ++i) {
        for (int j = 0; j < n.y(); ++j) {
            for (int k = 0; k < n.z(); ++k) {
                Vec3 c = lo + Vec3((i + 0.5) * voxel_size, (j + 0.5) * voxel_size,
                                   (k + 0.5) * voxel_size);
                if (bvh_first.contains(c) && bvh_second.contains(c)) ++inside;
            }
        }
    }
    return voxel_count_to_cm3(inside, voxel_size);
}

double voxelized_volume(const TriangleMesh& mesh, double voxel_size) {
    if (voxel_size <= 0.0) throw std::invalid_argument("voxel size must be positive");
    if (!mesh.is_watertight())
        throw std::invalid_argument("open mesh cannot be voxelized for volume");
    Aabb box = mesh.bounds();
    const Vec3 lo = box.min - Vec3::Constant(voxel_size);
    const Vec3 hi = box.max + Vec3::Constant(voxel_size);
    Eigen::Vector3i n;
    for (int k = 0; k < 3; ++k)
        n[k] = std::max(1, static_cast<int>(std::ceil((hi[k] - lo[k]) / voxel_size)));
    MeshBvh bvh(mesh);
    long long inside = 0;
    for (int i = 0; i < n.x(); ++i)
        for (int j = 0; j < n.y(); ++j)
            for (int k = 0; k < n.z(); ++k) {
                Vec3 c = lo + Vec3((i + 0.5) * voxel_size, (j + 0.5) * voxel_size,
                                   (k + 0.5) * voxel_size);
                if (bvh.contains(c)) ++inside;
            }
    return voxel_count_to_cm3(inside, voxel_size);
}

TriangleMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open OBJ file: " + path);
    TriangleMesh mesh;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ss >> p.x() >> p.y() >> p.z()))
                throw std::runtime_error("malformed vertex at line " + std::to_string(lineno));
            mesh.vertices.points.push_back(p);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ss >> tok) {
                // Accept "i", "i/..", "i//.." forms; only the vertex index is used.
                size_t slash = tok.find('/');
                std::string head = (slash == std::string::npos) ? tok : tok.substr(0, slash);
                int i = std::stoi(head);
                if (i < 1 || i > mesh.vertices.size())
                    throw std::runtime_error("face index out of range at line " + std::to_string(lineno));
                idx.push_back(i - 1);
            }
            if (idx.size() != 3)
                throw std::runtime_error("only triangular faces are supported (line " +
                                         std::to_string(lineno) + " has " +
                                         std::to_string(idx.size()) + " vertices)");
            mesh.faces.push_back({idx[0], idx[1], idx[2]});
        }
        // All other records are ignored.
    }
    mesh.validate();
    return mesh;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out.precision(17);
    for (const Vec3& v : mesh.vertices.points)
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& f : mesh.faces)
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

}  // namespace graspkit
