#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace graspkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Ordered list of 3D points, coordinates in meters.
struct PointCloud {
    std::vector<Vec3> points;

    PointCloud() = default;
    explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

    int size() const { return static_cast<int>(points.size()); }
    bool empty() const { return points.empty(); }
    const Vec3& operator[](int i) const { return points[static_cast<size_t>(i)]; }
    Vec3& operator[](int i) { return points[static_cast<size_t>(i)]; }

    // Throws if empty or any coordinate is non-finite.
    void validate() const;
};

/// Axis-aligned bounding box, min <= max componentwise.
struct Aabb {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void expand(const Vec3& p);
    bool valid() const { return (min.array() <= max.array()).all(); }
    Vec3 extent() const { return max - min; }
    Vec3 center() const { return 0.5 * (min + max); }
    bool contains(const Vec3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }
    // Squared distance from p to the box (0 if inside).
    double squared_exterior_distance(const Vec3& p) const;
    // Corner k, bit 0 -> x, bit 1 -> y, bit 2 -> z (0 = min side).
    Vec3 corner(int k) const;

    static Aabb intersection(const Aabb& a, const Aabb& b);
};

/// Triangle mesh with shared vertex list. Faces hold vertex indices.
struct TriangleMesh {
    PointCloud vertices;
    std::vector<std::array<int, 3>> faces;

    TriangleMesh() = default;
    TriangleMesh(PointCloud v, std::vector<std::array<int, 3>> f)
        : vertices(std::move(v)), faces(std::move(f)) {}

    int vertex_count() const { return vertices.size(); }
    int face_count() const { return static_cast<int>(faces.size()); }

    Aabb bounds() const;

    // Throws on out-of-range or degenerate (repeated index) faces.
    void validate() const;

    // True when every directed edge occurs exactly once and is matched by
    // its reverse: closed, 2-manifold, consistently oriented. Multiple
    // disjoint closed components also qualify.
    bool is_watertight() const;
};

/// Rigid transform p -> R*p + t. Rotation must be proper (det = +1).
struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    RigidTransform compose(const RigidTransform& inner) const;
    RigidTransform inverse() const;

    // Throws if rotation is not orthonormal with det +1 (tol 1e-9).
    void validate() const;
};

PointCloud transformed(const PointCloud& cloud, const RigidTransform& tf);
TriangleMesh transformed(const TriangleMesh& mesh, const RigidTransform& tf);

struct NearestVertex {
    int index = -1;
    Vec3 displacement = Vec3::Zero();  // cloud[index] - query
};

// Global argmin of ||cloud[i] - query||, ties broken by lowest index.
NearestVertex nearest_vertex(const Vec3& query, const PointCloud& cloud);

// Greedy max-min subset selection. First selected index is `start`; each
// following pick maximizes the minimum distance to the selected set, ties
// broken by lowest index. Output is in selection order.
std::vector<int> farthest_point_sampling(const PointCloud& cloud, int k, int start = 0);

// Bounding-volume hierarchy over mesh triangles; used for ray parity
// queries and closest-point searches. Results match brute force exactly.
class MeshBvh {
  public:
    explicit MeshBvh(const TriangleMesh& mesh);

    // Number of ray-triangle intersections with t > 0.
    int count_ray_hits(const Vec3& origin, const Vec3& dir) const;

    // Unsigned distance to the closest point on the mesh surface.
    double unsigned_distance(const Vec3& p) const;

    // Parity test along a fixed skewed ray direction.
    bool contains(const Vec3& p) const;

  private:
    struct Node {
        Aabb box;
        int left = -1, right = -1;  // children; leaf when left < 0
        int first = 0, count = 0;   // triangle range for leaves
    };
    const TriangleMesh& mesh_;
    std::vector<Node> nodes_;
    std::vector<int> tri_order_;
    int build(std::vector<int>& tris, int first, int count);
};

// Signed when the mesh is watertight (negative inside), unsigned otherwise.
double point_mesh_distance(const Vec3& p, const TriangleMesh& mesh);
double point_mesh_distance(const Vec3& p, const TriangleMesh& mesh, const MeshBvh& bvh);

// Volume of {voxel centers inside both meshes} in cm^3. The voxel grid
// spans the AABB intersection of the meshes padded by one voxel. Both
// meshes must be watertight.
double voxelized_intersection_volume(const TriangleMesh& a, const TriangleMesh& b,
                                     double voxel_size);

// Enclosed volume of a single watertight mesh in cm^3 at the given voxel
// size (same parity rule as the intersection volume).
double voxelized_volume(const TriangleMesh& mesh, double voxel_size);

// OBJ subset: `v` and `f` records, triangular 1-based faces only.
TriangleMesh load_obj(const std::string& path);
void save_obj(const TriangleMesh& mesh, const std::string& path);

}  // namespace graspkit
