#include "graspkit/shapes.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace graspkit {

namespace {

struct VertexWelder {
    PointCloud cloud;
    std::map<std::tuple<double, double, double>, int> index;

    int add(const Vec3& p) {
        auto key = std::make_tuple(p.x(), p.y(), p.z());
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = cloud.size();
        cloud.points.push_back(p);
        index.emplace(key, id);
        return id;
    }
};

}  // namespace

TriangleMesh make_box_mesh(const Vec3& lo, const Vec3& hi, int divisions) {
    if (divisions < 1) throw std::invalid_argument("box divisions must be >= 1");
    VertexWelder weld;
    std::vector<std::array<int, 3>> faces;
    const int n = divisions;

    // Grid points are computed from the same rational fractions on every
    // face so shared edges weld exactly.
    auto corner_point = [&](int i, int j, int k) {
        return Vec3(lo.x() + (hi.x() - lo.x()) * (static_cast<double>(i) / n),
                    lo.y() + (hi.y() - lo.y()) * (static_cast<double>(j) / n),
                    lo.z() + (hi.z() - lo.z()) * (static_cast<double>(k) / n));
    };

    // axis: the fixed coordinate of the face; side: 0 = lo, 1 = hi.
    auto emit_face = [&](int axis, int side) {
        auto grid_point = [&](int a, int b) {
            int ijk[3];
            ijk[axis] = side * n;
            ijk[(axis + 1) % 3] = a;
            ijk[(axis + 2) % 3] = b;
            return corner_point(ijk[0], ijk[1], ijk[2]);
        };
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                int v00 = weld.add(grid_point(a, b));
                int v10 = weld.add(grid_point(a + 1, b));
                int v01 = weld.add(grid_point(a, b + 1));
                int v11 = weld.add(grid_point(a + 1, b + 1));
                // Outward orientation flips between the lo and hi sides.
                if (side == 1) {
                    faces.push_back({v00, v10, v11});
                    faces.push_back({v00, v11, v01});
                } else {
                    faces.push_back({v00, v11, v10});
                    faces.push_back({v00, v01, v11});
                }
            }
        }
    };
    for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) emit_face(axis, side);

    return {std::move(weld.cloud), std::move(faces)};
}

TriangleMesh make_icosphere(double radius, int subdivisions) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (Vec3& v : verts) v = v.normalized() * radius;
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = (verts[static_cast<size_t>(a)] + verts[static_cast<size_t>(b)]).normalized() * radius;
            int id = static_cast<int>(verts.size());
            verts.push_back(m);
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    return {PointCloud(std::move(verts)), std::move(faces)};
}

TriangleMesh make_cylinder_mesh(double radius, double height, int segments, int rings) {
    if (segments < 3 || rings < 2) throw std::invalid_argument("cylinder needs >= 3 segments, >= 2 rings");
    std::vector<Vec3> centers;
    std::vector<double> radii;
    std::vector<Vec3> us, vs;
    for (int r = 0; r < rings; ++r) {
        double z = -height / 2.0 + height * (static_cast<double>(r) / (rings - 1));
        centers.emplace_back(0, 0, z);
        radii.push_back(radius);
        us.emplace_back(1, 0, 0);
        vs.emplace_back(0, 1, 0);
    }
    return make_capped_tube(centers, radii, us, vs, segments);
}

TriangleMesh make_capped_tube(const std::vector<Vec3>& centers,
                              const std::vector<double>& radii,
                              const std::vector<Vec3>& ring_u,
                              const std::vector<Vec3>& ring_v, int segments) {
    const int R = static_cast<int>(centers.size());
    if (R < 2) throw std::invalid_argument("capped tube needs >= 2 rings");
    if (segments < 3) throw std::invalid_argument("capped tube needs >= 3 segments");
    if (radii.size() != centers.size() || ring_u.size() != centers.size() ||
        ring_v.size() != centers.size())
        throw std::invalid_argument("capped tube: mismatched ring arrays");

    PointCloud cloud;
    const int S = segments;
    for (int r = 0; r < R; ++r) {
        for (int s = 0; s < S; ++s) {
            double ang = 2.0 * M_PI * s / S;
            cloud.points.push_back(centers[static_cast<size_t>(r)] +
                                   radii[static_cast<size_t>(r)] *
                                       (std::cos(ang) * ring_u[static_cast<size_t>(r)] +
                                        std::sin(ang) * ring_v[static_cast<size_t>(r)]));
        }
    }
    // Cap apexes: pushed slightly beyond the end rings along the tube axis.
    Vec3 axis0 = (centers[1] - centers[0]).normalized();
    Vec3 axis1 = (centers[static_cast<size_t>(R - 1)] - centers[static_cast<size_t>(R - 2)]).normalized();
    int apex0 = cloud.size();
    cloud.points.push_back(centers[0] - axis0 * (0.6 * radii[0]));
    int apex1 = cloud.size();
    cloud.points.push_back(centers[static_cast<size_t>(R - 1)] +
                           axis1 * (0.6 * radii[static_cast<size_t>(R - 1)]));

    std::vector<std::array<int, 3>> faces;
    auto ring_vertex = [S](int r, int s) { return r * S + (s % S); };
    for (int r = 0; r + 1 < R; ++r) {
        for (int s = 0; s < S; ++s) {
            int a = ring_vertex(r, s), b = ring_vertex(r, s + 1);
            int c = ring_vertex(r + 1, s), d = ring_vertex(r + 1, s + 1);
            faces.push_back({a, b, d});
            faces.push_back({a, d, c});
        }
    }
    for (int s = 0; s < S; ++s) {
        faces.push_back({apex0, ring_vertex(0, s + 1), ring_vertex(0, s)});
        faces.push_back({apex1, ring_vertex(R - 1, s), ring_vertex(R - 1, s + 1)});
    }
    return {std::move(cloud), std::move(faces)};
}

TriangleMesh make_uv_ellipsoid(const Vec3& center, const Vec3& radii, int rings,
                               int segments) {
    if (rings < 1 || segments < 3)
        throw std::invalid_argument("ellipsoid needs >= 1 ring, >= 3 segments");
    PointCloud cloud;
    const int R = rings, S = segments;
    for (int r = 0; r < R; ++r) {
        double lat = M_PI * (r + 1) / (R + 1);  // in (0, pi), poles excluded
        for (int s = 0; s < S; ++s) {
            double lon = 2.0 * M_PI * s / S;
            cloud.points.push_back(center + Vec3(radii.x() * std::sin(lat) * std::cos(lon),
                                                 radii.y() * std::cos(lat),
                                                 radii.z() * std::sin(lat) * std::sin(lon)));
        }
    }
    int top = cloud.size();
    cloud.points.push_back(center + Vec3(0, radii.y(), 0));
    int bottom = cloud.size();
    cloud.points.push_back(center - Vec3(0, radii.y(), 0));

    std::vector<std::array<int, 3>> faces;
    auto rv = [S](int r, int s) { return r * S + (s % S); };
    for (int s = 0; s < S; ++s) faces.push_back({top, rv(0, s), rv(0, s + 1)});
    for (int r = 0; r + 1 < R; ++r) {
        for (int s = 0; s < S; ++s) {
            int a = rv(r, s), b = rv(r, s + 1), c = rv(r + 1, s), d = rv(r + 1, s + 1);
            faces.push_back({a, d, b});
            faces.push_back({a, c, d});
        }
    }
    for (int s = 0; s < S; ++s) faces.push_back({bottom, rv(R - 1, s + 1), rv(R - 1, s)});
    return {std::move(cloud), std::move(faces)};
}

}  // namespace graspkit
