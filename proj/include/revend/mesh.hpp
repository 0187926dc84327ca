#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "revend/geometry.hpp"

namespace revend {

/// Scalar field on the surface that depends on the arc length s only.
struct MeshAttribute {
    std::string name;
    std::function<double(double)> of_s;
};

struct TriangleMesh {
    std::size_t n_s = 0;
    std::size_t n_theta = 0;
    std::vector<std::array<double, 3>> vertices;
    // Zero-based vertex indices, counter-clockwise seen from outside the axis.
    std::vector<std::array<std::size_t, 3>> triangles;
    std::vector<std::string> attribute_names;
    // attribute_values[a][v] is attribute a at vertex v.
    std::vector<std::vector<double>> attribute_values;
};

/// Samples f(s, theta) = (gamma1 cos theta, gamma1 sin theta, gamma2) on an
/// n_s x n_theta grid over [0, s_max] x [0, 2 pi), wrapping in theta.
TriangleMesh mesh(const EndSpec& end, double s_max, std::size_t n_s, std::size_t n_theta,
                  const std::vector<MeshAttribute>& attributes = {});

/// Wavefront OBJ with `v`/`f` records; attributes go in `#a name value` comments.
void write_obj(std::ostream& out, const TriangleMesh& m);

}  // namespace revend
