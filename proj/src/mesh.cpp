#include "revend/mesh.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "revend/errors.hpp"

namespace revend {

TriangleMesh mesh(const EndSpec& end, double s_max, std::size_t n_s, std::size_t n_theta,
                  const std::vector<MeshAttribute>& attributes) {
    if (n_s < 2) throw DomainError("mesh needs at least 2 rings");
    if (n_theta < 3) throw DomainError("mesh needs at least 3 points per ring");
    if (!(s_max > 0.0) || s_max > end.curve.s_max()) {
        throw DomainError("mesh s_max must lie in (0, " + std::to_string(end.curve.s_max()) + "]");
    }

    TriangleMesh m;
    m.n_s = n_s;
    m.n_theta = n_theta;
    m.vertices.reserve(n_s * n_theta);
    for (const auto& a : attributes) {
        m.attribute_names.push_back(a.name);
        m.attribute_values.emplace_back();
        m.attribute_values.back().reserve(n_s * n_theta);
    }

    for (std::size_t i = 0; i < n_s; ++i) {
        const double s = i + 1 == n_s ? s_max : s_max * static_cast<double>(i) / static_cast<double>(n_s - 1);
        const ProfilePoint p = end.curve.point(s);
        std::vector<double> values;
        for (const auto& a : attributes) values.push_back(a.of_s(s));
        for (std::size_t j = 0; j < n_theta; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta);
            m.vertices.push_back({p.x1 * std::cos(theta), p.x1 * std::sin(theta), p.x3});
            for (std::size_t a = 0; a < values.size(); ++a) m.attribute_values[a].push_back(values[a]);
        }
    }

    m.triangles.reserve(2 * (n_s - 1) * n_theta);
    for (std::size_t i = 0; i + 1 < n_s; ++i) {
        for (std::size_t j = 0; j < n_theta; ++j) {
            const std::size_t jn = (j + 1) % n_theta;
            const std::size_t a = i * n_theta + j;
            const std::size_t b = i * n_theta + jn;
            const std::size_t c = (i + 1) * n_theta + jn;
            const std::size_t d = (i + 1) * n_theta + j;
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    }
    return m;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.write(buf, res.ptr - buf);
}

}  // namespace

void write_obj(std::ostream& out, const TriangleMesh& m) {
    out << "# surface of revolution, " << m.n_s << " rings x " << m.n_theta << " meridians\n";
    for (const auto& v : m.vertices) {
        out << "v ";
        put(out, v[0]);
        out << ' ';
        put(out, v[1]);
        out << ' ';
        put(out, v[2]);
        out << '\n';
    }
    for (std::size_t a = 0; a < m.attribute_names.size(); ++a) {
        for (double value : m.attribute_values[a]) {
            out << "#a " << m.attribute_names[a] << ' ';
            put(out, value);
            out << '\n';
        }
    }
    for (const auto& t : m.triangles) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    if (!out) throw IoError("failed writing mesh output");
}

}  // namespace revend
