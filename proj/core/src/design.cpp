#include "surfrank/design.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace surfrank {

std::string_view to_string(DesignKind kind) {
    switch (kind) {
        case DesignKind::uniform_grid: return "unif";
        case DesignKind::latin_hypercube: return "lhs";
        case DesignKind::from_file: return "file";
    }
    return "unknown";
}

DesignKind parse_design_kind(std::string_view name) {
    if (name == "unif" || name == "uniform" || name == "uniform-grid") return DesignKind::uniform_grid;
    if (name == "lhs" || name == "latin-hypercube") return DesignKind::latin_hypercube;
    if (name == "file" || name == "from-file") return DesignKind::from_file;
    throw std::invalid_argument("unknown design kind '" + std::string(name) +
                                "' (expected unif, lhs or file)");
}

std::size_t grid_side(std::size_t m, std::size_t dim) {
    if (m == 0) throw std::invalid_argument("design budget must be at least 1");
    if (dim == 1) return m;
    auto side = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(m), 1.0 / static_cast<double>(dim))));
    for (std::size_t candidate : {side - 1, side, side + 1}) {
        if (candidate == 0) continue;
        std::size_t p = 1;
        for (std::size_t i = 0; i < dim; ++i) p *= candidate;
        if (p == m) return candidate;
    }
    std::ostringstream msg;
    msg << "uniform-grid design in " << dim << " dimensions needs a budget that is a perfect "
        << (dim == 2 ? "square" : std::to_string(dim) + "-th power") << " (M = n^" << dim
        << "), got M = " << m;
    throw std::invalid_argument(msg.str());
}

PointSet uniform_grid(const Box& box, std::size_t per_axis) {
    if (per_axis == 0) throw std::invalid_argument("uniform grid needs at least one point per axis");
    const std::size_t dim = box.dimension();
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= per_axis;

    PointSet points(dim, total);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t n = 0; n < total; ++n) {
        auto p = points[n];
        for (std::size_t a = 0; a < dim; ++a) {
            if (per_axis == 1) {
                p[a] = 0.5 * (box.lower()[a] + box.upper()[a]);
            } else if (idx[a] + 1 == per_axis) {
                p[a] = box.upper()[a];
            } else {
                p[a] = box.lower()[a] +
                       box.side(a) * static_cast<double>(idx[a]) / static_cast<double>(per_axis - 1);
            }
        }
        for (std::size_t a = dim; a-- > 0;) {
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
        }
    }
    return points;
}

PointSet latin_hypercube(const Box& box, std::size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("design budget must be at least 1");
    const std::size_t dim = box.dimension();
    PointSet points(dim, m);
    std::vector<std::size_t> perm(m);
    for (std::size_t a = 0; a < dim; ++a) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        for (std::size_t i = 0; i < m; ++i) {
            const double u = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(m);
            points[i][a] = box.lower()[a] + box.side(a) * u;
        }
    }
    return points;
}

PointSet read_point_file(const std::filesystem::path& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open design-point file " + path.string());
    PointSet points;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        row.clear();
        std::string token;
        while (fields >> token) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size() || !std::isfinite(v))
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed number '" + token + "'");
            row.push_back(v);
        }
        if (row.size() != dim)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(dim) + " coordinates, found " +
                                     std::to_string(row.size()));
        points.push_back(row);
    }
    if (points.empty()) throw std::runtime_error("design-point file " + path.string() + " has no points");
    return points;
}

void write_point_file(const std::filesystem::path& path, const PointSet& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write design-point file " + path.string());
    out << "# " << points.size() << " points, dimension " << points.dimension() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto p = points[i];
        for (std::size_t a = 0; a < p.size(); ++a) out << (a ? " " : "") << p[a];
        out << '\n';
    }
}

PointSet generate_design(DesignKind kind, std::size_t m, const Box& box, std::uint64_t seed,
                         const std::filesystem::path& file) {
    switch (kind) {
        case DesignKind::uniform_grid:
            return uniform_grid(box, grid_side(m, box.dimension()));
        case DesignKind::latin_hypercube: {
            Rng rng(seed);
            return latin_hypercube(box, m, rng);
        }
        case DesignKind::from_file: {
            PointSet points = read_point_file(file, box.dimension());
            for (std::size_t i = 0; i < points.size(); ++i)
                if (!box.contains(points[i]))
                    throw std::runtime_error("design point " + std::to_string(i + 1) +
                                             " in " + file.string() + " lies outside the domain");
            return points;
        }
    }
    throw std::invalid_argument("unknown design kind");
}

}  // namespace surfrank
