#include "degenlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "degenlab/errors.hpp"

namespace degen {

Grid::Grid(const Domain& dom, double h, double margin_cells) : dom_(dom), n_(dom.n()), h_(h) {
    if (!(h > 0) || !std::isfinite(h)) throw InvalidInput("grid spacing must be positive");
    if (n_ < 1 || n_ > 3) throw InvalidInput("grid supports N = 1, 2, 3");
    const Vec blo = dom.bbox_lo(), bhi = dom.bbox_hi();
    lo_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        lo_[i] = blo[i] - 2.0 * h;
        dims_[i] = static_cast<int>(std::ceil((bhi[i] - blo[i]) / h - 1e-9)) + 5;
    }
    strides_[2] = 1;
    strides_[1] = static_cast<std::size_t>(dims_[2]);
    strides_[0] = strides_[1] * static_cast<std::size_t>(dims_[1]);
    const std::size_t total = strides_[0] * static_cast<std::size_t>(dims_[0]);
    if (total > 50'000'000) throw InvalidInput("grid too large");

    for (int i = 0; i < n_; ++i) {
        std::array<int, 3> e{0, 0, 0};
        e[i] = 1;
        stencil_.push_back(e);
    }
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            std::array<int, 3> p{0, 0, 0}, m{0, 0, 0};
            p[i] = 1;
            p[j] = 1;
            m[i] = 1;
            m[j] = -1;
            stencil_.push_back(p);
            stencil_.push_back(m);
        }

    mark_.assign(total, outside);
    const double margin = margin_cells * h;
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::array<int, 3> m = multi(idx);
        bool edge = false;
        for (int i = 0; i < n_; ++i) edge = edge || m[i] == 0 || m[i] == dims_[i] - 1;
        if (!edge && distance(dom_, coords(idx)) > margin) mark_[idx] = interior;
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (mark_[idx] != interior) continue;
        interior_.push_back(idx);
        for (const auto& e : stencil_)
            for (int s : {1, -1}) {
                const std::size_t j = shift(idx, {s * e[0], s * e[1], s * e[2]});
                if (mark_[j] == outside) mark_[j] = band;
            }
    }
    for (std::size_t idx = 0; idx < total; ++idx)
        if (mark_[idx] == band) band_.push_back(idx);
    if (interior_.empty()) throw DomainError("grid has no interior points");
}

Vec Grid::coords(std::size_t idx) const {
    const std::array<int, 3> m = multi(idx);
    Vec x(n_);
    for (int i = 0; i < n_; ++i) x[i] = lo_[i] + m[i] * h_;
    return x;
}

std::array<int, 3> Grid::multi(std::size_t idx) const {
    std::array<int, 3> m{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        m[i] = static_cast<int>(idx / strides_[i]);
        idx %= strides_[i];
    }
    return m;
}

std::size_t Grid::flat(const std::array<int, 3>& m) const {
    return m[0] * strides_[0] + m[1] * strides_[1] + m[2] * strides_[2];
}

std::size_t Grid::shift(std::size_t idx, const std::array<int, 3>& off) const {
    const auto d = static_cast<std::ptrdiff_t>(off[0] * static_cast<std::ptrdiff_t>(strides_[0]) +
                                               off[1] * static_cast<std::ptrdiff_t>(strides_[1]) + off[2]);
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + d);
}

GridField::GridField(std::shared_ptr<const Grid> grid, double fill) : grid_(std::move(grid)) {
    if (!grid_) throw InvalidInput("GridField needs a grid");
    v_.assign(grid_->size(), fill);
}

double GridField::sup_abs() const {
    double m = 0.0;
    for (std::size_t i : grid_->interior_points()) m = std::max(m, std::abs(v_[i]));
    return m;
}

double GridField::min_interior() const {
    double m = 1e300;
    for (std::size_t i : grid_->interior_points()) m = std::min(m, v_[i]);
    return m;
}

double GridField::max_interior() const {
    double m = -1e300;
    for (std::size_t i : grid_->interior_points()) m = std::max(m, v_[i]);
    return m;
}

void write_csv(const GridField& u, std::ostream& os) {
    const Grid& g = u.grid();
    for (int i = 0; i < g.n(); ++i) os << 'x' << i << ',';
    os << "value\n";
    char buf[32];
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.mark(idx) == Grid::outside) continue;
        const Vec x = g.coords(idx);
        for (double c : x) {
            std::snprintf(buf, sizeof buf, "%.17g,", c);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g\n", u[idx]);
        os << buf;
    }
}

void write_binary(const GridField& u, std::ostream& os) {
    const Grid& g = u.grid();
    const double header[8] = {kFieldMagic, static_cast<double>(g.n()), static_cast<double>(g.dims()[0]),
                              static_cast<double>(g.dims()[1]), static_cast<double>(g.dims()[2]), g.h(), 1.0,
                              static_cast<double>(g.size())};
    os.write(reinterpret_cast<const char*>(header), sizeof header);
    os.write(reinterpret_cast<const char*>(u.values().data()), static_cast<std::streamsize>(g.size() * sizeof(double)));
}

RawField read_binary(std::istream& is) {
    double header[8];
    if (!is.read(reinterpret_cast<char*>(header), sizeof header) || header[0] != kFieldMagic)
        throw InvalidInput("not a field file");
    RawField f;
    f.n = static_cast<int>(header[1]);
    for (int i = 0; i < 3; ++i) f.dims[i] = static_cast<int>(header[2 + i]);
    f.h = header[5];
    const auto count = static_cast<std::size_t>(header[7]);
    if (count != static_cast<std::size_t>(f.dims[0]) * f.dims[1] * f.dims[2]) throw InvalidInput("field size mismatch");
    f.values.resize(count);
    if (!is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(count * sizeof(double))))
        throw InvalidInput("truncated field file");
    return f;
}

}  // namespace degen
