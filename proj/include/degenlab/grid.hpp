#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "degenlab/barriers.hpp"
#include "degenlab/linalg.hpp"

namespace degen {

// Uniform lattice over the domain's bounding box, padded by two cells.
// Points with d > margin are interior; lattice neighbours of interior points
// (axis and face-diagonal offsets) that are not interior form the boundary band.
class Grid {
public:
    enum Mark : unsigned char { outside = 0, interior = 1, band = 2 };

    Grid(const Domain& dom, double h, double margin_cells = 0.5);

    const Domain& domain() const { return dom_; }
    int n() const { return n_; }
    double h() const { return h_; }
    const std::array<int, 3>& dims() const { return dims_; }
    std::size_t size() const { return mark_.size(); }
    const Vec& origin() const { return lo_; }

    Vec coords(std::size_t idx) const;
    std::array<int, 3> multi(std::size_t idx) const;
    std::size_t flat(const std::array<int, 3>& m) const;
    // idx + offset; the mask invariant guarantees this stays on the lattice for interior idx.
    std::size_t shift(std::size_t idx, const std::array<int, 3>& off) const;

    Mark mark(std::size_t idx) const { return static_cast<Mark>(mark_[idx]); }
    const std::vector<std::size_t>& interior_points() const { return interior_; }
    const std::vector<std::size_t>& band_points() const { return band_; }

    // Axis offsets e_i followed by e_i +- e_j (i < j).
    const std::vector<std::array<int, 3>>& stencil() const { return stencil_; }

private:
    Domain dom_;
    int n_;
    double h_;
    Vec lo_;
    std::array<int, 3> dims_{1, 1, 1};
    std::array<std::size_t, 3> strides_{0, 0, 0};
    std::vector<unsigned char> mark_;
    std::vector<std::size_t> interior_, band_;
    std::vector<std::array<int, 3>> stencil_;
};

class GridField {
public:
    explicit GridField(std::shared_ptr<const Grid> grid, double fill = 0.0);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    // Max over interior points.
    double sup_abs() const;
    double min_interior() const;
    double max_interior() const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> v_;
};

// CSV rows "x0,...,x{N-1},value" over interior and band points.
void write_csv(const GridField& u, std::ostream& os);
// Raw row-major doubles after an 8-double header:
// magic, N, dims[0..2], spacing, format version, value count.
void write_binary(const GridField& u, std::ostream& os);

struct RawField {
    int n = 0;
    std::array<int, 3> dims{1, 1, 1};
    double h = 0.0;
    std::vector<double> values;
};
RawField read_binary(std::istream& is);

inline constexpr double kFieldMagic = 0x44474c46;  // "DGLF"

}  // namespace degen
