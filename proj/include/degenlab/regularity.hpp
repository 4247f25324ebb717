#pragma once

#include <cstdint>
#include <vector>

#include "degenlab/grid.hpp"
#include "degenlab/proofkit.hpp"
#include "degenlab/solver.hpp"

namespace degen {

struct SeminormReport {
    double gamma = 1.0;
    double margin = 0.0;
    double value = 0.0;
    Vec x, y;                // argmax pair
    std::size_t pairs = 0;
    bool exact = true;       // all pairs enumerated
};

inline constexpr std::size_t kExactPairLimit = 4000;    // points
inline constexpr std::size_t kSampledPairs = 1000000;

// max |u(x) - u(y)| / |x - y|^gamma over interior points with d >= margin.
SeminormReport seminorm(const GridField& u, double gamma, double margin, std::uint64_t seed = 0);

// Same quotient restricted to an explicit list of index pairs.
double seminorm_on_pairs(const GridField& u, double gamma,
                         const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

struct RefinementRow {
    int level = 0;
    double hgrid = 0.0;
    SeminormReport report;
    double residual = 0.0;
    std::size_t iterations = 0;
    double sup_norm = 0.0;
};

struct RefinementTable {
    std::vector<RefinementRow> rows;
    double rel_change = 0.0;  // |s_L - s_{L-1}| / s_L
    bool bounded = false;     // rel_change < 0.2
    std::vector<GridField> fields;
};

// levels: at least three spacings, each half the previous one.
RefinementTable refinement_scan(const Problem& p, const Vec& levels, double gamma, double margin,
                                const SolveOptions& opt = {}, std::uint64_t seed = 0, bool keep_fields = false);

// max over grid pairs of u(x) - v(y) - sup(u - v) - M omega(|x - y|) - M |x - x0|^2 - M |y - x0|^2.
// omega is held at omega(s_max) beyond the validity interval of the lip family.
double doubling_gap(const GridField& u, const GridField& v, double M, const RadialTestFn& tf, const Vec& x0);

}  // namespace degen
