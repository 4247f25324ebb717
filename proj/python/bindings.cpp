#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "degenlab/config.hpp"
#include "degenlab/errors.hpp"
#include "degenlab/matkernel.hpp"
#include "degenlab/operators.hpp"
#include "degenlab/proofkit.hpp"
#include "degenlab/solver.hpp"

namespace py = pybind11;
using namespace degen;

namespace {

SymMat to_sym(const std::vector<Vec>& rows) {
    const int n = static_cast<int>(rows.size());
    if (n < 1 || n > SymMat::kMax) throw InvalidInput("matrix size must be 1..6");
    SymMat s(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw InvalidInput("matrix must be square");
        for (int j = 0; j < n; ++j)
            if (rows[i][j] != rows[j][i]) throw InvalidInput("matrix must be symmetric");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s.set(i, j, rows[i][j]);
    return s;
}

std::vector<Vec> from_sym(const SymMat& s) {
    std::vector<Vec> out(s.n(), Vec(s.n()));
    for (int i = 0; i < s.n(); ++i)
        for (int j = 0; j < s.n(); ++j) out[i][j] = s(i, j);
    return out;
}

py::dict field_dict(const GridField& u) {
    const Grid& g = u.grid();
    std::vector<std::size_t> idx = g.interior_points();
    idx.insert(idx.end(), g.band_points().begin(), g.band_points().end());
    py::array_t<double> coords({static_cast<py::ssize_t>(idx.size()), static_cast<py::ssize_t>(g.n())});
    py::array_t<double> values(static_cast<py::ssize_t>(idx.size()));
    auto c = coords.mutable_unchecked<2>();
    auto v = values.mutable_unchecked<1>();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const Vec x = g.coords(idx[k]);
        for (int i = 0; i < g.n(); ++i) c(k, i) = x[i];
        v(k) = u[idx[k]];
    }
    py::dict d;
    d["coords"] = coords;
    d["values"] = values;
    d["interior"] = g.interior_points().size();
    d["h"] = g.h();
    return d;
}

py::dict audit_dict(const AuditReport& r) {
    py::dict d;
    d["worst"] = r.worst;
    d["samples"] = r.samples;
    d["skipped"] = r.skipped;
    for (const auto& [k, v] : r.extra) d[py::str(k)] = v;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "degenlab core";

    // Translators run newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", PyExc_RuntimeError);

    m.def("eigvals", [](const std::vector<Vec>& a) { return eigvals(to_sym(a)); }, py::arg("a"));
    m.def(
        "split_parts",
        [](const std::vector<Vec>& a) {
            const Parts p = split_parts(to_sym(a));
            return py::make_tuple(from_sym(p.plus), from_sym(p.minus));
        },
        py::arg("a"));
    m.def("op_norm", [](const std::vector<Vec>& a) { return op_norm(to_sym(a)); }, py::arg("a"));

    py::class_<OperatorSpec>(m, "OperatorSpec")
        .def(py::init([](const std::string& family, double alpha, double lambda, double Lambda, const std::string& coeff,
                         const Vec& delta) {
                 OperatorSpec s;
                 s.family = parse_family(family);
                 s.alpha = alpha;
                 s.lambda = lambda;
                 s.Lambda = Lambda;
                 s.coeff = coeff;
                 s.delta = delta;
                 validate(s);
                 return s;
             }),
             py::arg("family") = "pucci+", py::arg("alpha") = 1.0, py::arg("lambda_") = 1.0, py::arg("Lambda") = 1.0,
             py::arg("coeff") = "constant", py::arg("delta") = Vec{})
        .def_property_readonly("family", [](const OperatorSpec& s) { return family_name(s.family); })
        .def_readonly("alpha", &OperatorSpec::alpha)
        .def_readonly("lambda_", &OperatorSpec::lambda)
        .def_readonly("Lambda", &OperatorSpec::Lambda)
        .def_readonly("coeff", &OperatorSpec::coeff)
        .def_readonly("delta", &OperatorSpec::delta)
        .def("ellipticity", [](const OperatorSpec& s, int n) { return ellipticity(s, n); }, py::arg("n") = 2)
        .def("__repr__", [](const OperatorSpec& s) { return to_text(s); });

    m.def(
        "evaluate",
        [](const OperatorSpec& s, const Vec& x, const Vec& q, const std::vector<Vec>& X) {
            return eval(s, x, q, to_sym(X));
        },
        py::arg("spec"), py::arg("x"), py::arg("q"), py::arg("X"));
    m.def("theta_alpha", &theta_alpha, py::arg("q"), py::arg("alpha"));

    auto audit = [&m](const char* name, AuditReport (*fn)(const OperatorSpec&, const AuditOptions&)) {
        m.def(
            name,
            [fn](const OperatorSpec& s, int n, std::size_t samples, std::uint64_t seed) {
                return audit_dict(fn(s, {n, samples, seed}));
            },
            py::arg("spec"), py::arg("n") = 2, py::arg("samples") = 10000, py::arg("seed") = 0);
    };
    audit("audit_h1", &audit_H1);
    audit("audit_h2", &audit_H2);
    audit("audit_h4", &audit_H4);
    audit("audit_homogeneity", &audit_homogeneity);
    m.def(
        "audit_h3",
        [](const OperatorSpec& s, const Vec& m_list, int n, std::size_t samples, std::uint64_t seed) {
            return audit_dict(audit_H3(s, m_list, {n, samples, seed}));
        },
        py::arg("spec"), py::arg("m_list") = Vec{0.5, 2.0, 10.0}, py::arg("n") = 2, py::arg("samples") = 10000,
        py::arg("seed") = 0);

    m.def(
        "prop4_verify",
        [](const Vec& x, double alpha, double gamma, double eps) {
            const Prop4Result r = prop4_verify(RadialTestFn::holder(gamma), x, alpha, eps);
            py::dict d;
            d["mu1"] = r.mu1;
            d["bound"] = r.bound;
            d["ok"] = r.ok;
            d["bound_alt"] = r.bound_alt;
            d["ok_alt"] = r.ok_alt;
            return d;
        },
        py::arg("x"), py::arg("alpha"), py::arg("gamma") = 0.5, py::arg("eps") = 0.0);

    m.def(
        "certificate",
        [](double alpha, double lambda, double Lambda, int n, double c_gammaF, double c_F, double c_h, double r,
           double sup_u, double sup_v, bool lipschitz) {
            CertificateInput in;
            in.pc = {alpha, lambda, Lambda, n, 1.0, c_gammaF, c_F, c_h};
            in.r = r;
            in.sup_u = sup_u;
            in.sup_v = sup_v;
            in.lipschitz = lipschitz;
            const Certificate c = certificate(in);
            const CertificateCheck chk = verify_certificate(c, in);
            py::dict d;
            d["regime"] = regime_name(c.rc.regime);
            d["tau_hat"] = c.rc.tau_hat;
            d["c"] = c.rc.c;
            d["delta"] = c.delta;
            d["delta_binding"] = c.delta_binding;
            d["M"] = c.M;
            d["M_binding"] = c.M_binding;
            d["ok"] = chk.ok;
            d["smallness_ratio"] = chk.smallness_ratio;
            d["failures"] = chk.failures;
            return d;
        },
        py::arg("alpha"), py::arg("lambda_"), py::arg("Lambda"), py::arg("n") = 2, py::arg("c_gammaF") = 0.0,
        py::arg("c_F") = 1.0, py::arg("c_h") = 0.0, py::arg("r") = 0.5, py::arg("sup_u") = 1.0,
        py::arg("sup_v") = 1.0, py::arg("lipschitz") = true);

    m.def(
        "solve",
        [](const std::string& config_text) {
            const Problem p = problem_from_config(Config::parse_string(config_text));
            std::optional<SolveResult> res;
            {
                py::gil_scoped_release release;
                res.emplace(solve(p));
            }
            const SolveResult& s = *res;
            py::dict d = field_dict(s.u);
            d["iterations"] = s.iterations;
            d["residual"] = s.residual;
            d["tol"] = s.tol;
            d["history"] = s.history;
            return d;
        },
        py::arg("config_text"), "Solve the problem described by config text ([operator], [domain], ... sections).");
}
