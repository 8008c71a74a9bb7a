#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "natmod/freemodel.hpp"
#include "natmod/io.hpp"
#include "natmod/models.hpp"
#include "natmod/polyset.hpp"

#include <sstream>

namespace py = pybind11;
using namespace natmod;

namespace {

using Model = std::shared_ptr<NaturalModel>;

Model wrap(ModelPtr m) { return std::const_pointer_cast<NaturalModel>(std::move(m)); }

UnitStructure unit_of(const NaturalModel& m) {
    if (auto* f = dynamic_cast<const FormalExtension*>(&m); f && f->kind() == FormalExtension::Kind::Unit)
        return f->unit();
    if (auto* p = dynamic_cast<const FamProp*>(&m)) return p->unit();
    if (auto* t = dynamic_cast<const TableModel*>(&m); t && t->unit) return *t->unit;
    throw py::value_error(m.name() + " has no unit structure");
}

SigmaStructure sigma_of(const NaturalModel& m) {
    if (auto* e = dynamic_cast<const ExtendedBySigma*>(&m)) return e->sigma();
    if (auto* p = dynamic_cast<const FamProp*>(&m)) return p->sigma();
    if (auto* t = dynamic_cast<const TableModel*>(&m); t && t->has_sigma()) return t->sigma();
    throw py::value_error(m.name() + " has no sigma structure");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite natural models, free constructions and polynomials in finite sets";

    py::register_exception<MalformedInput>(m, "MalformedInput", PyExc_ValueError);
    py::register_exception<Undefined>(m, "Undefined", PyExc_LookupError);

    py::class_<Report>(m, "Report")
        .def_readonly("name", &Report::name)
        .def_readonly("bound", &Report::bound)
        .def_readonly("total", &Report::total)
        .def_property_readonly("ok", &Report::ok)
        .def_property_readonly("violations",
                               [](const Report& r) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& v : r.violations) out.emplace_back(v.law, v.detail);
                                   return out;
                               })
        .def("cites", &Report::cites)
        .def("text", &Report::text)
        .def("__bool__", &Report::ok);

    py::class_<NaturalModel, Model>(m, "Model")
        .def_property_readonly("name", &NaturalModel::name)
        .def_property_readonly("empty", &NaturalModel::empty)
        .def("objects", &NaturalModel::objects, py::arg("bound"))
        .def("hom", &NaturalModel::hom)
        .def("compose", &NaturalModel::compose)
        .def("ty", &NaturalModel::ty)
        .def("tm", &NaturalModel::tm)
        .def("type_of", &NaturalModel::type_of)
        .def("subst_ty", &NaturalModel::subst_ty)
        .def("subst_tm", &NaturalModel::subst_tm)
        .def("ext", [](const NaturalModel& self, const Key& ctx, const Key& A) {
            auto e = self.ext(ctx, A);
            return py::make_tuple(e.extended, e.proj, e.var);
        });

    m.def("term_model", [](int n, int bound) { return wrap(term_model(n, bound)); }, py::arg("basic_types"),
          py::arg("bound") = 3);
    m.def("fam_prop", [](int bound) { return wrap(fam_prop(bound)); }, py::arg("bound") = 3);
    m.def("extend_by_term", [](const Model& b, const Key& O) { return wrap(extend_by_term(b, O)); });
    m.def("extend_by_type", [](const Model& b) { return wrap(extend_by_type(b)); });
    m.def("extend_by_unit", [](const Model& b) { return wrap(extend_by_unit(b)); });
    m.def("extend_by_sigma", [](const Model& b, int leaves) { return wrap(extend_by_sigma(b, leaves)); },
          py::arg("base"), py::arg("leaves") = 2);

    m.def("check_eat", [](const Model& x, int bound) { return check_eat(*x, bound); }, py::arg("model"),
          py::arg("bound") = 3);
    m.def("check_representability", [](const Model& x, int bound) { return model_representability(x, bound).report; },
          py::arg("model"), py::arg("bound") = 3);
    m.def("check_unit", [](const Model& x, int bound) { return check_unit(x, unit_of(*x), bound); }, py::arg("model"),
          py::arg("bound") = 3);
    m.def("check_sigma", [](const Model& x, int bound) { return check_sigma(x, sigma_of(*x), bound); },
          py::arg("model"), py::arg("bound") = 3);

    m.def("parse_model", [](const std::string& text) { return wrap(parse_model_text(text)); });
    m.def("model_to_json", [](const Model& x, int bound) { return canonical(model_to_json(*x, bound)); },
          py::arg("model"), py::arg("bound") = 3);

    py::class_<poly::Polynomial>(m, "Polynomial")
        .def(py::init([](int I, int B, int A, int J, poly::Map s, poly::Map f, poly::Map t) {
                 poly::Polynomial p{I, B, A, J, std::move(s), std::move(f), std::move(t)};
                 p.validate();
                 return p;
             }),
             py::arg("I"), py::arg("B"), py::arg("A"), py::arg("J"), py::arg("s"), py::arg("f"), py::arg("t"))
        .def_readonly("I", &poly::Polynomial::I)
        .def_readonly("B", &poly::Polynomial::B)
        .def_readonly("A", &poly::Polynomial::A)
        .def_readonly("J", &poly::Polynomial::J)
        .def_readonly("s", &poly::Polynomial::s)
        .def_readonly("f", &poly::Polynomial::f)
        .def_readonly("t", &poly::Polynomial::t)
        .def("__eq__", [](const poly::Polynomial& a, const poly::Polynomial& b) { return a == b; })
        .def("__repr__", &poly::Polynomial::key);

    m.def("extend", [](const poly::Polynomial& F, const poly::Family& X) { return poly::extend(F, X).family(); });
    m.def("compose", [](const poly::Polynomial& G, const poly::Polynomial& F) { return poly::compose(G, F).poly; });
    m.def("check_composition",
          [](const poly::Polynomial& G, const poly::Polynomial& F, const poly::Family& X, const poly::Family& Y,
             const poly::FamilyMap& h) { return poly::check_composition(G, F, X, Y, h); });

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command line tool in-process and returns (exit code, stdout, stderr).");
}
