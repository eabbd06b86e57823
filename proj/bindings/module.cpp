#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "algroups/algrp.hpp"
#include "algroups/cli.hpp"
#include "algroups/cyclo.hpp"
#include "algroups/error.hpp"
#include "algroups/gf.hpp"
#include "algroups/irred.hpp"
#include "algroups/k1norm.hpp"
#include "algroups/nilalg.hpp"

namespace py = pybind11;
using namespace algroups;

// Bindings grow together with the core; see BindXxx functions below.
namespace {

// The core hands out shared_ptr-to-const refs, which pybind cannot hold
// directly; scripts see thin handles instead.
struct FieldHandle {
  FieldRef k;
};

struct AlgebraHandle {
  AlgebraRef a;
};

GroupElement decode(const Algebra& A, std::uint64_t code) {
  return element_from_code(A, code);
}

py::dict check_dict(const CheckResult& r) {
  py::dict d;
  d["check"] = r.check;
  d["pass"] = r.pass;
  d["witness"] = r.witness;
  return d;
}

void BindField(py::module& m) {
  py::class_<FieldHandle>(m, "Field")
      .def_static(
          "make", [](int p, int mdeg) { return FieldHandle{Field::make(p, mdeg)}; }, py::arg("p"),
          py::arg("m") = 1)
      .def_property_readonly("p", [](const FieldHandle& h) { return h.k->p(); })
      .def_property_readonly("m", [](const FieldHandle& h) { return h.k->m(); })
      .def_property_readonly("q", [](const FieldHandle& h) { return h.k->q(); })
      .def_property_readonly("modulus", [](const FieldHandle& h) { return h.k->modulus(); })
      .def("add", [](const FieldHandle& h, Fel a, Fel b) { return h.k->add(a, b); })
      .def("sub", [](const FieldHandle& h, Fel a, Fel b) { return h.k->sub(a, b); })
      .def("neg", [](const FieldHandle& h, Fel a) { return h.k->neg(a); })
      .def("mul", [](const FieldHandle& h, Fel a, Fel b) { return h.k->mul(a, b); })
      .def("inv", [](const FieldHandle& h, Fel a) { return h.k->inv(a); })
      .def("pow", [](const FieldHandle& h, Fel a, long long e) { return h.k->pow(a, e); })
      .def("frobenius", [](const FieldHandle& h, Fel a, int i) { return h.k->frobenius(a, i); },
           py::arg("a"), py::arg("i") = 1)
      .def("coeffs", [](const FieldHandle& h, Fel a) { return h.k->coeffs(a); })
      .def("from_coeffs",
           [](const FieldHandle& h, const std::vector<int>& c) { return h.k->from_coeffs(c); })
      .def("__repr__", [](const FieldHandle& h) {
        std::ostringstream os;
        os << "Field(p=" << h.k->p() << ", m=" << h.k->m() << ")";
        return os.str();
      });
}

void BindAlgebra(py::module& m) {
  // Group elements cross the boundary as packed integer codes; the handle
  // carries the code arithmetic so scripts never touch coefficient vectors
  // unless they ask for them.
  py::class_<AlgebraHandle>(m, "Algebra")
      .def_property_readonly("dim", [](const AlgebraHandle& h) { return h.a->dim; })
      .def_property_readonly("nclass", [](const AlgebraHandle& h) { return h.a->nclass; })
      .def_property_readonly("defined_over",
                             [](const AlgebraHandle& h) { return h.a->defined_over; })
      .def_property_readonly("field", [](const AlgebraHandle& h) { return FieldHandle{h.a->field}; })
      .def("group_size", [](const AlgebraHandle& h) { return h.a->group_size(); })
      .def("fingerprint", [](const AlgebraHandle& h) { return h.a->fingerprint(); })
      .def("vec", [](const AlgebraHandle& h, std::uint64_t code) { return decode(*h.a, code).a; })
      .def("code",
           [](const AlgebraHandle& h, const Vec& v) {
             if (static_cast<int>(v.size()) != h.a->dim)
               throw AlgError(Errc::BadParameter, "coefficient vector has wrong length");
             return element_code(*h.a, GroupElement{v});
           })
      .def("mul",
           [](const AlgebraHandle& h, std::uint64_t a, std::uint64_t b) {
             return element_code(*h.a, g_mul(*h.a, decode(*h.a, a), decode(*h.a, b)));
           })
      .def("inv",
           [](const AlgebraHandle& h, std::uint64_t a) {
             return element_code(*h.a, g_inv(*h.a, decode(*h.a, a)));
           })
      .def("commutator",
           [](const AlgebraHandle& h, std::uint64_t a, std::uint64_t b) {
             return element_code(*h.a, g_commutator(*h.a, decode(*h.a, a), decode(*h.a, b)));
           })
      .def("order",
           [](const AlgebraHandle& h, std::uint64_t a) {
             return element_order(*h.a, decode(*h.a, a));
           })
      .def("__repr__", [](const AlgebraHandle& h) {
        std::ostringstream os;
        os << "Algebra(dim=" << h.a->dim << ", q=" << h.a->field->q()
           << ", nclass=" << h.a->nclass << ")";
        return os.str();
      });

  m.def(
      "upper_triangular",
      [](const FieldHandle& k, int n) { return AlgebraHandle{builtin_upper_triangular(k.k, n)}; },
      py::arg("field"), py::arg("n"));
  m.def(
      "truncated_poly",
      [](const FieldHandle& k, int n) { return AlgebraHandle{builtin_truncated_poly(k.k, n)}; },
      py::arg("field"), py::arg("n"));
  m.def("direct_sum", [](const AlgebraHandle& a, const AlgebraHandle& b) {
    return AlgebraHandle{direct_sum(a.a, b.a)};
  });
  m.def(
      "extend_scalars",
      [](const AlgebraHandle& a, int n) { return AlgebraHandle{extend_scalars(a.a, n)}; },
      py::arg("algebra"), py::arg("n"));
  m.def(
      "from_structure_constants",
      [](const FieldHandle& k, int dim, const std::vector<std::vector<Vec>>& sc, int defined_over) {
        // sc[i][j] is the coefficient vector of b_i b_j
        std::vector<Fel> flat((size_t)dim * dim * dim, 0);
        if ((int)sc.size() != dim)
          throw AlgError(Errc::BadParameter, "structure constants need dim rows");
        for (int i = 0; i < dim; ++i) {
          if ((int)sc[i].size() != dim)
            throw AlgError(Errc::BadParameter, "structure constants need dim columns per row");
          for (int j = 0; j < dim; ++j) {
            if ((int)sc[i][j].size() != dim)
              throw AlgError(Errc::BadParameter, "each product needs dim coefficients");
            for (int l = 0; l < dim; ++l) flat[((size_t)i * dim + j) * dim + l] = sc[i][j][l];
          }
        }
        return AlgebraHandle{algebra_from_constants(k.k, dim, std::move(flat), defined_over)};
      },
      py::arg("field"), py::arg("dim"), py::arg("sc"), py::arg("defined_over") = 0);
}

void BindIrreps(py::module& m) {
  py::class_<IrrepChain>(m, "Irrep")
      .def_property_readonly(
          "degree", [](const IrrepChain& c) { return c.character.degree().integer_value(); })
      .def_readonly("fdim", &IrrepChain::fdim)
      .def_readonly("sh", &IrrepChain::sh)
      .def_property_readonly("level", [](const IrrepChain& c) { return c.character.level; })
      .def_property_readonly("algebra", [](const IrrepChain& c) { return AlgebraHandle{c.alg}; })
      .def("value_at",
           [](const IrrepChain& c, std::uint64_t code) {
             return c.character.value_at(decode(*c.alg, code)).coeffs;
           })
      .def("values",
           [](const IrrepChain& c) {
             // (class representative code, class size, value as zeta-power
             // coefficients at the character's level)
             std::vector<std::tuple<std::uint64_t, std::uint64_t, std::vector<long long>>> out;
             for (size_t i = 0; i < c.character.classes.size(); ++i)
               out.emplace_back(element_code(*c.alg, c.character.classes[i].first),
                                c.character.classes[i].second, c.character.values[i].coeffs);
             return out;
           })
      .def("__repr__", [](const IrrepChain& c) {
        std::ostringstream os;
        os << "Irrep(degree=" << c.character.degree().integer_value() << ", fdim=" << c.fdim
           << ", sh=" << c.sh << ")";
        return os.str();
      });

  m.def(
      "irreducibles",
      [](const AlgebraHandle& h, std::uint64_t seed) { return enumerate_irreps(h.a, seed); },
      py::arg("algebra"), py::arg("seed") = 0);
  m.def(
      "base_change", [](const IrrepChain& c, int n) { return base_change(c, n); }, py::arg("irrep"),
      py::arg("n"));
  m.def("equivalent", [](const IrrepChain& a, const IrrepChain& b) {
    return iso_test(a.character, b.character);
  });
  m.def("monomial_space", [](const IrrepChain& c) {
    MonomialData md = monomialize(c);
    std::vector<Vec> rows;
    for (int r = 0; r < md.space.rank(); ++r) rows.push_back(md.space.row(r));
    return rows;
  });
}

void BindNorms(py::module& m) {
  m.def("abelian_order", [](const AlgebraHandle& h) {
    return abelianize(h.a, Subspace::full(h.a->dim))->size();
  });
  m.def(
      "norm_image_order",
      [](const AlgebraHandle& h, int n) { return norm_image(h.a, n).size(); }, py::arg("algebra"),
      py::arg("n"));
  m.def(
      "norm_checks",
      [](const AlgebraHandle& h, const std::vector<int>& tower) {
        std::vector<py::dict> out;
        for (const CheckResult& r : verify_norm_properties(h.a, tower)) out.push_back(check_dict(r));
        return out;
      },
      py::arg("algebra"), py::arg("tower"));
  m.def(
      "experiments",
      [](const AlgebraHandle& h, const std::vector<int>& exts,
         const std::vector<std::string>& checks) {
        std::vector<py::dict> out;
        for (const CheckResult& r : experiments(h.a, exts, checks)) out.push_back(check_dict(r));
        return out;
      },
      py::arg("algebra"), py::arg("exts"), py::arg("checks") = std::vector<std::string>{});
}

void BindCatalog(py::module& m) {
  py::class_<CatalogEntry>(m, "CatalogEntry")
      .def_readonly("name", &CatalogEntry::name)
      .def_property_readonly("algebra",
                             [](const CatalogEntry& e) { return AlgebraHandle{e.algebra}; })
      .def_readonly("tags", &CatalogEntry::tags)
      .def("__repr__", [](const CatalogEntry& e) { return "CatalogEntry(" + e.name + ")"; });

  m.def("builtin_catalog", &builtin_catalog);
  m.def("entry_to_json", &entry_to_json);
  m.def("entry_from_json", &entry_from_json);

  m.def("run_cli", [](const std::vector<std::string>& argv) {
    std::ostringstream out, err;
    int code = run_command(argv, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}

void BindVersion(py::module& m) {
#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}

}  // namespace

PYBIND11_MODULE(_algroups, m) {
  m.doc() = "exact-arithmetic representation theory of finite algebra groups";
  py::register_exception<AlgError>(m, "AlgebraError");
  BindField(m);
  BindAlgebra(m);
  BindIrreps(m);
  BindNorms(m);
  BindCatalog(m);
  BindVersion(m);
}
