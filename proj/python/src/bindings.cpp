#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "livekv/merkle.hpp"
#include "livekv/ring.hpp"
#include "livekv/scenario.hpp"
#include "livekv/store.hpp"

namespace py = pybind11;
using namespace livekv;

namespace {

FieldValue to_value(const py::handle& v) {
  if (v.is_none()) return FieldValue(nullptr);
  if (py::isinstance<py::bool_>(v)) return FieldValue(v.cast<bool>());
  if (py::isinstance<py::int_>(v) || py::isinstance<py::float_>(v)) {
    return FieldValue(v.cast<double>());
  }
  if (py::isinstance<py::str>(v)) return FieldValue(v.cast<std::string>());
  throw py::type_error("field values must be None, bool, int, float or str");
}

Object to_object(const py::dict& d) {
  Object out;
  for (auto [k, v] : d) {
    const auto name = k.cast<std::string>();
    validate_field_name(name);
    out.insert_or_assign(name, to_value(v));
  }
  return out;
}

py::object from_value(const FieldValue& v) {
  if (v.is_null()) return py::none();
  if (v.is_bool()) return py::bool_(v.as_bool());
  if (v.is_text()) return py::str(v.as_text());
  const double d = v.as_number();
  if (std::abs(d) <= 9007199254740992.0 && d == std::trunc(d)) {
    return py::int_(static_cast<long long>(d));
  }
  return py::float_(d);
}

py::dict from_object(const Object& o) {
  py::dict out;
  for (const auto& [k, v] : o) out[py::str(k)] = from_value(v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the livekv core library.";

  m.def("ring_position", [](const std::string& label) {
    return position_of(label).to_hex();
  }, py::arg("label"), "Ring position of a label as 32 hex digits.");

  m.def("preference_list",
        [](const std::set<std::string>& members, const std::string& key,
           int n, int vnodes) {
          return preference_list(build_ring(members, vnodes), key,
                                 static_cast<std::size_t>(n));
        },
        py::arg("members"), py::arg("key"), py::arg("n"),
        py::arg("vnodes") = 100);

  m.def("field_root", [](const py::dict& obj) {
    return to_hex(build_field_tree(to_object(obj)).root());
  }, py::arg("obj"));

  m.def("diff_fields",
        [](const py::dict& old_obj, const py::dict& new_obj) {
          DiffStats stats;
          auto changed = diff_fields(build_field_tree(to_object(old_obj)),
                                     build_field_tree(to_object(new_obj)),
                                     &stats);
          return py::make_tuple(changed, stats.digest_comparisons);
        },
        py::arg("old"), py::arg("new"),
        "Changed field names and the number of digest comparisons made.");

  m.def("merge_sparse",
        [](const std::optional<py::dict>& base, const py::dict& sparse) {
          std::optional<Object> b;
          if (base) b = to_object(*base);
          auto r = merge_sparse(b, to_object(sparse));
          return py::make_tuple(from_object(r.merged), r.changed);
        },
        py::arg("base"), py::arg("sparse"));

  m.def("run_scenario",
        [](const std::string& text, int nodes, int replication, int vnodes,
           const std::string& strategy, std::uint64_t seed, long min_latency,
           long max_latency, double drop_rate, bool trace) {
          RunConfig c;
          c.nodes = nodes;
          c.replication = replication;
          c.vnodes_per_node = vnodes;
          c.strategy = parse_strategy(strategy);
          c.seed = seed;
          c.min_latency = min_latency;
          c.max_latency = max_latency;
          c.drop_rate = drop_rate;
          c.trace = trace;
          c.validate();
          ScenarioResult r;
          {
            py::gil_scoped_release release;
            r = run_scenario(c, text);
          }
          return py::make_tuple(r.exit_code, r.jsonl);
        },
        py::arg("text"), py::arg("nodes") = 1, py::arg("replication") = 3,
        py::arg("vnodes") = 100, py::arg("strategy") = "versiondiff",
        py::arg("seed") = 0, py::arg("min_latency") = 1,
        py::arg("max_latency") = 3, py::arg("drop_rate") = 0.0,
        py::arg("trace") = false,
        "Runs a scenario script; returns (exit_code, jsonl).");
}
