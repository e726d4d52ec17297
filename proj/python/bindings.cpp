// Python extension: thin wrappers that exchange JSON text with the core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fairdiv/io.hpp"
#include "fairdiv/mms.hpp"
#include "fairdiv/solvers.hpp"
#include "fairdiv/verify.hpp"
#include "fairdiv/workbench.hpp"

namespace py = pybind11;
using namespace fairdiv;
namespace wb = fairdiv::workbench;

namespace {

Instance parse_instance(const std::string& text) { return io::instance_from_json(io::Json::parse(text)); }

PartialAllocation parse_allocation(const Instance& inst, const std::string& text) {
  io::Json j = io::Json::parse(text);
  PartialAllocation x = io::allocation_from_json(j.contains("allocation") ? j.at("allocation") : j);
  if (auto bad = validate_allocation(inst, x)) throw ValidationError("allocation invalid: " + *bad);
  return x;
}

std::string mms_json(const std::string& instance, int parts, const std::string& method, const std::string& epsilon,
                     int exact_cap) {
  Instance inst = parse_instance(instance);
  if (parts <= 0) parts = inst.agents();
  io::Json out = io::Json::array();
  for (AgentId i = 0; i < inst.agents(); ++i) {
    MmsRecord r;
    if (method == "exact") {
      r = mms_exact(inst, i, parts, exact_cap);
    } else if (method == "bruteforce") {
      r = mms_bruteforce(inst, i, parts);
    } else if (method == "approx") {
      r = mms_approx(inst, i, parts, Ratio::parse(epsilon), exact_cap);
    } else {
      throw ValidationError("unknown method '" + method + "'");
    }
    out.push_back(io::record_to_json(r));
  }
  return out.dump();
}

std::string solve_json(const std::string& instance, const std::string& goal, const std::string& epsilon,
                       const std::string& delta, int exact_cap, bool trace) {
  Instance inst = parse_instance(instance);
  SolverConfig cfg;
  cfg.epsilon = Ratio::parse(epsilon);
  cfg.delta = Ratio::parse(delta);
  cfg.exact_cap = exact_cap;
  cfg.trace = trace;
  SolveReport rep = wb::run_goal(wb::parse_goal(goal), inst, cfg);
  io::Json j{{"goal", goal}, {"epsilon", cfg.epsilon.str()}, {"delta", cfg.delta.str()}};
  j.update(io::report_to_json(rep));
  if (trace) {
    j["trace"] = io::trace_to_json(rep.trace);
    auto audit = audit_potential(rep.trace);
    j["audit_ok"] = !audit.has_value();
  }
  return j.dump();
}

std::string verify_json(const std::string& instance, const std::string& allocation, const std::string& alpha,
                        std::optional<std::vector<Value>> mms) {
  Instance inst = parse_instance(instance);
  PartialAllocation x = parse_allocation(inst, allocation);
  Ratio a = Ratio::parse(alpha);
  FairnessReport rep = mms ? fairness_report(inst, x, a, std::span<const Value>(*mms)) : fairness_report(inst, x, a);
  return io::fairness_to_json(rep).dump();
}

std::string fixture_json(const std::string& name, int n) {
  std::pair<Instance, PartialAllocation> f;
  if (name == "prop1") {
    f = fixture_prop1(n);
  } else if (name == "prop2") {
    f = fixture_prop2(n);
  } else {
    throw ValidationError("unknown fixture '" + name + "'");
  }
  io::Json j{{"instance", io::instance_to_json(f.first)}, {"allocation", io::allocation_to_json(f.second)}};
  return j.dump();
}

std::string generate_json(int n, int m, const std::string& dist, Value lo, Value hi, Value a, Value b,
                          const std::string& p, std::uint64_t seed) {
  wb::GenSpec spec;
  spec.n = n;
  spec.m = m;
  spec.distribution = wb::parse_distribution(dist);
  spec.lo = lo;
  spec.hi = hi;
  spec.a = a;
  spec.b = b;
  spec.p = Ratio::parse(p);
  spec.seed = seed;
  return io::instance_to_json(wb::generate(spec)).dump();
}

}  // namespace

PYBIND11_MODULE(_fairdiv, m) {
  m.doc() = "Exact-arithmetic fair division core";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<InvariantError> invariant_error(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      validation_error(e.what());
    } catch (const InvariantError& e) {
      invariant_error(e.what());
    } catch (const nlohmann::json::exception& e) {
      validation_error(e.what());
    }
  });

  m.attr("DEFAULT_EXACT_CAP") = kDefaultExactCap;
  m.def("mms_json", &mms_json, py::arg("instance"), py::arg("parts") = 0, py::arg("method") = "exact",
        py::arg("epsilon") = "0", py::arg("exact_cap") = kDefaultExactCap);
  m.def("solve_json", &solve_json, py::arg("instance"), py::arg("goal") = "ef1-mms", py::arg("epsilon") = "0",
        py::arg("delta") = "0", py::arg("exact_cap") = kDefaultExactCap, py::arg("trace") = false);
  m.def("verify_json", &verify_json, py::arg("instance"), py::arg("allocation"), py::arg("alpha") = "1",
        py::arg("mms") = py::none());
  m.def("fixture_json", &fixture_json, py::arg("name"), py::arg("n"));
  m.def("generate_json", &generate_json, py::arg("n"), py::arg("m"), py::arg("distribution") = "uniform",
        py::arg("lo") = 1, py::arg("hi") = 50, py::arg("a") = 1, py::arg("b") = 2, py::arg("p") = "1/2",
        py::arg("seed") = 0);
}
