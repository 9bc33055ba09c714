#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cutfsi/config.hpp"
#include "cutfsi/cut.hpp"
#include "cutfsi/output.hpp"
#include "cutfsi/timeloop.hpp"
#include "cutfsi/verify.hpp"

namespace py = pybind11;
using namespace cutfsi;

namespace {

SimConfig config_from(const py::dict& overrides, const std::string& text) {
  SimConfig c = parse_config_text(text);
  for (auto item : overrides) {
    const auto key = py::str(item.first).cast<std::string>();
    const auto value = py::str(item.second).cast<std::string>();
    if (!set_config_value(c, key, value)) throw py::key_error("unknown configuration key '" + key + "'");
  }
  validate_config(c);
  return c;
}

py::dict record_dict(const SimRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["dt"] = r.dt;
  d["hx"] = r.hx;
  d["hy"] = r.hy;
  d["vx"] = r.vx;
  d["vy"] = r.vy;
  d["theta"] = r.theta;
  d["omega"] = r.omega;
  d["Fx"] = r.Fx;
  d["Fy"] = r.Fy;
  d["T"] = r.T;
  d["newton_iters"] = r.newton_iters;
  d["n_cut"] = r.n_cut;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cutfsi, m) {
  m.doc() = "Cut finite element fictitious-domain solver for a rigid disk in a viscous fluid";
  m.attr("CSV_HEADER") = kCsvHeader;

  py::class_<SimConfig>(m, "Config")
      .def(py::init([](const py::dict& overrides, const std::string& text) { return config_from(overrides, text); }),
           py::arg("overrides") = py::dict(), py::arg("text") = "")
      .def_static("from_file", [](const std::string& path) { return parse_config_file(path); })
      .def("set", [](SimConfig& c, const std::string& key, const py::object& value) {
        if (!set_config_value(c, key, py::str(value).cast<std::string>()))
          throw py::key_error("unknown configuration key '" + key + "'");
        validate_config(c);
      })
      .def_readonly("nx", &SimConfig::nx)
      .def_readonly("ny", &SimConfig::ny)
      .def_readonly("rho_f", &SimConfig::rho_f)
      .def_readonly("rho_s", &SimConfig::rho_s)
      .def_readonly("nu", &SimConfig::nu)
      .def_readonly("g", &SimConfig::g)
      .def_readonly("radius", &SimConfig::radius)
      .def_readonly("gamma0", &SimConfig::gamma0)
      .def_readonly("dt_init", &SimConfig::dt_init)
      .def_readonly("dt_max", &SimConfig::dt_max)
      .def_readonly("t_final", &SimConfig::t_final)
      .def_property_readonly("center", [](const SimConfig& c) { return py::make_tuple(c.center_x, c.center_y); })
      .def_property_readonly("position_update", [](const SimConfig& c) { return to_string(c.position_update); });

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<SimConfig>(), py::arg("config"))
      .def("initialize", &Simulation::initialize)
      .def("step", &Simulation::step)
      .def("record", [](const Simulation& s) { return record_dict(s.record()); })
      .def(
          "run",
          [](Simulation& s, const std::function<void(py::dict)>& callback) {
            std::vector<py::dict> out;
            for (const auto& r : s.run(callback ? [&callback](const Simulation&, const SimRecord& r) {
                   callback(record_dict(r));
                 } : std::function<void(const Simulation&, const SimRecord&)>{}))
              out.push_back(record_dict(r));
            return out;
          },
          py::arg("callback") = nullptr)
      .def_property_readonly("h", &Simulation::h)
      .def_property_readonly("gamma", &Simulation::gamma)
      .def_property_readonly("mass", [](const Simulation& s) { return s.inertia().mass; })
      .def_property_readonly("time", [](const Simulation& s) { return s.state().t; })
      .def_property_readonly("position", [](const Simulation& s) { return Vec2(s.state().rigid.h); })
      .def_property_readonly("velocity", [](const Simulation& s) { return Vec2(s.state().rigid.h_dot); })
      .def_property_readonly("force", [](const Simulation& s) { return Vec2(s.state().force); })
      .def_property_readonly("multipliers", [](const Simulation& s) {
        const auto& st = s.state();
        Eigen::MatrixX2d out(st.lambda.size() / 2, 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = st.lambda.segment<2>(2 * i).transpose();
        return out;
      })
      .def("write_fields", [](const Simulation& s, const std::string& path) { write_fields(s, path); })
      .def("write_metadata", [](const Simulation& s, const std::string& path) { write_metadata(s, path); });

  m.def(
      "cut_geometry",
      [](int nx, int ny, double cx, double cy, double radius) {
        const Mesh mesh = build_structured_mesh(nx, ny, Rect{});
        RigidState s;
        s.h = {cx, cy};
        const LevelSet ls(RigidShape{RigidShape::Kind::disk, radius}, s);
        const auto cls = classify_elements(mesh, ls);
        py::dict d;
        d["fluid_area"] = total_fluid_area(mesh, cls);
        d["interface_length"] = total_interface_length(cls);
        d["n_cut"] = cls.num_cut();
        d["h"] = mesh_size_h(mesh);
        return d;
      },
      py::arg("nx"), py::arg("ny"), py::arg("cx") = 1.0, py::arg("cy") = 4.0, py::arg("radius") = 0.125,
      "Fluid area, interface length and cut-element count for a disk on the [0,2]x[0,6] channel mesh.");

  m.def(
      "clip_triangle",
      [](const Eigen::Matrix<double, 3, 2>& v, const std::array<double, 3>& phi) {
        const CutCell c = clip_triangle({Vec2(v.row(0)), Vec2(v.row(1)), Vec2(v.row(2))}, phi);
        py::dict d;
        std::vector<Vec2> poly(c.fluid_polygon.begin(), c.fluid_polygon.end());
        d["fluid_polygon"] = poly;
        d["segment"] = std::vector<Vec2>{c.segment[0], c.segment[1]};
        d["normal"] = c.normal;
        d["fluid_area"] = c.fluid_area;
        d["segment_length"] = c.segment_length;
        return d;
      },
      py::arg("vertices"), py::arg("phi"));

  m.def(
      "stokes_verify",
      [](const SimConfig& cfg) {
        std::vector<py::dict> out;
        for (const auto& r : run_stokes_verify(cfg)) {
          py::dict d;
          d["nx"] = r.nx;
          d["ny"] = r.ny;
          d["h"] = r.h;
          d["err_u"] = r.err_u;
          d["err_p"] = r.err_p;
          d["err_lambda"] = r.err_lambda;
          d["order_u"] = r.order_u;
          d["order_p"] = r.order_p;
          d["order_lambda"] = r.order_lambda;
          out.push_back(d);
        }
        return out;
      },
      py::arg("config"));

  m.def(
      "write_csv",
      [](const std::vector<py::dict>& rows, const std::string& path) {
        std::vector<SimRecord> recs;
        for (const auto& d : rows) {
          SimRecord r;
          r.t = d["t"].cast<double>();
          r.dt = d["dt"].cast<double>();
          r.hx = d["hx"].cast<double>();
          r.hy = d["hy"].cast<double>();
          r.vx = d["vx"].cast<double>();
          r.vy = d["vy"].cast<double>();
          r.theta = d["theta"].cast<double>();
          r.omega = d["omega"].cast<double>();
          r.Fx = d["Fx"].cast<double>();
          r.Fy = d["Fy"].cast<double>();
          r.T = d["T"].cast<double>();
          r.newton_iters = d["newton_iters"].cast<int>();
          r.n_cut = d["n_cut"].cast<int>();
          recs.push_back(r);
        }
        write_csv(recs, path);
      },
      py::arg("records"), py::arg("path"));
  m.def(
      "read_csv",
      [](const std::string& path) {
        std::vector<py::dict> out;
        for (const auto& r : read_csv(path)) out.push_back(record_dict(r));
        return out;
      },
      py::arg("path"));
}
