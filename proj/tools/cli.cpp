#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "stroh/acoustic.hpp"
#include "stroh/boundary.hpp"
#include "stroh/error.hpp"
#include "stroh/impedance.hpp"
#include "stroh/layered.hpp"
#include "stroh/linalg.hpp"
#include "stroh/material_io.hpp"
#include "stroh/scatter.hpp"

namespace stroh::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json cvec_json(const CVec3& v) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) a.push_back(cplx_json(v(i)));
  return a;
}

json cmat_json(const CMat3& m) {
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < 3; ++i) {
    json r = json::array();
    json c = json::array();
    for (int j = 0; j < 3; ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

json vec_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

json frame_json(const BoundaryFrame& f) {
  return {{"normal", vec_json(f.normal())}, {"eta", vec_json(f.eta())}, {"tau", f.tau()}};
}

// Options shared by every subcommand.
struct Common {
  std::string format;
  std::string out;
  int threads = 1;
  Tolerances tol;
  std::vector<double> normal{0.0, 0.0, 1.0};
  std::vector<double> eta;
  std::optional<double> tau;
  std::string material;
  std::string material_plus;
  std::string material_minus;
};

void add_tolerances(CLI::App* app, Common& c) {
  app->add_option("--tol-grouping", c.tol.grouping, "Real/complex eigenvalue grouping threshold")
      ->check(CLI::PositiveNumber);
  app->add_option("--tol-glancing", c.tol.glancing, "Glancing threshold on the sign form")->check(CLI::PositiveNumber);
  app->add_option("--tol-quadrature", c.tol.quadrature, "Barnett-Lothe quadrature tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--tol-bisection", c.tol.bisection, "Relative bisection tolerance")->check(CLI::PositiveNumber);
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
  app->add_option("--threads", c.threads, "Worker threads for grid scans")->check(CLI::PositiveNumber);
}

void add_frame(CLI::App* app, Common& c, bool need_tau) {
  app->add_option("--eta", c.eta, "Tangential covector in the tangent basis of the normal")->expected(2)->required();
  auto* t = app->add_option("--tau", c.tau, "Frequency (nonzero)");
  if (need_tau) t->required();
  app->add_option("--normal", c.normal, "Boundary conormal")->expected(3);
}

Vec3 normal_of(const Common& c) { return {c.normal[0], c.normal[1], c.normal[2]}; }

BoundaryFrame frame_of(const Common& c, double tau) {
  return frame_from_tangential(normal_of(c), c.eta[0], c.eta[1], tau);
}

Vec3 eta_of(const Common& c) {
  const auto [t1, t2] = tangent_basis(normal_of(c));
  return c.eta[0] * t1 + c.eta[1] * t2;
}

Material load(const std::string& path, std::ostream& err) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "a material file is required");
  LoadedMaterial m = load_material(path);
  for (const auto& w : m.warnings) err << json{{"warning", w}, {"file", path}}.dump() << '\n';
  return m.material;
}

std::string format_or(const Common& c, const char* fallback) { return c.format.empty() ? fallback : c.format; }

// ---- material -----------------------------------------------------------

std::string cmd_material(const std::string& path, bool decompose, std::ostream& err) {
  const LoadedMaterial lm = load_material(path);
  for (const auto& w : lm.warnings) err << json{{"warning", w}, {"file", path}}.dump() << '\n';
  const Material& m = lm.material;
  const ConvexityReport conv = check_strong_convexity(m.stiffness);
  json doc;
  doc["valid"] = true;
  doc["name"] = m.name;
  doc["density"] = m.density;
  doc["warnings"] = lm.warnings;
  doc["strongly_convex"] = conv.strongly_convex;
  doc["min_mandel_eigenvalue"] = conv.min_eigenvalue;
  doc["mandel_eigenvalues"] = conv.eigenvalues;
  json voigt = json::array();
  const Mat6 v = m.stiffness.to_voigt();
  for (int i = 0; i < 6; ++i) {
    json row = json::array();
    for (int j = 0; j < 6; ++j) row.push_back(v(i, j));
    voigt.push_back(row);
  }
  doc["voigt"] = voigt;
  if (decompose) {
    const HarmonicDecomposition d = decompose_harmonic(m.stiffness);
    auto mat3 = [](const Mat3& a) {
      json r = json::array();
      for (int i = 0; i < 3; ++i) r.push_back(json::array({a(i, 0), a(i, 1), a(i, 2)}));
      return r;
    };
    doc["decomposition"] = {{"lambda", d.lambda},
                            {"mu", d.mu},
                            {"A", mat3(d.a)},
                            {"B", mat3(d.b)},
                            {"H_max_abs", d.h.max_abs()},
                            {"reassembly_residual", max_abs_difference(reassemble(d), m.stiffness) /
                                                        std::max(m.stiffness.max_abs(), 1e-300)}};
  }
  return doc.dump(2) + "\n";
}

// ---- slowness -----------------------------------------------------------

std::string cmd_slowness(const Common& c, int grid, const std::vector<double>& axis, double cone, std::ostream& err) {
  const Material m = load(c.material, err);
  std::optional<AxisExclusion> ex;
  if (axis.size() == 3) ex = AxisExclusion{Vec3(axis[0], axis[1], axis[2]), cone};
  const GapScan scan = eigen_gap_scan(m, grid, ex, c.threads);
  if (format_or(c, "csv") == "json") {
    json rows = json::array();
    for (const auto& s : scan.samples) {
      rows.push_back({{"direction", vec_json(s.direction)}, {"speeds", s.speeds}, {"gap", s.gap}});
    }
    return json{{"min_gap", scan.min_gap}, {"samples", rows}}.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "direction_x[1],direction_y[1],direction_z[1],c1[length/time],c2[length/time],c3[length/time],gap[1]\n";
  for (const auto& s : scan.samples) {
    os << num(s.direction(0)) << ',' << num(s.direction(1)) << ',' << num(s.direction(2)) << ',' << num(s.speeds[0])
       << ',' << num(s.speeds[1]) << ',' << num(s.speeds[2]) << ',' << num(s.gap) << '\n';
  }
  return os.str();
}

// ---- factorize / impedance ----------------------------------------------

Direction direction_of(const std::string& d) { return d == "incoming" ? Direction::incoming : Direction::outgoing; }

std::vector<cplx> probe_points() {
  std::vector<cplx> pts;
  for (int k = 0; k < 10; ++k) pts.push_back(std::polar(0.5 + 0.37 * k, 0.9 + 1.3 * k));
  return pts;
}

std::string cmd_factorize(const Common& c, const std::string& dir, std::ostream& err) {
  const Material m = load(c.material, err);
  const BoundaryFrame frame = frame_of(c, *c.tau);
  const auto a = boundary_polynomial(m, frame);
  const auto f = factorize(a, direction_of(dir), frame.tau(), c.tol);
  json doc;
  doc["frame"] = frame_json(frame);
  doc["direction"] = to_string(f.direction);
  doc["Q"] = cmat_json(f.q);
  doc["Q_sharp"] = cmat_json(f.q_sharp);
  json sigma = json::array();
  for (const cplx& s : f.sigma) sigma.push_back(cplx_json(s));
  doc["sigma"] = sigma;
  json sharp = json::array();
  for (const cplx& s : f.sigma_sharp) sharp.push_back(cplx_json(s));
  doc["sigma_sharp"] = sharp;
  json spec = json::array();
  for (const auto& cl : f.spectrum.clusters) {
    spec.push_back({{"value", cplx_json(cl.value)},
                    {"algebraic", cl.algebraic},
                    {"geometric", cl.geometric},
                    {"real", cl.real},
                    {"type", to_string(cl.type)},
                    {"glancing", cl.glancing},
                    {"selected", f.spectrum.selects(cl, f.direction, f.tau)}});
  }
  doc["spectrum"] = spec;
  json res = {{"solvency", f.diagnostics.solvency_residual},
              {"sharp", f.diagnostics.sharp_residual},
              {"spectral_gap", f.diagnostics.spectral_gap},
              {"j_condition", f.diagnostics.j_condition},
              {"factorization_max", factorization_residual(a, f, probe_points())}};
  const auto circles = enclosing_circles(f);
  if (!circles.empty()) res["contour"] = contour_root_check(a, f.q, circles, 256, c.tol).residual;
  doc["residuals"] = res;
  return doc.dump(2) + "\n";
}

std::string cmd_impedance(const Common& c, const std::string& dir, std::ostream& err) {
  const Material m = load(c.material, err);
  const BoundaryFrame frame = frame_of(c, *c.tau);
  const auto a = boundary_polynomial(m, frame);
  const auto f = factorize(a, direction_of(dir), frame.tau(), c.tol);
  const Impedance z = impedance_from_factorization(a, f);
  const ModeProjectors p = mode_projectors(f);
  const RegionClass region = classify_boundary(m, frame, c.tol);

  Eigen::ComplexEigenSolver<CMat3> ez(z.z, false);
  Eigen::SelfAdjointEigenSolver<CMat3> eh(CMat3(0.5 * (z.z + z.z.adjoint())), Eigen::EigenvaluesOnly);
  json zeig = json::array();
  for (int i = 0; i < 3; ++i) zeig.push_back(cplx_json(ez.eigenvalues()(i)));

  json flux = json::array();
  const char* names[] = {"e1", "e2", "e3"};
  double modal = 0.0;
  for (int i = 0; i < 3; ++i) {
    const CVec3 u = CVec3::Unit(i);
    flux.push_back({{"u", names[i]}, {"flux", flux_form(z.z, frame.tau(), u)}});
    modal = std::max(modal, modal_flux_decomposition(a, f, u).residual);
  }
  json doc;
  doc["frame"] = frame_json(frame);
  doc["direction"] = to_string(z.direction);
  doc["region"] = to_string(region.label);
  doc["dim_c"] = p.dim_c;
  doc["dim_r"] = p.dim_r;
  doc["z"] = cmat_json(z.z);
  doc["z_eigenvalues"] = zeig;
  doc["hermitian_part_eigenvalues"] = json::array({eh.eigenvalues()(0), eh.eigenvalues()(1), eh.eigenvalues()(2)});
  doc["hermiticity_residual_ec"] = hermiticity_on_ec(z.z, p);
  doc["flux_checks"] = flux;
  doc["modal_identity_residual"] = modal;
  return doc.dump(2) + "\n";
}

// ---- classify -----------------------------------------------------------

std::string cmd_classify(const Common& c, int grid, std::ostream& err) {
  const Material plus = load(c.material.empty() ? c.material_plus : c.material, err);
  std::optional<Material> minus;
  if (!c.material_minus.empty()) minus = load(c.material_minus, err);
  const double tau = c.tau.value_or(-2.0 * eta_of(c).norm());
  std::vector<BoundaryFrame> frames;
  if (grid <= 0) {
    frames.push_back(frame_of(c, tau));
  } else {
    for (int k = 0; k < grid; ++k) frames.push_back(frame_of(c, tau * (k + 1.0) / grid));
  }
  MarginOptions opt{true, c.threads};
  const MarginReport rep =
      minus ? ellipticity_margin(plus, *minus, frames, opt, c.tol) : ellipticity_margin(plus, frames, opt, c.tol);

  if (format_or(c, "csv") == "json") {
    json rows = json::array();
    for (const auto& s : rep.samples) {
      rows.push_back({{"eta", vec_json(s.frame.eta())},
                      {"tau", s.frame.tau()},
                      {"label", to_string(s.label)},
                      {"margin", std::isnan(s.margin) ? json(nullptr) : json(s.margin)}});
    }
    return json{{"interface", minus.has_value()}, {"samples", rows}}.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "eta_x[1/length],eta_y[1/length],tau[1/time],label,margin[1]\n";
  for (const auto& s : rep.samples) {
    os << num(c.eta[0]) << ',' << num(c.eta[1]) << ',' << num(s.frame.tau()) << ',' << to_string(s.label) << ','
       << (std::isnan(s.margin) ? std::string("nan") : num(s.margin)) << '\n';
  }
  return os.str();
}

// ---- rayleigh / stoneley ------------------------------------------------

json wave_json(const SurfaceWave& w, double eta_norm) {
  return {{"tau_R", w.tau * eta_norm},
          {"speed", w.speed},
          {"slowness", w.slowness},
          {"tau_eta", w.tau_eta * eta_norm},
          {"bracket", json::array({w.bracket_lo * eta_norm, w.bracket_hi * eta_norm})},
          {"polarization", cvec_json(w.polarization)},
          {"det_z", w.det_z},
          {"lambda_min", w.lambda_min}};
}

std::string cmd_rayleigh(const Common& c, std::ostream& err) {
  const Material m = load(c.material, err);
  const Vec3 eta = eta_of(c);
  if (eta.norm() == 0.0) throw Error(ErrorKind::InvalidArgument, "eta must be nonzero");
  const SurfaceWave w = rayleigh_speed(m, normal_of(c), eta.normalized(), c.tol);
  json doc = wave_json(w, eta.norm());
  doc["eta"] = vec_json(eta);
  return doc.dump(2) + "\n";
}

std::string cmd_stoneley(const Common& c, std::ostream& err) {
  const Material plus = load(c.material_plus.empty() ? c.material : c.material_plus, err);
  const Material minus = load(c.material_minus, err);
  const Vec3 eta = eta_of(c);
  if (eta.norm() == 0.0) throw Error(ErrorKind::InvalidArgument, "eta must be nonzero");
  const SurfaceWave w = stoneley_speed(plus, minus, normal_of(c), eta.normalized(), c.tol);
  json doc = wave_json(w, eta.norm());
  doc["eta"] = vec_json(eta);
  return doc.dump(2) + "\n";
}

// ---- reflect ------------------------------------------------------------

std::string cmd_reflect(const Common& c, std::ostream& err) {
  const bool interface = !c.material_minus.empty();
  const Material plus = load(c.material_plus.empty() ? c.material : c.material_plus, err);
  std::optional<Material> minus;
  if (interface) minus = load(c.material_minus, err);
  const BoundaryFrame frame = frame_of(c, *c.tau);

  std::vector<std::pair<TraceField, ScatterResult>> results;
  int index = 0;
  for (const auto& mode : incoming_modes(plus, frame, c.tol)) {
    for (Eigen::Index k = 0; k < mode.basis.cols(); ++k, ++index) {
      const TraceField t = make_trace_field(plus, frame, mode.s, mode.basis.col(k), Side::plus, c.tol);
      results.emplace_back(t, interface ? transmit_interface(plus, *minus, t, c.tol) : reflect_free_surface(plus, t, c.tol));
    }
  }
  if (results.empty()) throw Error(ErrorKind::NoIncomingMode, "no propagating incoming mode at this frame");

  if (format_or(c, "csv") == "json") {
    json rows = json::array();
    int i = 0;
    for (const auto& [t, r] : results) {
      json sides = json::array();
      for (const auto& s : r.sides) {
        json modes = json::array();
        for (const auto& md : s.modes) {
          modes.push_back({{"s", md.s}, {"multiplicity", md.multiplicity}, {"amplitude", cvec_json(md.amplitude)},
                           {"flux", md.flux}});
        }
        sides.push_back({{"side", to_string(s.side)}, {"trace", cvec_json(s.f)}, {"evanescent", cvec_json(s.evanescent)},
                         {"evanescent_flux", s.evanescent_flux}, {"modes", modes}});
      }
      rows.push_back({{"incident", i++}, {"s_in", t.s_in}, {"g", cvec_json(t.g)}, {"incident_flux", r.incident_flux},
                      {"outgoing_flux", r.outgoing_flux}, {"balance_residual", r.balance_residual}, {"sides", sides}});
    }
    return json{{"frame", frame_json(frame)}, {"interface", interface}, {"results", rows}}.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "eta_x[1/length],eta_y[1/length],tau[1/time],incident,s_in[time/length],side,mode,s_out[time/length],"
        "a1_re,a1_im,a2_re,a2_im,a3_re,a3_im,flux[flux],incident_flux[flux],balance_residual[1]\n";
  int i = 0;
  for (const auto& [t, r] : results) {
    auto row = [&](const SideResult& s, const char* kind, const std::string& s_out, const CVec3& a, double flux) {
      os << num(c.eta[0]) << ',' << num(c.eta[1]) << ',' << num(frame.tau()) << ',' << i << ',' << num(t.s_in) << ','
         << to_string(s.side) << ',' << kind << ',' << s_out;
      for (int d = 0; d < 3; ++d) os << ',' << num(a(d).real()) << ',' << num(a(d).imag());
      os << ',' << num(flux) << ',' << num(r.incident_flux) << ',' << num(r.balance_residual) << '\n';
    };
    for (const auto& s : r.sides) {
      for (const auto& md : s.modes) row(s, "propagating", num(md.s), md.amplitude, md.flux);
      row(s, "evanescent", "", s.evanescent, s.evanescent_flux);
    }
    ++i;
  }
  return os.str();
}

// ---- trace / arrivals ---------------------------------------------------

struct TraceArgs {
  std::string stack;
  int source_layer = 0;
  int source_mode = 0;
  std::string heading = "down";
  int max_events = 64;
  double amplitude_floor = 1e-4;
};

EventTree run_trace(const Common& c, const TraceArgs& ta) {
  const LayerStack stack = load_stack(ta.stack);
  const BoundaryFrame frame = frame_from_tangential(Vec3::UnitZ(), c.eta[0], c.eta[1], *c.tau);
  const Heading h = ta.heading == "up" ? Heading::up : Heading::down;
  if (ta.source_layer < 0 || ta.source_layer >= static_cast<int>(stack.layers.size())) {
    throw Error(ErrorKind::InvalidArgument, "source layer out of range");
  }
  const auto modes = source_modes(stack, ta.source_layer, h, frame, c.tol);
  if (modes.empty()) throw Error(ErrorKind::NoIncomingMode, "no propagating mode in the source layer");
  if (ta.source_mode < 0 || ta.source_mode >= static_cast<int>(modes.size())) {
    throw Error(ErrorKind::InvalidArgument, "source mode index out of range (" + std::to_string(modes.size()) + " modes)");
  }
  SourceSpec src{ta.source_layer, h, modes[ta.source_mode].s, modes[ta.source_mode].polarization, 0.0};
  TraceOptions opt;
  opt.max_events = ta.max_events;
  opt.amplitude_floor = ta.amplitude_floor;
  opt.tol = c.tol;
  return trace_plane_wave(stack, src, frame, opt);
}

std::string cmd_trace(const Common& c, const TraceArgs& ta) { return tree_to_json(run_trace(c, ta)) + "\n"; }

std::string cmd_arrivals(const Common& c, const TraceArgs& ta) {
  const auto list = arrivals(run_trace(c, ta));
  if (format_or(c, "csv") == "json") {
    json rows = json::array();
    for (const auto& a : list) {
      rows.push_back({{"time", a.time}, {"layer", a.layer}, {"mode", a.s}, {"amplitude", a.amplitude},
                      {"flux", a.flux}, {"event", a.event}});
    }
    return rows.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "time[time],layer[index],mode[time/length],amplitude[trace],flux[flux]\n";
  for (const auto& a : list) {
    os << num(a.time) << ',' << a.layer << ',' << num(a.s) << ',' << num(a.amplitude) << ',' << num(a.flux) << '\n';
  }
  return os.str();
}

void add_trace_args(CLI::App* app, TraceArgs& ta) {
  app->add_option("--stack", ta.stack, "Layer stack JSON")->required();
  app->add_option("--source-layer", ta.source_layer, "Layer holding the source");
  app->add_option("--source-mode", ta.source_mode, "Index into the propagating modes of the source layer");
  app->add_option("--heading", ta.heading, "Source heading")->check(CLI::IsMember({"down", "up"}));
  app->add_option("--max-events", ta.max_events, "Event budget")->check(CLI::PositiveNumber);
  app->add_option("--amplitude-floor", ta.amplitude_floor, "Relative amplitude floor")->check(CLI::NonNegativeNumber);
}

void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + c.out + "'");
  f << text;
}

void report(std::ostream& err, std::string_view kind, std::string_view category, const std::string& message) {
  err << json{{"error", kind}, {"category", category}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anisotropic elastodynamic boundary quantities", "stroh"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  std::function<std::string()> action;

  // material
  std::string mat_path;
  bool validate = false;
  bool decompose = false;
  auto* mat = app.add_subcommand("material", "Validate a material file or decompose its stiffness");
  mat->add_option("file", mat_path, "Material JSON");
  mat->add_option("--material", mat_path, "Material JSON");
  mat->add_flag("--validate", validate, "Validate only");
  mat->add_flag("--decompose", decompose, "Report the harmonic decomposition");
  add_tolerances(mat, c);
  mat->callback([&] {
    action = [&] {
      if (mat_path.empty()) throw Error(ErrorKind::InvalidArgument, "a material file is required");
      return cmd_material(mat_path, decompose && !validate, err);
    };
  });

  // slowness
  int slow_grid = 200;
  std::vector<double> axis;
  double cone = 5.0;
  auto* slow = app.add_subcommand("slowness", "Christoffel speeds and eigenvalue gaps over the sphere");
  slow->add_option("--material", c.material, "Material JSON")->required();
  slow->add_option("--grid", slow_grid, "Number of directions")->check(CLI::Range(6, 1000000));
  slow->add_option("--exclude-axis", axis, "Skip directions near +-axis")->expected(3);
  slow->add_option("--exclude-deg", cone, "Half-angle of the excluded cone in degrees");
  add_tolerances(slow, c);
  slow->callback([&] { action = [&] { return cmd_slowness(c, slow_grid, axis, cone, err); }; });

  // factorize
  std::string direction = "outgoing";
  auto* fac = app.add_subcommand("factorize", "Spectral factorization of the boundary polynomial");
  fac->add_option("--material", c.material, "Material JSON")->required();
  add_frame(fac, c, true);
  fac->add_option("--direction", direction, "Half-spectrum")->check(CLI::IsMember({"outgoing", "incoming"}));
  add_tolerances(fac, c);
  fac->callback([&] { action = [&] { return cmd_factorize(c, direction, err); }; });

  // impedance
  auto* imp = app.add_subcommand("impedance", "Boundary impedance and its structural checks");
  imp->add_option("--material", c.material, "Material JSON")->required();
  add_frame(imp, c, true);
  imp->add_option("--direction", direction, "Half-spectrum")->check(CLI::IsMember({"outgoing", "incoming"}));
  add_tolerances(imp, c);
  imp->callback([&] { action = [&] { return cmd_impedance(c, direction, err); }; });

  // classify
  int class_grid = 0;
  auto* cls = app.add_subcommand("classify", "Region labels and ellipticity margins");
  cls->add_option("--material,--material-plus", c.material, "Material JSON (plus side for interfaces)")->required();
  cls->add_option("--material-minus", c.material_minus, "Minus-side material for interfaces");
  add_frame(cls, c, false);
  cls->add_option("--grid", class_grid, "Sample tau at grid points in (0, tau]")->check(CLI::NonNegativeNumber);
  add_tolerances(cls, c);
  cls->callback([&] { action = [&] { return cmd_classify(c, class_grid, err); }; });

  // rayleigh
  auto* ray = app.add_subcommand("rayleigh", "Rayleigh wave speed");
  ray->add_option("--material", c.material, "Material JSON")->required();
  add_frame(ray, c, false);
  add_tolerances(ray, c);
  ray->callback([&] { action = [&] { return cmd_rayleigh(c, err); }; });

  // stoneley
  auto* sto = app.add_subcommand("stoneley", "Stoneley wave speed at a welded interface");
  sto->add_option("--material-plus,--material", c.material_plus, "Plus-side material")->required();
  sto->add_option("--material-minus", c.material_minus, "Minus-side material")->required();
  add_frame(sto, c, false);
  add_tolerances(sto, c);
  sto->callback([&] { action = [&] { return cmd_stoneley(c, err); }; });

  // reflect
  auto* ref = app.add_subcommand("reflect", "Reflection (and transmission) of every propagating incoming mode");
  ref->add_option("--material,--material-plus", c.material_plus, "Incidence-side material")->required();
  ref->add_option("--material-minus", c.material_minus, "Far-side material for a welded interface");
  add_frame(ref, c, true);
  add_tolerances(ref, c);
  ref->callback([&] { action = [&] { return cmd_reflect(c, err); }; });

  // trace / arrivals
  TraceArgs ta;
  auto* tr = app.add_subcommand("trace", "Plane-wave event tree through a layer stack");
  add_trace_args(tr, ta);
  add_frame(tr, c, true);
  add_tolerances(tr, c);
  tr->callback([&] { action = [&] { return cmd_trace(c, ta); }; });

  auto* arr = app.add_subcommand("arrivals", "Arrival table at the top of a layer stack");
  add_trace_args(arr, ta);
  add_frame(arr, c, true);
  add_tolerances(arr, c);
  arr->callback([&] { action = [&] { return cmd_arrivals(c, ta); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "UsageError", "validation", e.what());
    return kExitValidation;
  }

  try {
    emit(action(), c, out);
  } catch (const Error& e) {
    const bool validation = e.category() == ErrorCategory::validation;
    report(err, to_string(e.kind()), validation ? "validation" : "numerical", e.what());
    return validation ? kExitValidation : kExitNumerical;
  } catch (const std::exception& e) {
    report(err, "InternalError", "numerical", e.what());
    return kExitNumerical;
  }
  return 0;
}

}  // namespace stroh::cli
