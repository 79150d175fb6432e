#include "stroh/layered.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "stroh/error.hpp"
#include "stroh/linalg.hpp"
#include "stroh/material_io.hpp"

namespace stroh {

namespace {

using nlohmann::ordered_json;

double outgoing_flux(const QuadraticMatrixPolynomial& a, double tau, double s, const CVec3& v) {
  return -0.5 * tau * inner(CVec3(a.derivative(s) * v), v).real();
}

struct Child {
  int layer;
  Heading heading;
  EventKind kind;
  double s;
  int multiplicity;
  CVec3 amplitude;
  double flux;
};

// Converts the modes of one side of a scatter result into segments. Minus-side
// eigenvalues belong to the polynomial with -nu and change sign.
void collect(const SideResult& side, int layer, Heading heading, EventKind kind, bool leaf_medium,
             std::vector<Child>& out) {
  for (const auto& m : side.modes) {
    out.push_back({layer, heading, leaf_medium ? EventKind::halfspace : kind,
                   side.side == Side::minus ? -m.s : m.s, m.multiplicity, m.amplitude, m.flux});
  }
}

ordered_json vec_json(const CVec3& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < 3; ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::SchemaError, msg); }

}  // namespace

const char* to_string(Heading h) { return h == Heading::down ? "down" : "up"; }

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::source: return "source";
    case EventKind::reflection: return "reflection";
    case EventKind::transmission: return "transmission";
    case EventKind::halfspace: return "halfspace";
    case EventKind::escape: return "escape";
  }
  return "unknown";
}

void LayerStack::validate() const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!(layers[i].thickness > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "layer " + std::to_string(i) + " has non-positive thickness");
    }
    if (!check_strong_convexity(layers[i].material.stiffness).strongly_convex) {
      throw Error(ErrorKind::InvalidArgument, "layer " + std::to_string(i) + " is not strongly convex");
    }
  }
  if (!check_strong_convexity(halfspace.stiffness).strongly_convex) {
    throw Error(ErrorKind::InvalidArgument, "half-space is not strongly convex");
  }
}

const Material& LayerStack::medium(int index) const {
  if (index < 0 || index > static_cast<int>(layers.size())) {
    throw Error(ErrorKind::InvalidArgument, "medium index out of range");
  }
  return index == static_cast<int>(layers.size()) ? halfspace : layers[index].material;
}

double group_delay(const QuadraticMatrixPolynomial& a, double density, double tau, double s, const CVec3& v,
                   const Tolerances& tol) {
  const CMat3 d = a.derivative(s);
  const double form = inner(CVec3(d * v), v).real();
  if (std::abs(form) <= tol.glancing * linalg::spectral_norm(d) * v.squaredNorm()) {
    throw Error(ErrorKind::GlancingSpectrum, "sign form vanishes; group delay undefined");
  }
  return 2.0 * density * tau * v.squaredNorm() / form;
}

double group_delay(const Material& m, const BoundaryFrame& frame, double s, const CVec3& v, const Tolerances& tol) {
  return group_delay(boundary_polynomial(m, frame), m.density, frame.tau(), s, v, tol);
}

std::vector<SourceMode> source_modes(const LayerStack& stack, int layer, Heading heading, const BoundaryFrame& frame,
                                     const Tolerances& tol) {
  const Material& m = stack.medium(layer);
  std::vector<SourceMode> out;
  // Down-going waves are incoming for the polynomial built with -nu.
  const bool down = heading == Heading::down;
  for (const auto& mode : incoming_modes(m, down ? frame.flipped() : frame, tol)) {
    for (Eigen::Index k = 0; k < mode.basis.cols(); ++k) {
      out.push_back({down ? -mode.s : mode.s, mode.basis.col(k)});
    }
  }
  return out;
}

EventTree trace_plane_wave(const LayerStack& stack, const SourceSpec& source, const BoundaryFrame& frame,
                           const TraceOptions& opt) {
  stack.validate();
  if (opt.max_events < 1) throw Error(ErrorKind::InvalidArgument, "max_events must be at least 1");
  if ((frame.normal() - Vec3::UnitZ()).norm() > 1e-12) {
    throw Error(ErrorKind::InvalidFrame, "layered frames use the downward conormal e3");
  }
  const int n = static_cast<int>(stack.layers.size());
  if (source.layer < 0 || source.layer >= n) throw Error(ErrorKind::InvalidArgument, "source layer out of range");
  const double tau = frame.tau();
  const Tolerances& tol = opt.tol;

  std::vector<QuadraticMatrixPolynomial> polys;
  for (int i = 0; i <= n; ++i) polys.push_back(boundary_polynomial(stack.medium(i), frame));

  EventTree tree;
  const auto& a0 = polys[source.layer];
  tree.source_flux = std::abs(outgoing_flux(a0, tau, source.s, source.amplitude));
  const double floor = opt.amplitude_floor * source.amplitude.norm();

  RayEvent root;
  root.layer = source.layer;
  root.heading = source.heading;
  root.kind = EventKind::source;
  root.s = source.s;
  root.amplitude = source.amplitude;
  root.flux = tree.source_flux;
  root.time = source.start_time;
  tree.events.push_back(root);

  std::deque<int> queue{0};
  bool budget_exhausted = false;
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    RayEvent& e = tree.events[id];
    if (budget_exhausted) {
      e.leaf = e.truncated = true;
      e.arrival = e.time;
      continue;
    }

    const Material& here = stack.medium(e.layer);
    double arrival = e.time;
    std::vector<Child> children;
    std::vector<CVec3> evanescent;
    try {
      const double delay = std::abs(group_delay(polys[e.layer], here.density, tau, e.s, e.amplitude, tol));
      arrival = e.time + stack.layers[e.layer].thickness * delay;
      if (e.heading == Heading::up && e.layer == 0) {
        if (!stack.free_surface) {
          children.push_back({-1, Heading::up, EventKind::escape, e.s, e.multiplicity, e.amplitude, e.flux});
        } else {
          const ScatterResult r = reflect_free_surface(here, TraceField{e.amplitude, frame, Side::plus, e.s}, tol);
          collect(r.sides[0], 0, Heading::down, EventKind::reflection, false, children);
          evanescent.push_back(r.sides[0].evanescent);
        }
      } else {
        // Interface between an upper (minus) and a lower (plus) medium.
        const bool down = e.heading == Heading::down;
        const int upper = down ? e.layer : e.layer - 1;
        const int lower = upper + 1;
        const TraceField t{e.amplitude, frame, down ? Side::minus : Side::plus, down ? -e.s : e.s};
        const ScatterResult r = transmit_interface(stack.medium(lower), stack.medium(upper), t, tol);
        const SideResult* up_side = r.side(Side::minus);
        const SideResult* down_side = r.side(Side::plus);
        const EventKind up_kind = down ? EventKind::reflection : EventKind::transmission;
        const EventKind down_kind = down ? EventKind::transmission : EventKind::reflection;
        collect(*up_side, upper, Heading::up, up_kind, false, children);
        collect(*down_side, lower, Heading::down, down_kind, lower == n, children);
        evanescent.push_back(up_side->evanescent);
        evanescent.push_back(down_side->evanescent);
      }
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::GlancingSpectrum && err.kind() != ErrorKind::SigmaCardinality) throw;
      e.leaf = e.glancing = true;
      e.arrival = arrival;
      ++tree.glancing_branches;
      continue;
    }

    std::vector<Child> kept;
    for (const auto& c : children) {
      if (c.amplitude.norm() >= floor) {
        kept.push_back(c);
      } else {
        tree.lost_flux += c.flux;
      }
    }
    if (static_cast<int>(tree.events.size() + kept.size()) > opt.max_events) {
      // Undo the loss bookkeeping for a branch that is not expanded.
      for (const auto& c : children) {
        if (c.amplitude.norm() < floor) tree.lost_flux -= c.flux;
      }
      e.leaf = e.truncated = true;
      e.arrival = e.time;
      budget_exhausted = true;
      continue;
    }

    e.arrival = arrival;
    e.evanescent = std::move(evanescent);
    const int parent_depth = e.depth;
    if (kept.empty()) e.leaf = true;
    for (const auto& c : kept) {
      RayEvent child;
      child.id = static_cast<int>(tree.events.size());
      child.parent = id;
      child.layer = c.layer;
      child.heading = c.heading;
      child.kind = c.kind;
      child.s = c.s;
      child.multiplicity = c.multiplicity;
      child.amplitude = c.amplitude;
      child.flux = c.flux;
      child.time = arrival;
      child.depth = parent_depth + 1;
      const bool terminal = c.kind == EventKind::halfspace || c.kind == EventKind::escape;
      child.leaf = terminal;
      child.arrival = arrival;
      tree.events.push_back(child);
      if (!terminal) queue.push_back(child.id);
    }
  }

  for (const auto& e : tree.events) {
    if (e.leaf) tree.leaf_flux += e.flux;
  }
  return tree;
}

std::vector<Arrival> arrivals(const EventTree& tree) {
  std::vector<Arrival> out;
  for (const auto& e : tree.events) {
    if (e.heading != Heading::up || e.layer != 0 || e.truncated || e.glancing) continue;
    out.push_back({e.arrival, e.layer, e.s, e.amplitude.norm(), e.flux, e.id});
  }
  std::stable_sort(out.begin(), out.end(), [](const Arrival& x, const Arrival& y) {
    return x.time != y.time ? x.time < y.time : x.event < y.event;
  });
  return out;
}

LayerStack parse_stack(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("stack document must be an object");
  auto hs = doc.find("halfspace");
  if (hs == doc.end() || !hs->is_object()) schema("missing object 'halfspace'");
  LayerStack stack{{}, parse_material(hs->dump()).material, true};
  if (auto fs = doc.find("free_surface"); fs != doc.end()) {
    if (!fs->is_boolean()) schema("'free_surface' must be a boolean");
    stack.free_surface = fs->get<bool>();
  }
  auto layers = doc.find("layers");
  if (layers == doc.end() || !layers->is_array() || layers->empty()) schema("'layers' must be a non-empty array");
  for (const auto& l : *layers) {
    if (!l.is_object()) schema("each layer must be an object");
    auto th = l.find("thickness");
    auto mat = l.find("material");
    if (th == l.end() || !th->is_number()) schema("layer 'thickness' must be a number");
    if (mat == l.end() || !mat->is_object()) schema("layer 'material' must be an object");
    stack.layers.push_back({parse_material(mat->dump()).material, th->get<double>()});
  }
  stack.validate();
  return stack;
}

LayerStack load_stack(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot open stack file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stack(buf.str());
}

std::string tree_to_json(const EventTree& tree) {
  ordered_json events = ordered_json::array();
  for (const auto& e : tree.events) {
    ordered_json ev;
    ev["id"] = e.id;
    ev["parent"] = e.parent;
    ev["layer"] = e.layer;
    ev["heading"] = to_string(e.heading);
    ev["kind"] = to_string(e.kind);
    ev["s"] = e.s;
    ev["multiplicity"] = e.multiplicity;
    ev["amplitude"] = vec_json(e.amplitude);
    ev["flux"] = e.flux;
    ev["time"] = e.time;
    ev["arrival"] = e.arrival;
    ev["depth"] = e.depth;
    ev["leaf"] = e.leaf;
    ev["glancing"] = e.glancing;
    ev["truncated"] = e.truncated;
    ordered_json ev_parts = ordered_json::array();
    for (const auto& v : e.evanescent) ev_parts.push_back(vec_json(v));
    ev["evanescent"] = ev_parts;
    events.push_back(ev);
  }
  ordered_json doc;
  doc["source_flux"] = tree.source_flux;
  doc["leaf_flux"] = tree.leaf_flux;
  doc["lost_flux"] = tree.lost_flux;
  doc["glancing_branches"] = tree.glancing_branches;
  doc["events"] = events;
  return doc.dump(2);
}

}  // namespace stroh
