#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stroh/scatter.hpp"

namespace stroh {

struct Layer {
  Material material;
  double thickness;
};

// Layers listed top to bottom over a half-space. Depth grows along +e3, which
// is the conormal used for every interface.
struct LayerStack {
  std::vector<Layer> layers;
  Material halfspace;
  bool free_surface = true;

  // Throws InvalidArgument for non-positive thickness or a non-convex material.
  void validate() const;
  // Medium index: 0..layers.size()-1 are layers, layers.size() is the half-space.
  const Material& medium(int index) const;
};

enum class Heading { down, up };
const char* to_string(Heading h);

enum class EventKind { source, reflection, transmission, halfspace, escape };
const char* to_string(EventKind k);

// A plane-wave segment leaving a boundary of `layer` at `time`. Trace amplitudes
// are constant along the segment.
struct RayEvent {
  int id = 0;
  int parent = -1;
  int layer = 0;  // -1 above an open top, layers.size() for the half-space
  Heading heading = Heading::down;
  EventKind kind = EventKind::source;
  double s = 0.0;  // eigenvalue of the polynomial built with the downward conormal
  int multiplicity = 1;
  CVec3 amplitude;
  double flux = 0.0;
  double time = 0.0;     // departure
  double arrival = 0.0;  // arrival at the far boundary; equals `time` for leaves
  int depth = 0;         // number of boundary interactions from the source
  bool leaf = false;
  bool glancing = false;   // branch truncated at a glancing frame
  bool truncated = false;  // not expanded because max_events was reached
  std::vector<CVec3> evanescent;  // E_c parts created where this segment arrives
};

struct EventTree {
  std::vector<RayEvent> events;
  double source_flux = 0.0;
  double lost_flux = 0.0;  // flux of modes dropped below the amplitude floor
  double leaf_flux = 0.0;
  int glancing_branches = 0;
};

struct TraceOptions {
  int max_events = 64;
  double amplitude_floor = 1e-4;  // relative to the source amplitude
  Tolerances tol;
};

struct SourceMode {
  double s;
  CVec3 polarization;  // unit source flux
};

// Propagating modes of `heading` in medium `layer`, flux normalized.
std::vector<SourceMode> source_modes(const LayerStack& stack, int layer, Heading heading, const BoundaryFrame& frame,
                                     const Tolerances& tol = {});

struct SourceSpec {
  int layer = 0;
  Heading heading = Heading::down;
  double s = 0.0;
  CVec3 amplitude;
  double start_time = 0.0;
};

// Breadth-first expansion of reflections and transmissions. The frame's
// conormal must be e3.
EventTree trace_plane_wave(const LayerStack& stack, const SourceSpec& source, const BoundaryFrame& frame,
                           const TraceOptions& opt = {});

// ds/dtau = 2 rho tau (v|v) / (A'(s)v|v) for v in ker A(s).
double group_delay(const QuadraticMatrixPolynomial& a, double density, double tau, double s, const CVec3& v,
                   const Tolerances& tol = {});
double group_delay(const Material& m, const BoundaryFrame& frame, double s, const CVec3& v, const Tolerances& tol = {});

struct Arrival {
  double time;
  int layer;
  double s;
  double amplitude;
  double flux;
  int event;
};

// Up-going segments reaching the top boundary, ordered by time then event id.
std::vector<Arrival> arrivals(const EventTree& tree);

// { "free_surface": bool, "layers": [ { "thickness": d, "material": M }, ... ], "halfspace": M }
// with M a material document as accepted by parse_material.
LayerStack parse_stack(std::string_view json_text);
LayerStack load_stack(const std::string& path);

std::string tree_to_json(const EventTree& tree);

}  // namespace stroh
