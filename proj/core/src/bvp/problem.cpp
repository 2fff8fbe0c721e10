#include "hyperpinn/bvp/problem.hpp"

#include <cmath>
#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::bvp {

namespace {

constexpr double kPatchTolerance = 1e-12;

mat::NeoHookean paper_neo_hookean() { return {577.0, 385.0}; }

BoxDomain beam_domain(std::array<double, 3> lengths) {
  BoxDomain d;
  d.box.lengths = lengths;
  d.counts = {25, 9, 9};
  return d;
}

BoxDomain cube_domain(std::array<double, 3> lengths) {
  BoxDomain d;
  d.box.lengths = lengths;
  d.counts = {15, 15, 15};
  return d;
}

net::DirichletFace fixed(Face f) { return {f, {true, true, true}}; }

}  // namespace

std::string_view mask_name(LossMask m) {
  switch (m) {
    case LossMask::Full: return "full";
    case LossMask::Dem: return "dem";
    case LossMask::Dcm: return "dcm";
  }
  return "full";
}

bool parse_mask(std::string_view name, LossMask& out) {
  for (LossMask m : {LossMask::Full, LossMask::Dem, LossMask::Dcm}) {
    if (mask_name(m) == name) {
      out = m;
      return true;
    }
  }
  return false;
}

TractionPatch TractionPatch::whole_face(Face f, const Box& box, std::array<double, 3> t) {
  const auto [a, b] = face_tangent_axes(f);
  return {f, {box.lower(a), box.lower(b)}, {box.upper(a), box.upper(b)}, t};
}

bool TractionPatch::contains(const std::array<double, 3>& x) const {
  const auto ax = face_tangent_axes(face);
  for (int q = 0; q < 2; ++q) {
    const double v = x[ax[q]];
    if (v < lower[q] - kPatchTolerance || v > upper[q] + kPatchTolerance) return false;
  }
  return true;
}

void ProblemSpec::validate() const {
  domain.validate();
  mat::validate(material);
  if (!enforcer().has_constraints()) {
    throw DomainError("problem '" + name + "': at least one Dirichlet constraint is required");
  }
  if (!(load_scale > 0.0) || !std::isfinite(load_scale)) {
    throw DomainError("problem '" + name + "': load scale must be positive");
  }
  for (const auto& p : patches) {
    for (double t : p.traction) {
      if (!std::isfinite(t)) throw DomainError("problem '" + name + "': non-finite traction");
    }
  }
}

net::BcEnforcer ProblemSpec::enforcer() const {
  return net::BcEnforcer(domain.box, dirichlet, lift.scaled(load_scale));
}

bool ProblemSpec::fully_fixed(Face f) const {
  std::array<bool, 3> c{};
  for (const auto& d : dirichlet) {
    if (d.face != f) continue;
    for (int i = 0; i < 3; ++i) c[i] = c[i] || d.components[i];
  }
  return c[0] && c[1] && c[2];
}

std::array<double, 3> ProblemSpec::traction_at(Face f, const std::array<double, 3>& x) const {
  std::array<double, 3> t{};
  for (const auto& p : patches) {
    if (p.face != f || !p.contains(x)) continue;
    for (int i = 0; i < 3; ++i) t[i] += p.traction[i];
  }
  return t;
}

std::array<double, 3> ProblemSpec::exact_displacement(const std::array<double, 3>& x) const {
  if (!exact_gradient) throw DomainError("problem '" + name + "' has no exact solution");
  std::array<double, 3> u{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) u[i] += load_scale * (*exact_gradient)[3 * i + k] * x[k];
  return u;
}

TractionSet build_traction_set(const ProblemSpec& problem, const PointSets& points) {
  const net::BcEnforcer bc = problem.enforcer();
  std::vector<Face> fixed_faces;
  for (Face f : kAllFaces)
    if (problem.fully_fixed(f)) fixed_faces.push_back(f);

  std::vector<long> nodes;
  std::vector<std::array<double, 9>> rows;  // normal, traction, components
  for (Face f : kAllFaces) {
    if (problem.fully_fixed(f)) continue;
    const auto n = face_normal(f);
    for (long node : points.faces[face_index(f)].nodes) {
      bool touches_fixed = false;
      for (Face g : fixed_faces) touches_fixed = touches_fixed || points.on_face(node, g);
      if (touches_fixed) continue;
      const auto t = problem.traction_at(f, points.point(node));
      std::array<double, 9> r{};
      for (int i = 0; i < 3; ++i) {
        r[i] = n[i];
        r[3 + i] = t[i] * problem.load_scale;
        r[6 + i] = bc.constrains(f, i) ? 0.0 : 1.0;
      }
      nodes.push_back(node);
      rows.push_back(r);
    }
  }

  TractionSet ts;
  ts.nodes = std::move(nodes);
  const long m = ts.size();
  ts.normals.resize(3, m);
  ts.tractions.resize(3, m);
  ts.components.resize(3, m);
  for (long e = 0; e < m; ++e) {
    for (int i = 0; i < 3; ++i) {
      ts.normals(i, e) = rows[e][i];
      ts.tractions(i, e) = rows[e][3 + i];
      ts.components(i, e) = rows[e][6 + i];
    }
  }
  return ts;
}

Eigen::Matrix3Xd external_loads(const ProblemSpec& problem, const PointSets& points) {
  const long n = points.points.cols();
  Eigen::Matrix3Xd load = Eigen::Matrix3Xd::Zero(3, n);
  for (long p = 0; p < n; ++p)
    for (int i = 0; i < 3; ++i) load(i, p) = points.volume_weights[p] * problem.body_force[i];

  const net::BcEnforcer bc = problem.enforcer();
  for (Face f : kAllFaces) {
    if (problem.fully_fixed(f)) continue;
    const FaceGrid& g = points.faces[face_index(f)];
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const auto t = problem.traction_at(f, points.point(g.nodes[q]));
      for (int i = 0; i < 3; ++i) {
        if (!bc.constrains(f, i)) load(i, g.nodes[q]) += g.weights[q] * t[i];
      }
    }
  }
  return load * problem.load_scale;
}

ProblemSpec nh_cantilever_traction(double traction, std::array<double, 3> lengths) {
  ProblemSpec p;
  p.name = "nh_cantilever_traction";
  p.domain = beam_domain(lengths);
  p.material = paper_neo_hookean();
  p.dirichlet = {fixed(Face::XMinus)};
  p.patches = {TractionPatch::whole_face(Face::XPlus, p.domain.box, {0.0, traction, 0.0})};
  return p;
}

ProblemSpec lp_cantilever_displacement(double displacement, std::array<double, 3> lengths) {
  ProblemSpec p;
  p.name = "lp_cantilever_displacement";
  p.domain = beam_domain(lengths);
  mat::LopezPamies lp;
  lp.terms = {{1.0, 100.0}, {-2.0, 50.0}};
  lp.lambda = 100.0;
  p.material = lp;
  p.dirichlet = {fixed(Face::XMinus), {Face::XPlus, {false, true, false}}};
  // u_2 = C X_1 / L vanishes at X_1 = 0 and equals C at X_1 = L.
  p.lift.gradient[3 * 1 + 0] = displacement / p.domain.box.lengths[0];
  return p;
}

ProblemSpec nh_simple_shear(double gamma, std::array<double, 3> lengths) {
  ProblemSpec p;
  p.name = "nh_simple_shear";
  p.domain = cube_domain(lengths);
  p.material = paper_neo_hookean();
  for (Face f : kAllFaces) p.dirichlet.push_back(fixed(f));
  p.lift.gradient[3 * 0 + 1] = gamma;
  p.exact_gradient = p.lift.gradient;
  return p;
}

ProblemSpec nh_localized_traction(double traction, std::array<double, 3> lengths) {
  ProblemSpec p;
  p.name = "nh_localized_traction";
  p.domain = cube_domain(lengths);
  p.material = paper_neo_hookean();
  p.dirichlet = {fixed(Face::XMinus)};
  // centred, 0.2 of each side: 4% of the face area
  const double a = lengths[1];
  const double b = lengths[2];
  p.patches = {{Face::XPlus, {0.4 * a, 0.4 * b}, {0.6 * a, 0.6 * b}, {traction, 0.0, 0.0}}};
  return p;
}

std::vector<std::string> preset_names() {
  return {"nh_cantilever_traction", "lp_cantilever_displacement", "nh_simple_shear",
          "nh_localized_traction"};
}

ProblemSpec preset(std::string_view name) {
  if (name == "nh_cantilever_traction") return nh_cantilever_traction();
  if (name == "lp_cantilever_displacement") return lp_cantilever_displacement();
  if (name == "nh_simple_shear") return nh_simple_shear();
  if (name == "nh_localized_traction") return nh_localized_traction();
  std::ostringstream msg;
  msg << "unknown preset '" << name << "'";
  throw UnknownPreset(msg.str());
}

}  // namespace hyperpinn::bvp
