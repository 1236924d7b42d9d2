#include "realbloch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace realbloch {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

[[noreturn]] void bad_discretization(const std::string& msg) {
  throw Error(ErrorKind::InvalidDiscretization, msg);
}

}  // namespace

const char* to_string(Topology t) {
  switch (t) {
    case Topology::Circle: return "circle";
    case Topology::Torus2: return "torus2";
    case Topology::Sphere2: return "sphere2";
  }
  return "?";
}

const char* to_string(InvolutionKind k) {
  switch (k) {
    case InvolutionKind::Trivial: return "trivial";
    case InvolutionKind::Reflection: return "reflection";
    case InvolutionKind::Antipodal: return "antipodal";
    case InvolutionKind::Eta: return "eta";
    case InvolutionKind::EtaFirst: return "eta1";
    case InvolutionKind::Xi: return "xi";
    case InvolutionKind::Kappa: return "kappa";
  }
  return "?";
}

std::string InvolutiveLattice::base_tag() const {
  switch (topology_) {
    case Topology::Circle: return std::string("circle-") + to_string(kind_);
    case Topology::Sphere2: return "sphere2";
    case Topology::Torus2:
      // Reflecting either angle gives the same involutive torus.
      if (kind_ == InvolutionKind::EtaFirst) return "torus2-eta";
      return std::string("torus2-") + to_string(kind_);
  }
  return "?";
}

void InvolutiveLattice::add_link(int from, int to, int direction, double spacing) {
  const auto n = static_cast<long long>(sites_.size());
  link_lookup_[from * n + to] = static_cast<int>(links_.size());
  links_.push_back({from, to, direction, spacing});
}

std::optional<Step> InvolutiveLattice::find_step(int from, int to) const {
  const auto n = static_cast<long long>(sites_.size());
  if (auto it = link_lookup_.find(from * n + to); it != link_lookup_.end()) {
    return Step{it->second, true};
  }
  if (auto it = link_lookup_.find(to * n + from); it != link_lookup_.end()) {
    return Step{it->second, false};
  }
  return std::nullopt;
}

void InvolutiveLattice::add_plaquette(std::initializer_list<int> corners) {
  std::vector<int> c(corners);
  LoopPath p;
  p.base = c.front();
  for (std::size_t k = 0; k < c.size(); ++k) {
    auto s = find_step(c[k], c[(k + 1) % c.size()]);
    if (!s) bad_discretization("plaquette corner pair is not linked");
    p.steps.push_back(*s);
  }
  plaquettes_.push_back(std::move(p));
}

void InvolutiveLattice::finalize(std::vector<int> perm) {
  const int n = site_count();
  involution_ = std::move(perm);
  for (int i = 0; i < n; ++i) {
    const int j = involution_[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || involution_[static_cast<std::size_t>(j)] != i) {
      bad_discretization("involution is not a self-inverse site permutation");
    }
    if (j == i) fixed_sites_.push_back(i);
  }

  link_images_.resize(links_.size());
  for (int l = 0; l < link_count(); ++l) {
    const auto& lk = links_[static_cast<std::size_t>(l)];
    auto s = find_step(involution(lk.from), involution(lk.to));
    if (!s) bad_discretization("involution does not map links to links");
    link_images_[static_cast<std::size_t>(l)] = {s->link, !s->forward};
  }

  std::map<std::vector<int>, int> by_links;
  for (int p = 0; p < plaquette_count(); ++p) {
    std::vector<int> ids;
    for (const auto& s : plaquettes_[static_cast<std::size_t>(p)].steps) ids.push_back(s.link);
    std::sort(ids.begin(), ids.end());
    by_links[ids] = p;
  }
  plaquette_images_.resize(plaquettes_.size());
  int n_reversed = 0;
  for (int p = 0; p < plaquette_count(); ++p) {
    const auto& steps = plaquettes_[static_cast<std::size_t>(p)].steps;
    std::vector<int> ids;
    for (const auto& s : steps) ids.push_back(link_images_[static_cast<std::size_t>(s.link)].link);
    std::sort(ids.begin(), ids.end());
    auto it = by_links.find(ids);
    if (it == by_links.end()) bad_discretization("involution does not map plaquettes to plaquettes");
    const auto& first = link_images_[static_cast<std::size_t>(steps.front().link)];
    const bool mapped_forward = steps.front().forward != first.reversed;
    bool reversed = false;
    for (const auto& t : plaquettes_[static_cast<std::size_t>(it->second)].steps) {
      if (t.link == first.link) reversed = (t.forward != mapped_forward);
    }
    plaquette_images_[static_cast<std::size_t>(p)] = {it->second, reversed};
    n_reversed += reversed ? 1 : 0;
  }
  if (dimension() == 2) {
    if (n_reversed != 0 && n_reversed != plaquette_count()) {
      bad_discretization("involution mixes orientation-preserving and reversing plaquettes");
    }
    orientation_flip_ = plaquette_count() > 0 && n_reversed == plaquette_count();
  } else {
    orientation_flip_ = kind_ == InvolutionKind::Reflection;
  }
}

InvolutiveLattice build_circle(int n_sites, InvolutionKind kind) {
  if (n_sites < 4) bad_discretization("circle needs at least 4 sites");
  if (kind != InvolutionKind::Trivial && kind != InvolutionKind::Reflection &&
      kind != InvolutionKind::Antipodal) {
    bad_discretization("circle involution must be trivial, reflection or antipodal");
  }
  if (kind != InvolutionKind::Trivial && n_sites % 2 != 0) {
    bad_discretization("nontrivial circle involutions need an even number of sites");
  }
  InvolutiveLattice lat;
  lat.topology_ = Topology::Circle;
  lat.kind_ = kind;
  lat.sizes_ = {n_sites};
  const double h = kTwoPi / n_sites;
  for (int i = 0; i < n_sites; ++i) lat.sites_.push_back({h * i, 0.0});
  for (int i = 0; i < n_sites; ++i) lat.add_link(i, wrap(i + 1, n_sites), 0, h);
  std::vector<int> inv(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) {
    switch (kind) {
      case InvolutionKind::Reflection: inv[static_cast<std::size_t>(i)] = wrap(-i, n_sites); break;
      case InvolutionKind::Antipodal:
        inv[static_cast<std::size_t>(i)] = wrap(i + n_sites / 2, n_sites);
        break;
      default: inv[static_cast<std::size_t>(i)] = i;
    }
  }
  lat.finalize(std::move(inv));
  return lat;
}

InvolutiveLattice build_torus2(int n1, int n2, InvolutionKind kind) {
  if (n1 < 4 || n2 < 4 || n1 % 2 != 0 || n2 % 2 != 0) {
    bad_discretization("torus sizes must be even and at least 4");
  }
  if (kind != InvolutionKind::Trivial && kind != InvolutionKind::Eta &&
      kind != InvolutionKind::EtaFirst && kind != InvolutionKind::Xi) {
    bad_discretization("torus involution must be trivial, eta, eta1 or xi");
  }
  if (kind == InvolutionKind::Xi && n1 != n2) {
    bad_discretization("the xi involution needs a square grid (n1 == n2)");
  }
  InvolutiveLattice lat;
  lat.topology_ = Topology::Torus2;
  lat.kind_ = kind;
  lat.sizes_ = {n1, n2};
  const double h1 = kTwoPi / n1;
  const double h2 = kTwoPi / n2;
  auto idx = [&](int i, int j) { return wrap(i, n1) * n2 + wrap(j, n2); };

  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (kind == InvolutionKind::Xi) {
        // Grid axes along (2,1) and (1,1) in angle space.
        const double s = h1 * i;
        const double t = h2 * j;
        lat.sites_.push_back({std::fmod(2.0 * s + t, kTwoPi), std::fmod(s + t, kTwoPi)});
      } else {
        lat.sites_.push_back({h1 * i, h2 * j});
      }
    }
  }
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      lat.add_link(idx(i, j), idx(i + 1, j), 0, h1);
      lat.add_link(idx(i, j), idx(i, j + 1), 1, h2);
      if (kind == InvolutionKind::Xi) lat.add_link(idx(i, j), idx(i + 1, j - 1), 2, h1);
    }
  }
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (kind == InvolutionKind::Xi) {
        lat.add_plaquette({idx(i, j), idx(i + 1, j), idx(i, j + 1)});
        lat.add_plaquette({idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
      } else {
        lat.add_plaquette({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
      }
    }
  }
  std::vector<int> inv(lat.sites_.size());
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      int target = idx(i, j);
      switch (kind) {
        case InvolutionKind::Eta: target = idx(i, -j); break;
        case InvolutionKind::EtaFirst: target = idx(-i, j); break;
        case InvolutionKind::Xi: target = idx(i + j, -j); break;
        default: break;
      }
      inv[static_cast<std::size_t>(idx(i, j))] = target;
    }
  }
  lat.finalize(std::move(inv));
  return lat;
}

InvolutiveLattice build_sphere2(int n_theta, int n_phi) {
  if (n_theta < 3) bad_discretization("sphere needs n_theta >= 3");
  if (n_phi < 4 || n_phi % 2 != 0) bad_discretization("sphere needs even n_phi >= 4");
  InvolutiveLattice lat;
  lat.topology_ = Topology::Sphere2;
  lat.kind_ = InvolutionKind::Kappa;
  lat.sizes_ = {n_theta, n_phi};
  const double ht = kPi / n_theta;
  const double hp = kTwoPi / n_phi;
  const int rings = n_theta - 1;
  const int north = 0;
  const int south = 1 + rings * n_phi;
  auto idx = [&](int r, int c) { return 1 + (r - 1) * n_phi + wrap(c, n_phi); };

  lat.sites_.push_back({0.0, 0.0});
  for (int r = 1; r <= rings; ++r) {
    for (int c = 0; c < n_phi; ++c) lat.sites_.push_back({ht * r, hp * c});
  }
  lat.sites_.push_back({kPi, 0.0});

  for (int r = 1; r <= rings; ++r) {
    for (int c = 0; c < n_phi; ++c) lat.add_link(idx(r, c), idx(r, c + 1), 0, hp);
  }
  for (int c = 0; c < n_phi; ++c) {
    lat.add_link(north, idx(1, c), 1, ht);
    for (int r = 1; r < rings; ++r) lat.add_link(idx(r, c), idx(r + 1, c), 1, ht);
    lat.add_link(idx(rings, c), south, 1, ht);
  }
  // Counter-clockwise seen from outside: polar step first, then azimuthal.
  for (int c = 0; c < n_phi; ++c) lat.add_plaquette({north, idx(1, c), idx(1, c + 1)});
  for (int r = 1; r < rings; ++r) {
    for (int c = 0; c < n_phi; ++c) {
      lat.add_plaquette({idx(r, c), idx(r + 1, c), idx(r + 1, c + 1), idx(r, c + 1)});
    }
  }
  for (int c = 0; c < n_phi; ++c) lat.add_plaquette({idx(rings, c), south, idx(rings, c + 1)});

  std::vector<int> inv(lat.sites_.size());
  inv[static_cast<std::size_t>(north)] = north;
  inv[static_cast<std::size_t>(south)] = south;
  for (int r = 1; r <= rings; ++r) {
    for (int c = 0; c < n_phi; ++c) inv[static_cast<std::size_t>(idx(r, c))] = idx(r, -c);
  }
  lat.finalize(std::move(inv));
  return lat;
}

std::array<double, 3> InvolutiveLattice::cartesian(int site) const {
  const Point& p = this->site(site);
  if (topology_ != Topology::Sphere2) {
    throw Error(ErrorKind::Domain, "cartesian embedding is defined for the sphere only");
  }
  return {std::cos(p[0]), std::sin(p[0]) * std::cos(p[1]), std::sin(p[0]) * std::sin(p[1])};
}

Point InvolutiveLattice::link_displacement(int l) const {
  const Link& lk = link(l);
  const Point& a = site(lk.from);
  const Point& b = site(lk.to);
  if (topology_ == Topology::Sphere2) {
    const bool pole = lk.from == 0 || lk.to == 0 || lk.from == site_count() - 1 ||
                      lk.to == site_count() - 1;
    return {b[0] - a[0], pole ? 0.0 : wrap_angle(b[1] - a[1])};
  }
  if (topology_ == Topology::Circle) return {wrap_angle(b[0] - a[0]), 0.0};
  return {wrap_angle(b[0] - a[0]), wrap_angle(b[1] - a[1])};
}

namespace {
bool is_pole(const InvolutiveLattice& lat, int s) {
  return lat.topology() == Topology::Sphere2 && (s == 0 || s == lat.site_count() - 1);
}
}  // namespace

Point InvolutiveLattice::link_midpoint(int l) const {
  const Link& lk = link(l);
  Point a = site(lk.from);
  if (is_pole(*this, lk.from)) a[1] = site(lk.to)[1];
  const Point d = link_displacement(l);
  return {a[0] + 0.5 * d[0], a[1] + 0.5 * d[1]};
}

Point InvolutiveLattice::plaquette_center(int p) const {
  const LoopPath& loop = plaquette(p);
  // Walk the boundary accumulating unwrapped displacements.
  Point pos = site(loop.base);
  std::vector<Point> corners;
  std::vector<int> corner_sites;
  for (const auto& s : loop.steps) {
    corners.push_back(pos);
    corner_sites.push_back(step_from(s));
    Point d = link_displacement(s.link);
    if (!s.forward) d = {-d[0], -d[1]};
    pos = {pos[0] + d[0], pos[1] + d[1]};
  }
  if (topology_ == Topology::Sphere2) {
    // Pole corners carry no azimuth; use the mean azimuth of the other corners.
    double az = 0.0;
    int n_az = 0;
    const double ref = [&] {
      for (std::size_t k = 0; k < corners.size(); ++k)
        if (!is_pole(*this, corner_sites[k])) return corners[k][1];
      return 0.0;
    }();
    double polar = 0.0;
    for (std::size_t k = 0; k < corners.size(); ++k) {
      polar += site(corner_sites[k])[0];
      if (!is_pole(*this, corner_sites[k])) {
        az += ref + wrap_angle(site(corner_sites[k])[1] - ref);
        ++n_az;
      }
    }
    const auto n = static_cast<double>(corners.size());
    return {polar / n, std::fmod(az / n_az + kTwoPi, kTwoPi)};
  }
  Point c{0.0, 0.0};
  for (const auto& q : corners) {
    c[0] += q[0];
    c[1] += q[1];
  }
  const auto n = static_cast<double>(corners.size());
  return {std::fmod(c[0] / n + kTwoPi, kTwoPi), std::fmod(c[1] / n + kTwoPi, kTwoPi)};
}

void InvolutiveLattice::validate(const LoopPath& loop) const {
  if (loop.steps.empty()) throw Error(ErrorKind::Domain, "empty loop");
  if (loop.base < 0 || loop.base >= site_count()) throw Error(ErrorKind::Domain, "loop base is not a site");
  int at = loop.base;
  for (const auto& s : loop.steps) {
    if (s.link < 0 || s.link >= link_count()) throw Error(ErrorKind::Domain, "loop uses a link not on the lattice");
    if (step_from(s) != at) throw Error(ErrorKind::Domain, "loop steps are not consecutive");
    at = step_to(s);
  }
  if (at != loop.base) throw Error(ErrorKind::Domain, "loop is not closed");
}

std::vector<LoopPath> fixed_loops(const InvolutiveLattice& lat) {
  std::vector<LoopPath> loops;
  if (lat.involution_kind() == InvolutionKind::Trivial && lat.topology() == Topology::Torus2) {
    loops.push_back(coordinate_loop(lat, 0, 0));
    loops.push_back(coordinate_loop(lat, 1, 0));
    return loops;
  }
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(lat.site_count()));
  for (int l = 0; l < lat.link_count(); ++l) {
    const auto img = lat.link_image(l);
    if (img.link == l && !img.reversed) {
      incident[static_cast<std::size_t>(lat.link(l).from)].push_back(l);
      incident[static_cast<std::size_t>(lat.link(l).to)].push_back(l);
    }
  }
  std::vector<char> used(static_cast<std::size_t>(lat.link_count()), 0);
  for (int start : lat.fixed_sites()) {
    const auto& inc = incident[static_cast<std::size_t>(start)];
    if (inc.size() != 2) continue;
    if (used[static_cast<std::size_t>(inc[0])] || used[static_cast<std::size_t>(inc[1])]) continue;
    // Leave the start along a forward step when possible.
    int first = inc[0];
    if (lat.link(inc[0]).from != start && lat.link(inc[1]).from == start) first = inc[1];
    LoopPath loop;
    loop.base = start;
    int at = start;
    int l = first;
    bool ok = true;
    for (;;) {
      used[static_cast<std::size_t>(l)] = 1;
      const Step s{l, lat.link(l).from == at};
      loop.steps.push_back(s);
      at = lat.step_to(s);
      if (at == start) break;
      const auto& next = incident[static_cast<std::size_t>(at)];
      if (next.size() != 2) {
        ok = false;
        break;
      }
      l = next[0] == l ? next[1] : next[0];
      if (used[static_cast<std::size_t>(l)]) {
        ok = false;
        break;
      }
    }
    if (ok) loops.push_back(std::move(loop));
  }
  return loops;
}

LoopPath map_loop(const InvolutiveLattice& lat, const LoopPath& loop) {
  lat.validate(loop);
  LoopPath out;
  out.base = lat.involution(loop.base);
  out.steps.reserve(loop.steps.size());
  for (const auto& s : loop.steps) {
    const auto img = lat.link_image(s.link);
    out.steps.push_back({img.link, s.forward != img.reversed});
  }
  return out;
}

LoopPath coordinate_loop(const InvolutiveLattice& lat, int direction, int index) {
  std::vector<int> sites;
  switch (lat.topology()) {
    case Topology::Circle:
      for (int i = 0; i < lat.site_count(); ++i) sites.push_back(i);
      break;
    case Topology::Torus2: {
      const int n1 = lat.sizes()[0];
      const int n2 = lat.sizes()[1];
      if (direction == 0) {
        for (int i = 0; i < n1; ++i) sites.push_back(i * n2 + wrap(index, n2));
      } else {
        for (int j = 0; j < n2; ++j) sites.push_back(wrap(index, n1) * n2 + j);
      }
      break;
    }
    case Topology::Sphere2: {
      const int nt = lat.sizes()[0];
      const int np = lat.sizes()[1];
      auto idx = [&](int r, int c) { return 1 + (r - 1) * np + wrap(c, np); };
      if (direction == 0) {
        if (index < 1 || index >= nt) throw Error(ErrorKind::Domain, "ring index out of range");
        for (int c = 0; c < np; ++c) sites.push_back(idx(index, c));
      } else {
        sites.push_back(0);
        for (int r = 1; r < nt; ++r) sites.push_back(idx(r, index));
        sites.push_back(lat.site_count() - 1);
        for (int r = nt - 1; r >= 1; --r) sites.push_back(idx(r, index + np / 2));
      }
      break;
    }
  }
  LoopPath loop;
  loop.base = sites.front();
  for (std::size_t k = 0; k < sites.size(); ++k) {
    auto s = lat.find_step(sites[k], sites[(k + 1) % sites.size()]);
    if (!s) throw Error(ErrorKind::Domain, "coordinate loop leaves the lattice");
    loop.steps.push_back(*s);
  }
  return loop;
}

LoopPath concatenate(const LoopPath& a, const LoopPath& b) {
  if (a.base != b.base) throw Error(ErrorKind::Domain, "loops do not share a base site");
  LoopPath out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

LoopPath reverse(const LoopPath& loop) {
  LoopPath out;
  out.base = loop.base;
  for (auto it = loop.steps.rbegin(); it != loop.steps.rend(); ++it) {
    out.steps.push_back({it->link, !it->forward});
  }
  return out;
}

}  // namespace realbloch
