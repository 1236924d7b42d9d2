#pragma once

#include "realbloch/common.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace realbloch {

enum class Topology { Circle, Torus2, Sphere2 };

enum class InvolutionKind {
  Trivial,     // identity
  Reflection,  // circle: theta -> -theta
  Antipodal,   // circle: theta -> theta + pi
  Eta,         // torus: (t1, t2) -> (t1, -t2)
  EtaFirst,    // torus: (t1, t2) -> (-t1, t2)
  Xi,          // torus: (z1, z2) -> (z1, z1 conj(z2))
  Kappa,       // sphere: azimuth -> -azimuth
};

const char* to_string(Topology t);
const char* to_string(InvolutionKind k);

struct Link {
  int from = 0;
  int to = 0;
  int direction = 0;
  double spacing = 0.0;  // coordinate length of the link
};

/// A link traversed either along (forward) or against its stored direction.
struct Step {
  int link = 0;
  bool forward = true;
  bool operator==(const Step&) const = default;
};

/// Closed sequence of steps. The plaquette boundaries use the same type.
struct LoopPath {
  std::vector<Step> steps;
  int base = 0;
};

struct LinkImage {
  int link = 0;
  bool reversed = false;
};

struct PlaquetteImage {
  int plaquette = 0;
  bool reversed = false;
};

/// Discretized closed base manifold with an involution realized as an exact
/// site permutation. Immutable after construction.
class InvolutiveLattice {
 public:
  Topology topology() const { return topology_; }
  InvolutionKind involution_kind() const { return kind_; }
  /// Tag such as "circle-trivial", "torus2-eta", "sphere2".
  std::string base_tag() const;
  int dimension() const { return topology_ == Topology::Circle ? 1 : 2; }
  const std::vector<int>& sizes() const { return sizes_; }

  int site_count() const { return static_cast<int>(sites_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  int plaquette_count() const { return static_cast<int>(plaquettes_.size()); }

  const Point& site(int i) const { return sites_.at(static_cast<std::size_t>(i)); }
  const std::vector<Point>& sites() const { return sites_; }
  const Link& link(int l) const { return links_.at(static_cast<std::size_t>(l)); }
  const std::vector<Link>& links() const { return links_; }
  const LoopPath& plaquette(int p) const { return plaquettes_.at(static_cast<std::size_t>(p)); }
  const std::vector<LoopPath>& plaquettes() const { return plaquettes_; }

  int involution(int site) const { return involution_.at(static_cast<std::size_t>(site)); }
  const std::vector<int>& involution() const { return involution_; }
  LinkImage link_image(int l) const { return link_images_.at(static_cast<std::size_t>(l)); }
  PlaquetteImage plaquette_image(int p) const {
    return plaquette_images_.at(static_cast<std::size_t>(p));
  }
  const std::vector<int>& fixed_sites() const { return fixed_sites_; }
  bool orientation_flip() const { return orientation_flip_; }

  int step_from(const Step& s) const { return s.forward ? link(s.link).from : link(s.link).to; }
  int step_to(const Step& s) const { return s.forward ? link(s.link).to : link(s.link).from; }
  std::optional<Step> find_step(int from, int to) const;

  /// Embedding in R^3 for the sphere: (x0, x1, x2) with x0 = cos(polar).
  std::array<double, 3> cartesian(int site) const;
  /// Centroid of a plaquette in site coordinates (angle-aware average).
  Point plaquette_center(int p) const;
  /// Midpoint of a link in site coordinates, unwrapped across the periodic cut.
  Point link_midpoint(int l) const;
  /// Coordinate displacement to - from of a link, wrapped to (-pi, pi].
  Point link_displacement(int l) const;

  /// Throws Domain if the loop is not a closed walk on this lattice.
  void validate(const LoopPath& loop) const;

  friend InvolutiveLattice build_circle(int, InvolutionKind);
  friend InvolutiveLattice build_torus2(int, int, InvolutionKind);
  friend InvolutiveLattice build_sphere2(int, int);

 private:
  void add_link(int from, int to, int direction, double spacing);
  void finalize(std::vector<int> involution);
  void add_plaquette(std::initializer_list<int> corners);

  Topology topology_ = Topology::Circle;
  InvolutionKind kind_ = InvolutionKind::Trivial;
  std::vector<int> sizes_;
  std::vector<Point> sites_;
  std::vector<Link> links_;
  std::vector<LoopPath> plaquettes_;
  std::vector<int> involution_;
  std::vector<LinkImage> link_images_;
  std::vector<PlaquetteImage> plaquette_images_;
  std::vector<int> fixed_sites_;
  bool orientation_flip_ = false;
  std::unordered_map<long long, int> link_lookup_;
};

/// kind is one of Trivial, Reflection, Antipodal. n_sites >= 4, even unless trivial.
InvolutiveLattice build_circle(int n_sites, InvolutionKind kind);

/// kind is one of Trivial, Eta, EtaFirst, Xi. Sizes >= 4 and even; Xi needs n1 == n2.
/// For Xi the grid is laid out along the lattice basis (2,1), (1,1) of the
/// angle torus and triangulated, so that the involution permutes links.
InvolutiveLattice build_torus2(int n1, int n2, InvolutionKind kind);

/// n_theta polar intervals (n_theta - 1 rings plus two pole sites), n_phi
/// azimuthal sites per ring. Pole caps are triangles.
InvolutiveLattice build_sphere2(int n_theta, int n_phi);

/// Maximal cycles of involution-fixed links. For the trivial involution on a
/// torus the whole surface is fixed; the two coordinate cycles through site 0
/// are returned instead.
std::vector<LoopPath> fixed_loops(const InvolutiveLattice& lat);

/// Image of a loop under the involution, step by step.
LoopPath map_loop(const InvolutiveLattice& lat, const LoopPath& loop);

/// Closed coordinate loops used by tests and reports.
/// circle: the whole circle (index ignored).
/// torus2: direction 0 walks along the first lattice axis at second index
///         `index`; direction 1 walks along the second axis at first index.
/// sphere2: direction 0 is the latitude ring `index` (1-based ring number);
///          direction 1 is the great circle through azimuth columns index and
///          index + n_phi/2.
LoopPath coordinate_loop(const InvolutiveLattice& lat, int direction, int index);

/// Concatenation (first a, then b). Both must share the base site.
LoopPath concatenate(const LoopPath& a, const LoopPath& b);
LoopPath reverse(const LoopPath& loop);

}  // namespace realbloch
