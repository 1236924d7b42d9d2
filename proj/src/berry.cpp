#include "realbloch/berry.hpp"
#include "realbloch/linalg.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace realbloch {

CMatrix step_overlap(const LinkField& u, const Step& s) {
  const CMatrix& m = u.u.at(static_cast<std::size_t>(s.link));
  return s.forward ? m : CMatrix(m.adjoint());
}

LinkField link_field(const Frame& f, const InvolutiveLattice& lat) {
  LinkField out;
  out.rank = f.rank();
  out.u.resize(static_cast<std::size_t>(lat.link_count()));
  linalg::parallel_for(out.u.size(), [&](std::size_t l) {
    const Link& lk = lat.link(static_cast<int>(l));
    const CMatrix overlap = f.columns.at(static_cast<std::size_t>(lk.from)).adjoint() *
                            f.columns.at(static_cast<std::size_t>(lk.to));
    try {
      out.u[l] = linalg::polar_unitary(overlap, kMinOverlapSigma);
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " on link " << l << " (" << lk.from << " -> " << lk.to
         << "); the band group crosses or the lattice is too coarse";
      throw Error(ErrorKind::SingularOverlap, os.str());
    }
  });
  return out;
}

namespace {

// Path-ordered transport exp(-int A) along x(t) = start + t * d, t in [0, 1].
CMatrix segment_transport(const ProductConnectionSpec& spec, const Point& start, const Point& d,
                          int substeps) {
  CMatrix t = CMatrix::Identity(spec.rank, spec.rank);
  const double dt = 1.0 / substeps;
  for (int k = 0; k < substeps; ++k) {
    const double s = (k + 0.5) * dt;
    const Point x{start[0] + s * d[0], start[1] + s * d[1]};
    t = linalg::exp_antihermitian(-dt * spec.form(x, d)) * t;
  }
  return t;
}

}  // namespace

LinkField link_field_from_connection(const ProductConnectionSpec& spec,
                                     const InvolutiveLattice& lat, int substeps) {
  if (substeps < 1) throw Error(ErrorKind::Domain, "substeps must be positive");
  LinkField out;
  out.rank = spec.rank;
  out.product_chart = true;
  out.u.resize(static_cast<std::size_t>(lat.link_count()));
  for (int l = 0; l < lat.link_count(); ++l) {
    const Point mid = lat.link_midpoint(l);
    const Point d = lat.link_displacement(l);
    const Point start{mid[0] - 0.5 * d[0], mid[1] - 0.5 * d[1]};
    out.u[static_cast<std::size_t>(l)] = segment_transport(spec, start, d, substeps).adjoint();
  }
  return out;
}

LocalConnectionForm local_connection_from_links(const LinkField& u, const InvolutiveLattice& lat) {
  LocalConnectionForm out;
  out.rank = u.rank;
  out.product_chart = u.product_chart;
  out.a.resize(u.u.size());
  for (std::size_t l = 0; l < u.u.size(); ++l) {
    try {
      out.a[l] = linalg::log_unitary(u.u[l]) / lat.link(static_cast<int>(l)).spacing;
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " on link " << l;
      throw Error(ErrorKind::BranchCut, os.str());
    }
  }
  return out;
}

LinkField links_from_connection_form(const LocalConnectionForm& a, const InvolutiveLattice& lat) {
  LinkField out;
  out.rank = a.rank;
  out.product_chart = a.product_chart;
  out.u.resize(a.a.size());
  for (std::size_t l = 0; l < a.a.size(); ++l) {
    out.u[l] = linalg::exp_antihermitian(lat.link(static_cast<int>(l)).spacing * a.a[l]);
  }
  return out;
}

double equivariance_residual(const LinkField& u, const SewingField& w,
                             const InvolutiveLattice& lat, int parity) {
  if (parity != 1 && parity != -1) throw Error(ErrorKind::Domain, "parity must be +1 or -1");
  double res = 0.0;
  for (int l = 0; l < lat.link_count(); ++l) {
    const Link& lk = lat.link(l);
    const auto img = lat.link_image(l);
    const CMatrix mapped = step_overlap(u, {img.link, !img.reversed});
    const CMatrix lhs = w.w.at(static_cast<std::size_t>(lk.from)).adjoint() * mapped *
                        w.w.at(static_cast<std::size_t>(lk.to));
    res = std::max(res, (lhs - u.u.at(static_cast<std::size_t>(l)).conjugate()).norm());
  }
  return res;
}

LocalConnectionForm bar_j_map(const LocalConnectionForm& a, const SymmetryData& j,
                              const InvolutiveLattice& lat) {
  LocalConnectionForm out;
  out.rank = a.rank;
  out.product_chart = a.product_chart;
  out.a.resize(a.a.size());
  for (int l = 0; l < lat.link_count(); ++l) {
    const Link& lk = lat.link(l);
    const auto img = lat.link_image(l);
    // A evaluated on the image link traversed from tau(x) to tau(y).
    const CMatrix pulled = img.reversed ? CMatrix(-a.a.at(static_cast<std::size_t>(img.link)))
                                        : a.a.at(static_cast<std::size_t>(img.link));
    const CMatrix& jx = j.j.at(static_cast<std::size_t>(lk.from));
    const CMatrix& jy = j.j.at(static_cast<std::size_t>(lk.to));
    const CMatrix maurer_cartan = linalg::log_unitary(jx.adjoint() * jy) / lk.spacing;
    out.a[static_cast<std::size_t>(l)] = (jx.adjoint() * pulled * jx + maurer_cartan).conjugate();
  }
  return out;
}

LocalConnectionForm average_connection(const LocalConnectionForm& a, const SymmetryData& j,
                                       const InvolutiveLattice& lat) {
  if (!a.product_chart) {
    throw Error(ErrorKind::Unsupported,
                "connection averaging needs a product-bundle chart; Grassmann-Berry "
                "connections are equivariant by construction when J is constant");
  }
  const LocalConnectionForm twisted = bar_j_map(a, j, lat);
  LocalConnectionForm out = a;
  for (std::size_t l = 0; l < out.a.size(); ++l) out.a[l] = 0.5 * (a.a[l] + twisted.a[l]);
  return out;
}

LinkField gauge_transform(const LinkField& u, const std::vector<CMatrix>& g,
                          const InvolutiveLattice& lat) {
  if (g.size() != static_cast<std::size_t>(lat.site_count())) {
    throw Error(ErrorKind::Domain, "gauge field must have one matrix per site");
  }
  for (const auto& m : g) {
    if (linalg::unitarity_residual(m) > 1e-10) throw Error(ErrorKind::Domain, "gauge matrix is not unitary");
  }
  LinkField out = u;
  for (int l = 0; l < lat.link_count(); ++l) {
    const Link& lk = lat.link(l);
    out.u[static_cast<std::size_t>(l)] = g[static_cast<std::size_t>(lk.from)].adjoint() *
                                         u.u[static_cast<std::size_t>(l)] *
                                         g[static_cast<std::size_t>(lk.to)];
  }
  return out;
}

Frame align_gauge(const Frame& f, const std::vector<CMatrix>& reference) {
  Frame out = f;
  for (std::size_t x = 0; x < f.columns.size(); ++x) {
    const CMatrix overlap = f.columns[x].adjoint() * reference.at(x);
    out.columns[x] = f.columns[x] * linalg::polar_unitary(overlap, 0.0);
  }
  return out;
}

void write_connection_csv(std::ostream& os, const LocalConnectionForm& a,
                          const InvolutiveLattice& lat) {
  os << "x,y,direction";
  for (int r = 0; r < a.rank; ++r) {
    for (int c = 0; c < a.rank; ++c) os << ",re_" << r << c << ",im_" << r << c;
  }
  os << '\n' << std::setprecision(17);
  for (int l = 0; l < lat.link_count(); ++l) {
    const Link& lk = lat.link(l);
    const Point& p = lat.site(lk.from);
    os << p[0] << ',' << p[1] << ',' << lk.direction;
    const CMatrix& m = a.a.at(static_cast<std::size_t>(l));
    for (int r = 0; r < a.rank; ++r) {
      for (int c = 0; c < a.rank; ++c) os << ',' << m(r, c).real() << ',' << m(r, c).imag();
    }
    os << '\n';
  }
}

}  // namespace realbloch
