#include "strips/frames.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "strips/io.hpp"

namespace strips {

namespace {

// Gauss-Jordan inverse for the small n x n rotation blocks.
std::vector<double> invert_small(std::vector<double> a, int n) {
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(piv) * n + col]))
        piv = r;
    if (std::abs(a[static_cast<std::size_t>(piv) * n + col]) < 1e-300)
      throw std::runtime_error("rotation block singular");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(piv) * n + c],
                  a[static_cast<std::size_t>(col) * n + c]);
        std::swap(inv[static_cast<std::size_t>(piv) * n + c],
                  inv[static_cast<std::size_t>(col) * n + c]);
      }
    const double d = a[static_cast<std::size_t>(col) * n + col];
    for (int c = 0; c < n; ++c) {
      a[static_cast<std::size_t>(col) * n + c] /= d;
      inv[static_cast<std::size_t>(col) * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double m = a[static_cast<std::size_t>(r) * n + col];
      if (m == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[static_cast<std::size_t>(r) * n + c] -= m * a[static_cast<std::size_t>(col) * n + c];
        inv[static_cast<std::size_t>(r) * n + c] -= m * inv[static_cast<std::size_t>(col) * n + c];
      }
    }
  }
  return inv;
}

// One Newton step toward the polar factor: R <- (R + R^{-T})/2. The exact
// rotation flow is orthogonal, so a single step removes the RK4 drift.
void polar_orthogonalize(std::vector<double>& R, int n, int steps = 2) {
  for (int s = 0; s < steps; ++s) {
    const auto inv = invert_small(R, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        R[static_cast<std::size_t>(i) * n + j] =
            0.5 * (R[static_cast<std::size_t>(i) * n + j] +
                   inv[static_cast<std::size_t>(j) * n + i]);
  }
}

// rows: nrows x dim row-major; first row is kept as given (assumed unit).
void mgs_rows_inplace(double* rows, int nrows, int dim) {
  for (int r = 0; r < nrows; ++r) {
    double* vr = rows + static_cast<std::size_t>(r) * dim;
    for (int p = 0; p < r; ++p) {
      const double* vp = rows + static_cast<std::size_t>(p) * dim;
      double proj = 0.0;
      for (int c = 0; c < dim; ++c) proj += vr[c] * vp[c];
      for (int c = 0; c < dim; ++c) vr[c] -= proj * vp[c];
    }
    double nrm = 0.0;
    for (int c = 0; c < dim; ++c) nrm += vr[c] * vr[c];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw std::runtime_error("auxiliary frame degenerated in Gram-Schmidt");
    for (int c = 0; c < dim; ++c) vr[c] /= nrm;
  }
}

struct SegmentFrame {
  // local adapted frame M_1..M_n sampled on [ext_start, ext_end]; the extra
  // node beyond each segment end (when the chart still evaluates there)
  // lets every interior joint use central differences
  int ext_start = 0, ext_end = 0;
  std::vector<double> M;      // (ext count)*(n*dim)
  std::vector<double> Atilde; // per segment node, n*n entries a_{rq} = M_r'.M_q
  std::vector<double> avec;   // per segment node, a_r = T'.M_r
};

}  // namespace

double Frame::max_orthonormality_defect() const {
  double worst = 0.0;
  const int nn = n();
  std::vector<const double*> rows(static_cast<std::size_t>(nn) + 1);
  for (int i = 0; i < grid.count; ++i) {
    rows[0] = tangent(i);
    for (int j = 0; j < nn; ++j) rows[j + 1] = normal(j, i);
    for (int r = 0; r <= nn; ++r)
      for (int q = 0; q <= r; ++q) {
        double g = 0.0;
        for (int c = 0; c < dim; ++c) g += rows[r][c] * rows[q][c];
        worst = std::max(worst, std::abs(g - (r == q ? 1.0 : 0.0)));
      }
  }
  return worst;
}

RpafResult build_rpaf(const Curve& curve, const std::vector<double>& initial_normals,
                      int s_index0, const RpafOptions& options) {
  curve.validate(1e-8);
  const int dim = curve.dim;
  const int n = dim - 1;
  const int count = curve.grid.count;
  const double ds = curve.grid.ds;
  if (count < 3) throw std::invalid_argument("build_rpaf: needs at least 3 nodes");
  if (s_index0 < 0 || s_index0 >= count)
    throw std::invalid_argument("build_rpaf: s_index0 out of range");
  if (initial_normals.size() != static_cast<std::size_t>(n) * dim)
    throw std::invalid_argument("build_rpaf: initial normals size mismatch");

  {  // initial data orthonormal and normal to T within 1e-10
    const double* T0 = curve.tangent(s_index0);
    for (int r = 0; r < n; ++r) {
      const double* vr = initial_normals.data() + static_cast<std::size_t>(r) * dim;
      double tdot = 0.0;
      for (int c = 0; c < dim; ++c) tdot += vr[c] * T0[c];
      if (std::abs(tdot) > 1e-10)
        throw std::invalid_argument("build_rpaf: initial normals not orthogonal to T");
      for (int q = 0; q <= r; ++q) {
        const double* vq = initial_normals.data() + static_cast<std::size_t>(q) * dim;
        double g = 0.0;
        for (int c = 0; c < dim; ++c) g += vr[c] * vq[c];
        if (std::abs(g - (r == q ? 1.0 : 0.0)) > 1e-10)
          throw std::invalid_argument("build_rpaf: initial normals not orthonormal");
      }
    }
  }

  // --- chart plan: segments [start,end] sharing joint nodes -----------------
  const double threshold = 1.0 / (2.0 * dim);
  ChartPlan plan;
  plan.switch_threshold = threshold;
  {
    int start = 0;
    while (start < count - 1) {
      const double* T = curve.tangent(start);
      int axis = 0;
      for (int c = 1; c < dim; ++c)
        if (std::abs(T[c]) > std::abs(T[axis])) axis = c;  // lowest index wins ties
      int end = start;
      while (end + 1 < count) {
        const double* Tn = curve.tangent(end + 1);
        if (Tn[axis] * Tn[axis] < threshold) break;
        if (options.max_segment_nodes > 0 && (end + 1 - start) >= options.max_segment_nodes) break;
        ++end;
      }
      if (end == start) {
        // chart invalid already at the next node: make a minimal two-node
        // segment; the chart at `start` is valid there by selection
        end = start + 1;
        const double* Tn = curve.tangent(end);
        if (Tn[axis] * Tn[axis] < threshold && Tn[axis] == 0.0)
          throw std::runtime_error("build_rpaf: chart degenerates between adjacent nodes");
      }
      plan.segments.push_back({start, end, axis});
      start = end;
    }
    if (plan.segments.empty()) plan.segments.push_back({0, count - 1, 0});
  }

  // --- per-segment local adapted frames and their rotation coefficients -----
  auto build_segment = [&](const ChartPlan::Segment& seg) {
    SegmentFrame sf;
    // extend up to two nodes past each end while the chart still evaluates
    // there; interior joints then get full-width central stencils
    sf.ext_start = seg.start;
    sf.ext_end = seg.end;
    for (int e = 0; e < 2; ++e) {
      if (sf.ext_start > 0 && std::abs(curve.tangent(sf.ext_start - 1)[seg.axis]) > 1e-6)
        --sf.ext_start;
      if (sf.ext_end + 1 < count && std::abs(curve.tangent(sf.ext_end + 1)[seg.axis]) > 1e-6)
        ++sf.ext_end;
    }
    const int ext_len = sf.ext_end - sf.ext_start + 1;
    sf.M.assign(static_cast<std::size_t>(ext_len) * n * dim, 0.0);
    sf.Atilde.assign(static_cast<std::size_t>(ext_len) * n * n, 0.0);
    sf.avec.assign(static_cast<std::size_t>(ext_len) * n, 0.0);

    std::vector<double> rows(static_cast<std::size_t>(dim) * dim);
    for (int l = 0; l < ext_len; ++l) {
      const int i = sf.ext_start + l;
      const double* T = curve.tangent(i);
      // auxiliary normals from the chart axis J: for each other coordinate c,
      // the vector with T_J in slot c and -T_c in slot J
      for (int c = 0; c < dim; ++c) rows[c] = T[c];
      int r = 0;
      for (int c = 0; c < dim; ++c) {
        if (c == seg.axis) continue;
        double* v = rows.data() + static_cast<std::size_t>(r + 1) * dim;
        std::fill(v, v + dim, 0.0);
        const double nrm = std::sqrt(T[seg.axis] * T[seg.axis] + T[c] * T[c]);
        v[c] = T[seg.axis] / nrm;
        v[seg.axis] = -T[c] / nrm;
        ++r;
      }
      mgs_rows_inplace(rows.data(), dim, dim);
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < dim; ++c)
          sf.M[(static_cast<std::size_t>(l) * n + j) * dim + c] =
              rows[static_cast<std::size_t>(j + 1) * dim + c];
    }

    // a_{rq} = M_r'.M_q and a_r = T'.M_r by finite differences; fourth-order
    // central wherever the extension allows, degrading gracefully at the
    // range ends (which sit beyond the segment or at the curve ends)
    auto Mrow = [&](int i, int j) {
      return sf.M.data() +
             (static_cast<std::size_t>(i - sf.ext_start) * n + j) * dim;
    };
    auto deriv_at = [&](int i, int c, auto&& value) {
      if (i - 2 >= sf.ext_start && i + 2 <= sf.ext_end)
        return (-value(i + 2, c) + 8.0 * value(i + 1, c) - 8.0 * value(i - 1, c) +
                value(i - 2, c)) /
               (12.0 * ds);
      if (i - 1 >= sf.ext_start && i + 1 <= sf.ext_end)
        return (value(i + 1, c) - value(i - 1, c)) / (2.0 * ds);
      if (i == sf.ext_start && sf.ext_end - sf.ext_start >= 2)
        return (-3.0 * value(i, c) + 4.0 * value(i + 1, c) - value(i + 2, c)) / (2.0 * ds);
      if (i == sf.ext_end && sf.ext_end - sf.ext_start >= 2)
        return (3.0 * value(i, c) - 4.0 * value(i - 1, c) + value(i - 2, c)) / (2.0 * ds);
      return (value(sf.ext_end, c) - value(sf.ext_start, c)) / (ds * (sf.ext_end - sf.ext_start));
    };

    std::vector<double> dM(dim), dT(dim);
    for (int i = sf.ext_start; i <= sf.ext_end; ++i) {
      const int l = i - sf.ext_start;
      for (int j = 0; j < n; ++j) {
        for (int c = 0; c < dim; ++c)
          dM[c] = deriv_at(i, c, [&](int ii, int cc) { return Mrow(ii, j)[cc]; });
        for (int q = 0; q < n; ++q) {
          double a = 0.0;
          for (int c = 0; c < dim; ++c) a += dM[c] * Mrow(i, q)[c];
          sf.Atilde[(static_cast<std::size_t>(l) * n + j) * n + q] = a;
        }
      }
      // T' at node i from the global curve samples
      for (int c = 0; c < dim; ++c) {
        if (i - 2 >= 0 && i + 2 < count)
          dT[c] = (-curve.tangent(i + 2)[c] + 8.0 * curve.tangent(i + 1)[c] -
                   8.0 * curve.tangent(i - 1)[c] + curve.tangent(i - 2)[c]) /
                  (12.0 * ds);
        else if (i > 0 && i + 1 < count)
          dT[c] = (curve.tangent(i + 1)[c] - curve.tangent(i - 1)[c]) / (2.0 * ds);
        else if (i == 0)
          dT[c] = (-3.0 * curve.tangent(0)[c] + 4.0 * curve.tangent(1)[c] -
                   curve.tangent(2)[c]) /
                  (2.0 * ds);
        else
          dT[c] = (3.0 * curve.tangent(i)[c] - 4.0 * curve.tangent(i - 1)[c] +
                   curve.tangent(i - 2)[c]) /
                  (2.0 * ds);
      }
      for (int j = 0; j < n; ++j) {
        double a = 0.0;
        for (int c = 0; c < dim; ++c) a += dT[c] * Mrow(i, j)[c];
        sf.avec[static_cast<std::size_t>(l) * n + j] = a;
      }
    }

    // A is skew-symmetric for the exact frame; enforce it on the samples
    for (int l = 0; l < ext_len; ++l)
      for (int j = 0; j < n; ++j)
        for (int q = 0; q < j; ++q) {
          double& ajq = sf.Atilde[(static_cast<std::size_t>(l) * n + j) * n + q];
          double& aqj = sf.Atilde[(static_cast<std::size_t>(l) * n + q) * n + j];
          const double v = 0.5 * (ajq - aqj);
          ajq = v;
          aqj = -v;
        }
    return sf;
  };

  std::vector<SegmentFrame> segs;
  segs.reserve(plan.segments.size());
  for (const auto& s : plan.segments) segs.push_back(build_segment(s));

  // --- rotation ODE R' = -R A per segment, RK4 + polar cleanup --------------
  Frame frame;
  frame.grid = curve.grid;
  frame.dim = dim;
  frame.T = curve.tangents;
  frame.N.assign(n, std::vector<double>(static_cast<std::size_t>(count) * dim, 0.0));
  frame.k.grid = curve.grid;
  frame.k.n = n;
  frame.k.k.assign(static_cast<std::size_t>(count) * n, 0.0);

  auto store_node = [&](int seg_id, int node, const std::vector<double>& R) {
    const auto& sf = segs[seg_id];
    const int l = node - sf.ext_start;
    auto Mrow = [&](int j) {
      return sf.M.data() + (static_cast<std::size_t>(l) * n + j) * dim;
    };
    for (int j = 0; j < n; ++j) {
      double* out = frame.N[j].data() + static_cast<std::size_t>(node) * dim;
      std::fill(out, out + dim, 0.0);
      for (int q = 0; q < n; ++q) {
        const double r = R[static_cast<std::size_t>(j) * n + q];
        const double* m = Mrow(q);
        for (int c = 0; c < dim; ++c) out[c] += r * m[c];
      }
    }
    // k = R a
    for (int j = 0; j < n; ++j) {
      double kk = 0.0;
      for (int q = 0; q < n; ++q)
        kk += R[static_cast<std::size_t>(j) * n + q] * sf.avec[static_cast<std::size_t>(l) * n + q];
      frame.k.k[static_cast<std::size_t>(node) * n + j] = kk;
    }
  };

  const std::size_t rsz = static_cast<std::size_t>(n) * n;
  auto matmul_RA = [&](const std::vector<double>& R, const double* A, std::vector<double>& out) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int q = 0; q < n; ++q)
          s += R[static_cast<std::size_t>(i) * n + q] * A[static_cast<std::size_t>(q) * n + j];
        out[static_cast<std::size_t>(i) * n + j] = -s;
      }
  };

  // one RK4 step from node `from` to node `to` (adjacent) inside segment
  auto rk4_step = [&](int seg_id, int from, int to, std::vector<double>& R) {
    const auto& sf = segs[seg_id];
    const double h = (to - from) * ds;
    const int la = from - sf.ext_start;
    const int lb = to - sf.ext_start;
    const double* Aa = sf.Atilde.data() + static_cast<std::size_t>(la) * rsz;
    const double* Ab = sf.Atilde.data() + static_cast<std::size_t>(lb) * rsz;
    // midpoint by cubic interpolation when the outer neighbors exist
    const int lo = std::min(la, lb), hi = std::max(la, lb);
    std::vector<double> Am(rsz);
    if (lo - 1 >= 0 && hi + 1 <= sf.ext_end - sf.ext_start) {
      const double* Al = sf.Atilde.data() + static_cast<std::size_t>(lo - 1) * rsz;
      const double* Ar = sf.Atilde.data() + static_cast<std::size_t>(hi + 1) * rsz;
      const double* A0 = sf.Atilde.data() + static_cast<std::size_t>(lo) * rsz;
      const double* A1 = sf.Atilde.data() + static_cast<std::size_t>(hi) * rsz;
      for (std::size_t q = 0; q < rsz; ++q)
        Am[q] = (-Al[q] + 9.0 * A0[q] + 9.0 * A1[q] - Ar[q]) / 16.0;
    } else {
      for (std::size_t q = 0; q < rsz; ++q) Am[q] = 0.5 * (Aa[q] + Ab[q]);
    }

    std::vector<double> k1(rsz), k2(rsz), k3(rsz), k4(rsz), tmp(rsz);
    matmul_RA(R, Aa, k1);
    for (std::size_t q = 0; q < rsz; ++q) tmp[q] = R[q] + 0.5 * h * k1[q];
    matmul_RA(tmp, Am.data(), k2);
    for (std::size_t q = 0; q < rsz; ++q) tmp[q] = R[q] + 0.5 * h * k2[q];
    matmul_RA(tmp, Am.data(), k3);
    for (std::size_t q = 0; q < rsz; ++q) tmp[q] = R[q] + h * k3[q];
    matmul_RA(tmp, Ab, k4);
    for (std::size_t q = 0; q < rsz; ++q)
      R[q] += (h / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
    polar_orthogonalize(R, n, 1);
  };

  // R coefficients of known normals N at a node in the segment's local frame
  auto coeffs_at = [&](int seg_id, int node, const double* normals /*n x dim*/) {
    const auto& sf = segs[seg_id];
    std::vector<double> R(rsz, 0.0);
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) {
        const double* m =
            sf.M.data() + (static_cast<std::size_t>(node - sf.ext_start) * n + q) * dim;
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += normals[static_cast<std::size_t>(j) * dim + c] * m[c];
        R[static_cast<std::size_t>(j) * n + q] = s;
      }
    polar_orthogonalize(R, n, 2);
    return R;
  };

  const int nseg = static_cast<int>(plan.segments.size());
  int seg0 = 0;
  for (int s = 0; s < nseg; ++s)
    if (plan.segments[s].start <= s_index0 && s_index0 <= plan.segments[s].end) {
      seg0 = s;
      break;
    }

  // anchor segment: integrate both directions from s_index0
  {
    std::vector<double> R = coeffs_at(seg0, s_index0, initial_normals.data());
    std::vector<double> Rf = R;
    store_node(seg0, s_index0, Rf);
    for (int i = s_index0; i < plan.segments[seg0].end; ++i) {
      rk4_step(seg0, i, i + 1, Rf);
      store_node(seg0, i + 1, Rf);
    }
    std::vector<double> Rb = R;
    for (int i = s_index0; i > plan.segments[seg0].start; --i) {
      rk4_step(seg0, i, i - 1, Rb);
      store_node(seg0, i - 1, Rb);
    }
  }

  std::vector<double> joint(static_cast<std::size_t>(n) * dim);
  auto load_joint = [&](int node) {
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < dim; ++c)
        joint[static_cast<std::size_t>(j) * dim + c] =
            frame.N[j][static_cast<std::size_t>(node) * dim + c];
  };

  // rightward segments, matched at the shared joint node
  for (int s = seg0 + 1; s < nseg; ++s) {
    const int p = plan.segments[s].start;
    load_joint(p);
    std::vector<double> R = coeffs_at(s, p, joint.data());
    for (int i = p; i < plan.segments[s].end; ++i) {
      rk4_step(s, i, i + 1, R);
      store_node(s, i + 1, R);
    }
  }
  // leftward segments
  for (int s = seg0 - 1; s >= 0; --s) {
    const int q = plan.segments[s].end;
    load_joint(q);
    std::vector<double> R = coeffs_at(s, q, joint.data());
    for (int i = q; i > plan.segments[s].start; --i) {
      rk4_step(s, i, i - 1, R);
      store_node(s, i - 1, R);
    }
  }

  // the prescribed initial data holds exactly at the anchor node
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < dim; ++c)
      frame.N[j][static_cast<std::size_t>(s_index0) * dim + c] =
          initial_normals[static_cast<std::size_t>(j) * dim + c];

  return {std::move(frame), std::move(plan)};
}

std::vector<double> default_initial_normals(const Curve& curve, int s_index0) {
  const int dim = curve.dim;
  const double* T = curve.tangent(s_index0);
  // drop the coordinate axis most parallel to T, Gram-Schmidt the rest
  int drop = 0;
  for (int c = 1; c < dim; ++c)
    if (std::abs(T[c]) > std::abs(T[drop])) drop = c;
  std::vector<double> rows(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int c = 0; c < dim; ++c) rows[c] = T[c];
  int r = 1;
  for (int c = 0; c < dim; ++c) {
    if (c == drop) continue;
    rows[static_cast<std::size_t>(r) * dim + c] = 1.0;
    ++r;
  }
  mgs_rows_inplace(rows.data(), dim, dim);
  return {rows.begin() + dim, rows.end()};
}

FrenetFrame2D frenet_frame_2d(const Curve& curve) {
  curve.validate();
  if (curve.dim != 2) throw std::invalid_argument("frenet_frame_2d: dim must be 2");
  const int count = curve.grid.count;
  const double ds = curve.grid.ds;
  FrenetFrame2D f;
  f.grid = curve.grid;
  f.normal.resize(static_cast<std::size_t>(count) * 2);
  f.signed_curvature.resize(count);
  for (int i = 0; i < count; ++i) {
    const double* t = curve.tangent(i);
    f.normal[static_cast<std::size_t>(i) * 2] = -t[1];
    f.normal[static_cast<std::size_t>(i) * 2 + 1] = t[0];
  }
  auto dT = [&](int i, int c) {
    if (i > 0 && i + 1 < count)
      return (curve.tangent(i + 1)[c] - curve.tangent(i - 1)[c]) / (2.0 * ds);
    if (i == 0)
      return (-3.0 * curve.tangent(0)[c] + 4.0 * curve.tangent(1)[c] - curve.tangent(2)[c]) /
             (2.0 * ds);
    return (3.0 * curve.tangent(i)[c] - 4.0 * curve.tangent(i - 1)[c] +
            curve.tangent(i - 2)[c]) /
           (2.0 * ds);
  };
  for (int i = 0; i < count; ++i) {
    const double* nv = f.normal.data() + static_cast<std::size_t>(i) * 2;
    f.signed_curvature[i] = dT(i, 0) * nv[0] + dT(i, 1) * nv[1];
  }
  return f;
}

FrenetFrame3D frenet_frame_3d(const Curve& curve, double kappa_min) {
  curve.validate();
  if (curve.dim != 3) throw std::invalid_argument("frenet_frame_3d: dim must be 3");
  const int count = curve.grid.count;
  const double ds = curve.grid.ds;
  if (count < 3) throw std::invalid_argument("frenet_frame_3d: needs at least 3 nodes");

  FrenetFrame3D f;
  f.grid = curve.grid;
  f.T = curve.tangents;
  f.M1.resize(static_cast<std::size_t>(count) * 3);
  f.M2.resize(static_cast<std::size_t>(count) * 3);
  f.kappa.resize(count);
  f.tau.resize(count);

  auto deriv = [&](const std::vector<double>& field, int i, int c) {
    const auto at = [&](int idx) { return field[static_cast<std::size_t>(idx) * 3 + c]; };
    if (i > 0 && i + 1 < count) return (at(i + 1) - at(i - 1)) / (2.0 * ds);
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * ds);
    return (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * ds);
  };

  for (int i = 0; i < count; ++i) {
    double d[3];
    for (int c = 0; c < 3; ++c) d[c] = deriv(f.T, i, c);
    const double kap = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (kap <= kappa_min)
      throw std::invalid_argument("frenet_frame_3d: vanishing curvature, Frenet frame undefined");
    f.kappa[i] = kap;
    for (int c = 0; c < 3; ++c) f.M1[static_cast<std::size_t>(i) * 3 + c] = d[c] / kap;
    const double* t = f.T.data() + static_cast<std::size_t>(i) * 3;
    const double* m1 = f.M1.data() + static_cast<std::size_t>(i) * 3;
    double* m2 = f.M2.data() + static_cast<std::size_t>(i) * 3;
    m2[0] = t[1] * m1[2] - t[2] * m1[1];
    m2[1] = t[2] * m1[0] - t[0] * m1[2];
    m2[2] = t[0] * m1[1] - t[1] * m1[0];
  }
  // tau from M1' = -kappa T + tau M2
  for (int i = 0; i < count; ++i) {
    double d[3];
    for (int c = 0; c < 3; ++c) d[c] = deriv(f.M1, i, c);
    const double* m2 = f.M2.data() + static_cast<std::size_t>(i) * 3;
    f.tau[i] = d[0] * m2[0] + d[1] * m2[1] + d[2] * m2[2];
  }
  return f;
}

CurvatureVector curvature_from_frame(const Frame& frame) {
  const int count = frame.grid.count;
  const int n = frame.n();
  const int dim = frame.dim;
  const double ds = frame.grid.ds;
  if (count < 3) throw std::invalid_argument("curvature_from_frame: needs at least 3 nodes");

  CurvatureVector kv;
  kv.grid = frame.grid;
  kv.n = n;
  kv.k.assign(static_cast<std::size_t>(count) * n, 0.0);

  auto dT = [&](int i, int c) {
    const auto at = [&](int idx) { return frame.T[static_cast<std::size_t>(idx) * dim + c]; };
    if (i > 0 && i + 1 < count) return (at(i + 1) - at(i - 1)) / (2.0 * ds);
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * ds);
    return (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * ds);
  };

  for (int i = 0; i < count; ++i)
    for (int j = 0; j < n; ++j) {
      const double* nv = frame.normal(j, i);
      double s = 0.0;
      for (int c = 0; c < dim; ++c) s += dT(i, c) * nv[c];
      kv.k[static_cast<std::size_t>(i) * n + j] = s;
    }
  return kv;
}

void write_frame_csv(const Frame& frame, const std::string& path) {
  const int n = frame.n();
  std::ostringstream header;
  header << "s";
  for (int c = 0; c < frame.dim; ++c) header << ",t" << c;
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < frame.dim; ++c) header << ",n" << (j + 1) << "_" << c;
  for (int j = 0; j < n; ++j) header << ",k" << (j + 1);

  io::Table tab;
  tab.header = header.str();
  for (int i = 0; i < frame.grid.count; ++i) {
    std::vector<double> row;
    row.push_back(frame.grid.node(i));
    for (int c = 0; c < frame.dim; ++c) row.push_back(frame.tangent(i)[c]);
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < frame.dim; ++c) row.push_back(frame.normal(j, i)[c]);
    for (int j = 0; j < n; ++j) row.push_back(frame.k.at(i)[j]);
    tab.rows.push_back(std::move(row));
  }
  io::write_csv(tab, path);
}

std::string chart_plan_json(const ChartPlan& plan) {
  std::ostringstream os;
  os << "{\"switch_threshold\":" << io::format_g17(plan.switch_threshold) << ",\"segments\":[";
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    const auto& s = plan.segments[i];
    if (i) os << ",";
    os << "{\"start\":" << s.start << ",\"end\":" << s.end << ",\"axis\":" << s.axis << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace strips
