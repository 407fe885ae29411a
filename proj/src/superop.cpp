#include "qeq/superop.hpp"

#include <cstdint>

namespace qeq {

namespace {

// Parallelizing tiny tables costs more than it saves.
constexpr std::size_t kParallelThreshold = 64;

void fill_kraus(Superoperator& out, const ComplexMatrix& k, bool parallel) {
  const std::size_t d = out.src_dim();
  const ComplexMatrix kd = k.adjoint();
  const std::int64_t total = static_cast<std::int64_t>(d) * static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(static) if (parallel && total >= (std::int64_t)kParallelThreshold)
  for (std::int64_t u = 0; u < total; ++u) {
    std::size_t i = static_cast<std::size_t>(u) / d;
    std::size_t j = static_cast<std::size_t>(u) % d;
    // K E_ij K† = (col i of K) (row j of K†)
    ComplexMatrix m(out.dst_dim(), out.dst_dim());
    for (std::size_t r = 0; r < out.dst_dim(); ++r) {
      cplx ki = k.at(r, i);
      if (ki == cplx(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < out.dst_dim(); ++c) m.at(r, c) = ki * kd.at(j, c);
    }
    out.image_flat(static_cast<std::size_t>(u)) = std::move(m);
  }
}

void fill_compose(Superoperator& out, const Superoperator& g, const Superoperator& f,
                  bool parallel) {
  const std::size_t d1 = f.src_dim();
  const std::size_t dm = f.dst_dim();
  const std::int64_t total = static_cast<std::int64_t>(d1) * static_cast<std::int64_t>(d1);
#pragma omp parallel for schedule(static) if (parallel && total >= (std::int64_t)kParallelThreshold)
  for (std::int64_t u = 0; u < total; ++u) {
    const ComplexMatrix& mid = f.image_flat(static_cast<std::size_t>(u));
    ComplexMatrix acc(g.dst_dim(), g.dst_dim());
    for (std::size_t k = 0; k < dm; ++k) {
      for (std::size_t l = 0; l < dm; ++l) {
        cplx w = mid.at(k, l);
        if (w == cplx(0.0, 0.0)) continue;
        const ComplexMatrix& gk = g.image(k, l);
        for (std::size_t r = 0; r < g.dst_dim(); ++r)
          for (std::size_t c = 0; c < g.dst_dim(); ++c) acc.at(r, c) += w * gk.at(r, c);
      }
    }
    out.image_flat(static_cast<std::size_t>(u)) = std::move(acc);
  }
}

void fill_tensor(Superoperator& out, const Superoperator& f, const Superoperator& g,
                 bool parallel) {
  const std::size_t df = f.src_dim();
  const std::size_t dg = g.src_dim();
  const std::size_t d = df * dg;
  const std::int64_t total = static_cast<std::int64_t>(d) * static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(static) if (parallel && total >= (std::int64_t)kParallelThreshold)
  for (std::int64_t u = 0; u < total; ++u) {
    std::size_t row = static_cast<std::size_t>(u) / d;
    std::size_t col = static_cast<std::size_t>(u) % d;
    std::size_t i = row / dg, k = row % dg;
    std::size_t j = col / dg, l = col % dg;
    out.image_flat(static_cast<std::size_t>(u)) = kron(f.image(i, j), g.image(k, l));
  }
}

}  // namespace

Superoperator::Superoperator(QType src, QType dst) : src_(std::move(src)), dst_(std::move(dst)) {
  std::size_t d = src_.dim();
  table_.assign(d * d, ComplexMatrix(dst_.dim(), dst_.dim()));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != src_dim() || rho.cols() != src_dim())
    throw dim_error("superoperator input has wrong shape");
  ComplexMatrix out(dst_dim(), dst_dim());
  for (std::size_t i = 0; i < src_dim(); ++i)
    for (std::size_t j = 0; j < src_dim(); ++j) {
      cplx w = rho.at(i, j);
      if (w == cplx(0.0, 0.0)) continue;
      const ComplexMatrix& m = image(i, j);
      for (std::size_t r = 0; r < dst_dim(); ++r)
        for (std::size_t c = 0; c < dst_dim(); ++c) out.at(r, c) += w * m.at(r, c);
    }
  return out;
}

Superoperator Superoperator::recast(QType src, QType dst) const {
  if (src.dim() != src_dim() || dst.dim() != dst_dim())
    throw dim_error("recast changes dimensions");
  Superoperator out(std::move(src), std::move(dst));
  out.table_ = table_;
  return out;
}

ComplexMatrix Superoperator::choi() const {
  std::size_t di = src_dim(), dq = dst_dim();
  ComplexMatrix c(di * dq, di * dq);
  for (std::size_t i = 0; i < di; ++i)
    for (std::size_t j = 0; j < di; ++j) {
      const ComplexMatrix& m = image(i, j);
      for (std::size_t r = 0; r < dq; ++r)
        for (std::size_t s = 0; s < dq; ++s) c.at(i * dq + r, j * dq + s) = m.at(r, s);
    }
  return c;
}

ComplexMatrix Superoperator::trace_functional() const {
  std::size_t d = src_dim();
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m.at(j, i) = image(i, j).trace();
  return m;
}

bool Superoperator::is_trace_nonincreasing(double tol) const {
  if (src_dim() == 0) return true;
  ComplexMatrix m = trace_functional();
  // Hermitize against roundoff before the eigen bound.
  ComplexMatrix h = m + m.adjoint();
  h = h.scaled(0.5);
  auto eigs = hermitian_eigenvalues(h);
  return eigs.empty() || eigs.back() <= 1.0 + tol;
}

bool Superoperator::is_completely_positive(double tol) const {
  if (src_dim() == 0 || dst_dim() == 0) return true;
  ComplexMatrix c = choi();
  ComplexMatrix h = c + c.adjoint();
  h = h.scaled(0.5);
  return min_eigenvalue(h, tol) >= -tol;
}

Superoperator superop_identity(QType t) {
  Superoperator s(t, t);
  std::size_t d = t.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s.image(i, j) = ComplexMatrix::unit(d, i, j);
  return s;
}

Superoperator superop_zero(QType src, QType dst) { return Superoperator(src, dst); }

Superoperator superop_from_kraus(const ComplexMatrix& k, QType src, QType dst) {
  if (k.cols() != src.dim() || k.rows() != dst.dim())
    throw dim_error("kraus operator shape does not match types");
  Superoperator out(std::move(src), std::move(dst));
  fill_kraus(out, k, true);
  return out;
}

Superoperator superop_from_unitary(const ComplexMatrix& u, QType src, QType dst) {
  if (!u.is_square() || !is_unitary(u, 1e-9))
    throw dim_error("superop_from_unitary: matrix is not unitary");
  return superop_from_kraus(u, std::move(src), std::move(dst));
}

Superoperator superop_compose(const Superoperator& g, const Superoperator& f) {
  // Density spaces are identified by dimension (the strict-monoidal
  // bookkeeping); composition only needs the dims to meet.
  if (f.dst_dim() != g.src_dim()) throw dim_error("superop_compose: type mismatch");
  Superoperator out(f.src(), g.dst());
  fill_compose(out, g, f, true);
  return out;
}

Superoperator superop_tensor(const Superoperator& f, const Superoperator& g) {
  Superoperator out(QType::tensor(f.src(), g.src()), QType::tensor(f.dst(), g.dst()));
  fill_tensor(out, f, g, true);
  return out;
}

Superoperator superop_sum(const std::vector<Superoperator>& fs) {
  if (fs.empty()) throw dim_error("superop_sum of nothing");
  Superoperator out = fs.front();
  for (std::size_t n = 1; n < fs.size(); ++n) {
    const Superoperator& f = fs[n];
    if (f.src_dim() != out.src_dim() || f.dst_dim() != out.dst_dim())
      throw dim_error("superop_sum: shape mismatch");
    for (std::size_t u = 0; u < out.table_size(); ++u)
      out.image_flat(u) = out.image_flat(u) + f.image_flat(u);
  }
  return out;
}

bool superop_equal(const Superoperator& f, const Superoperator& g, double tol) {
  if (f.src_dim() != g.src_dim() || f.dst_dim() != g.dst_dim())
    throw dim_error("superop_equal: shape mismatch");
  return superop_max_diff(f, g).value <= tol;
}

SuperopDiff superop_max_diff(const Superoperator& f, const Superoperator& g) {
  if (f.src_dim() != g.src_dim() || f.dst_dim() != g.dst_dim())
    throw dim_error("superop_max_diff: shape mismatch");
  SuperopDiff best;
  std::size_t d = f.src_dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const ComplexMatrix& a = f.image(i, j);
      const ComplexMatrix& b = g.image(i, j);
      for (std::size_t r = 0; r < f.dst_dim(); ++r)
        for (std::size_t c = 0; c < f.dst_dim(); ++c) {
          double v = std::abs(a.at(r, c) - b.at(r, c));
          if (v > best.value) best = {v, i, j, r, c};
        }
    }
  return best;
}

namespace serial {

Superoperator superop_from_kraus(const ComplexMatrix& k, QType src, QType dst) {
  if (k.cols() != src.dim() || k.rows() != dst.dim())
    throw dim_error("kraus operator shape does not match types");
  Superoperator out(std::move(src), std::move(dst));
  fill_kraus(out, k, false);
  return out;
}

Superoperator superop_compose(const Superoperator& g, const Superoperator& f) {
  if (f.dst_dim() != g.src_dim()) throw dim_error("superop_compose: type mismatch");
  Superoperator out(f.src(), g.dst());
  fill_compose(out, g, f, false);
  return out;
}

Superoperator superop_tensor(const Superoperator& f, const Superoperator& g) {
  Superoperator out(QType::tensor(f.src(), g.src()), QType::tensor(f.dst(), g.dst()));
  fill_tensor(out, f, g, false);
  return out;
}

}  // namespace serial

}  // namespace qeq
