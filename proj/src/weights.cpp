#include "cohn/weights.hpp"

#include "block_system.hpp"

#include <deque>
#include <future>
#include <thread>

namespace cohn {

std::pair<int, int> weight_support(const BoundedComplex& c) {
  if (c.is_zero()) return {INT_MAX, INT_MIN};
  const int a = weight_of_degree(c.lo()), b = weight_of_degree(c.hi());
  return {std::min(a, b), std::max(a, b)};
}

// ---------------------------------------------------------------- decompositions

WeightDecomposition weight_decompose(const BoundedComplex& m, int n) {
  // w<=n is "degrees >= -n": the subcomplex side of the stupid truncation.
  return {n, stupid_truncate(m, degree_of_weight(n)), Homotopy{}};
}

bool verify_weight_decomposition(const BoundedComplex& m, const WeightDecomposition& wd) {
  const Truncation& t = wd.t;
  if (!(t.incl.source() == t.x) || !(t.incl.target() == m)) return false;
  if (!(t.proj.source() == m) || !(t.proj.target() == t.y)) return false;
  if (!t.x.is_zero() && weight_support(t.x).second > wd.n) return false;
  if (!t.y.is_zero() && weight_support(t.y).first < wd.n + 1) return false;
  if (!check_homotopy(t.proj * t.incl, ChainMap::zero(t.x, t.y), wd.composite_null)) return false;
  const ConeResult c = cone(t.incl);
  if (!(c.cone == t.cone_incl.cone)) return false;
  if (!(t.from_cone * t.to_cone == ChainMap::identity(t.y))) return false;
  return check_homotopy(ChainMap::identity(c.cone), t.to_cone * t.from_cone, t.cone_homotopy);
}

std::optional<WeightRange> weight_range(const BoundedComplex& m) {
  if (m.is_zero()) return WeightRange{};
  auto mm = minimize(m);
  if (!mm) return std::nullopt;
  if (mm->model.is_zero()) return WeightRange{};
  auto [lo, hi] = weight_support(mm->model);
  return WeightRange{false, lo, hi};
}

std::optional<bool> holds(const WeightClassQuery& q) {
  auto r = weight_range(q.complex);
  if (!r) return std::nullopt;
  if (r->empty) return true;
  switch (q.claim) {
    case WeightClaim::AtMost: return r->hi <= q.a;
    case WeightClaim::AtLeast: return r->lo >= q.a;
    case WeightClaim::Within: return q.a <= r->lo && r->hi <= q.b;
  }
  return false;
}

// ---------------------------------------------------------------- towers

BoundedComplex layer_complex(const TowerLayer& layer) { return shift(assemble(layer.cert), layer.shift); }

namespace {

struct TowerLayout {
  std::vector<BoundedComplex> layers;
  int lo = 0, hi = -1;
  // offsets[n - lo][k]: first row of layer k in degree n; last entry is the total rank
  std::vector<std::vector<std::size_t>> offsets;

  std::size_t off(int n, std::size_t k) const {
    if (n < lo || n > hi) return 0;
    return offsets[static_cast<std::size_t>(n - lo)][k];
  }
  std::size_t total(int n) const { return off(n, layers.size()); }
};

TowerLayout layout(const CertTower& tower) {
  TowerLayout out;
  bool any = false;
  for (const auto& l : tower.layers) {
    out.layers.push_back(layer_complex(l));
    const BoundedComplex& c = out.layers.back();
    if (c.is_zero()) continue;
    out.lo = any ? std::min(out.lo, c.lo()) : c.lo();
    out.hi = any ? std::max(out.hi, c.hi()) : c.hi();
    any = true;
  }
  for (int n = out.lo; n <= out.hi; ++n) {
    std::vector<std::size_t> o{0};
    for (const auto& c : out.layers) o.push_back(o.back() + c.rank(n));
    out.offsets.push_back(std::move(o));
  }
  return out;
}

std::string tower_block(std::size_t k, std::size_t j, int n) {
  return "glue(" + std::to_string(k + 1) + "," + std::to_string(j + 1) + ") in degree " + std::to_string(n);
}

}  // namespace

BoundedComplex assemble_tower(const SSet& s, const CertTower& tower) {
  const TowerLayout lay = layout(tower);
  for (const auto& [key, comps] : tower.glue) {
    auto [k, j] = key;
    if (!(k < j && j < tower.layers.size()))
      throw DomainError("malformed tower: glue(" + std::to_string(k + 1) + "," + std::to_string(j + 1) +
                        ") must point from a later layer to an earlier one");
    for (const auto& [n, blk] : comps) {
      const std::size_t rows = lay.layers[k].rank(n + 1), cols = lay.layers[j].rank(n);
      if (blk.rows() != rows || blk.cols() != cols)
        throw DomainError("malformed tower: " + tower_block(k, j, n) + " must be " + std::to_string(rows) + "x" +
                          std::to_string(cols));
      if (rows * cols != 0 && blk.ring() != s.ring) throw DomainError("malformed tower: glue has the wrong ring");
    }
  }
  if (lay.hi < lay.lo) return BoundedComplex::zero(s.ring);
  std::vector<std::size_t> ranks;
  std::vector<Matrix> diffs;
  for (int n = lay.lo; n <= lay.hi; ++n) ranks.push_back(lay.total(n));
  for (int n = lay.lo; n < lay.hi; ++n) {
    Matrix d(s.ring, lay.total(n + 1), lay.total(n));
    for (std::size_t k = 0; k < lay.layers.size(); ++k) d.set_block(lay.off(n + 1, k), lay.off(n, k), lay.layers[k].d(n));
    for (const auto& [key, comps] : tower.glue) {
      auto it = comps.find(n);
      if (it == comps.end()) continue;
      d.set_block(lay.off(n + 1, key.first), lay.off(n, key.second), it->second);
    }
    diffs.push_back(std::move(d));
  }
  try {
    return BoundedComplex(s.ring, lay.lo, std::move(ranks), std::move(diffs));
  } catch (const DomainError& e) {
    throw DomainError(std::string("malformed tower: ") + e.what());
  }
}

namespace {

CertTower sub_tower(const CertTower& tower, const std::vector<std::size_t>& keep) {
  CertTower out;
  std::map<std::size_t, std::size_t> index;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    index[keep[a]] = a;
    out.layers.push_back(tower.layers[keep[a]]);
  }
  for (const auto& [key, comps] : tower.glue) {
    auto ik = index.find(key.first), ij = index.find(key.second);
    if (ik != index.end() && ij != index.end()) out.glue[{ik->second, ij->second}] = comps;
  }
  return out;
}

// Columns (or rows) of M^n picking out the layers in `part`, in order.
Matrix selector(Ring r, const TowerLayout& lay, const std::vector<std::size_t>& part, int n) {
  std::size_t sub = 0;
  for (auto k : part) sub += lay.layers[k].rank(n);
  Matrix sel(r, lay.total(n), sub);
  std::size_t c = 0;
  for (auto k : part) {
    const std::size_t rk = lay.layers[k].rank(n);
    sel.set_block(lay.off(n, k), c, Matrix::identity(r, rk));
    c += rk;
  }
  return sel;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.ring(), m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

}  // namespace

WeakWeightDecomposition weak_weight_decompose(const SSet& s, const CertTower& tower) {
  WeakWeightDecomposition w;
  w.m = assemble_tower(s, tower);
  const TowerLayout lay = layout(tower);
  std::vector<std::size_t> xs, ys;
  for (std::size_t k = 0; k < tower.layers.size(); ++k) {
    const int sh = tower.layers[k].shift;
    (sh <= 0 ? xs : ys).push_back(k);
    w.m_lo = k ? std::min(w.m_lo, sh) : sh;
    w.n_hi = k ? std::max(w.n_hi, sh) : sh;
  }
  w.x_tower = sub_tower(tower, xs);
  w.y_tower = sub_tower(tower, ys);
  w.x = assemble_tower(s, w.x_tower);
  w.y = assemble_tower(s, w.y_tower);
  w.x_in_range = w.y_in_range = true;
  for (const auto& l : w.x_tower.layers) w.x_in_range = w.x_in_range && l.shift >= w.m_lo && l.shift <= 0;
  for (const auto& l : w.y_tower.layers) w.y_in_range = w.y_in_range && l.shift >= 1 && l.shift <= w.n_hi;

  std::map<int, Matrix> incl, proj, glue;
  for (int n = lay.lo; n <= lay.hi; ++n) {
    const Matrix sx = selector(s.ring, lay, xs, n), sy = selector(s.ring, lay, ys, n);
    incl.emplace(n, sx);
    proj.emplace(n, transpose(sy));
    // Y[-1]^{n+1} = Y^n -> X^{n+1}: the Y-to-X part of d_M.
    if (n < lay.hi) glue.emplace(n + 1, transpose(selector(s.ring, lay, xs, n + 1)) * w.m.d(n) * sy);
  }
  w.incl = ChainMap(w.x, w.m, std::move(incl));
  w.proj = ChainMap(w.m, w.y, std::move(proj));
  w.glue = ChainMap(shift(w.y, -1), w.x, std::move(glue));
  return w;
}

ChainMap reassembly(const WeakWeightDecomposition& w) {
  const ConeResult c = cone(w.glue);
  // cone^n = Y^n ⊕ X^n; send each part back along proj^T and incl.
  std::map<int, Matrix> comps;
  for (int n = c.cone.lo(); n <= c.cone.hi(); ++n)
    comps.emplace(n, hcat({transpose(w.proj.at(n)), w.incl.at(n)}));
  return ChainMap(c.cone, w.m, std::move(comps));
}

// ---------------------------------------------------------------- heart

HeartReport heart_hom(const SSet& s, std::size_t x, std::size_t y, const std::vector<std::vector<ZigToken>>& probes) {
  HeartReport rep;
  rep.oracle_used = oracle_applicable(s);
  std::vector<Matrix> values;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    LocTriple t = zigzag_normalize(s, probes[k]);
    if (t.source != x || t.target != y)
      throw DomainError("probe " + std::to_string(k) + " is not a morphism " + std::to_string(x) + " -> " +
                        std::to_string(y));
    rep.normalized.push_back(std::move(t));
  }
  RingMap f = rep.oracle_used ? fraction_map(s.ring) : RingMap{};
  auto same = [&](std::size_t a, std::size_t b) {
    if (rep.oracle_used) return values[a] == values[b];
    const LocTriple &ta = rep.normalized[a], &tb = rep.normalized[b];
    return ta.g == tb.g && ta.s == tb.s && ta.i == tb.i && ta.cert.diagonal == tb.cert.diagonal;
  };
  for (std::size_t k = 0; k < rep.normalized.size(); ++k) {
    if (rep.oracle_used) values.push_back(evaluate_functor(s, rep.normalized[k], f));
    std::size_t cls = rep.representatives.size();
    for (std::size_t c = 0; c < rep.representatives.size(); ++c)
      if (same(rep.representatives[c], k)) {
        cls = c;
        break;
      }
    if (cls == rep.representatives.size()) rep.representatives.push_back(k);
    rep.class_of.push_back(cls);
  }
  return rep;
}

// ---------------------------------------------------------------- negativity

bool NegativityReport::negative() const {
  if (!supported) return false;
  for (const auto& e : entries)
    if (e.violated) return false;
  return true;
}

std::optional<std::vector<ChainMap>> chain_map_basis(const BoundedComplex& p, const BoundedComplex& q) {
  Ring r = p.ring() ? p.ring() : q.ring();
  if (!r || !(r->kind == RingKind::Integers || r->is_field())) return std::nullopt;
  std::vector<ChainMap> out;
  if (p.is_zero() || q.is_zero()) return out;
  const int lo = std::max(p.lo(), q.lo()), hi = std::min(p.hi(), q.hi());
  if (lo > hi) return out;

  detail::System sys(r);
  std::map<int, detail::Unknown> f;
  for (int n = lo; n <= hi; ++n) f.emplace(n, sys.add_unknown(q.rank(n), p.rank(n)));
  std::deque<Matrix> keep;
  // d_Q f^n - f^{n+1} d_P = 0 wherever either side can be nonzero.
  for (int n = lo - 1; n <= hi; ++n) {
    std::vector<detail::System::Term> terms;
    if (f.count(n)) {
      keep.push_back(q.d(n));
      terms.push_back({&keep.back(), f.at(n), nullptr});
    }
    if (f.count(n + 1)) {
      keep.push_back(-p.d(n));
      terms.push_back({nullptr, f.at(n + 1), &keep.back()});
    }
    if (!terms.empty()) sys.equation(terms, Matrix::zero(r, q.rank(n + 1), p.rank(n)));
  }
  auto [a, b] = sys.matrices();
  auto ker = kernel_basis(a);
  if (!ker) return std::nullopt;
  for (std::size_t c = 0; c < ker->cols(); ++c) {
    std::map<int, Matrix> comps;
    for (const auto& [n, u] : f) comps.emplace(n, detail::System::extract(*ker, u, c));
    out.emplace_back(p, q, std::move(comps));
  }
  return out;
}

namespace {

NegativityEntry check_pair(const BoundedComplex& p, const BoundedComplex& q, std::size_t pi, std::size_t qi, int i) {
  NegativityEntry e{pi, qi, i, 0, false, std::nullopt};
  auto basis = chain_map_basis(p, shift(q, i));
  if (!basis) throw PreconditionError("negativity: unsupported coefficient ring");
  e.chain_maps = basis->size();
  for (const auto& m : *basis) {
    auto h = is_null_homotopic(m);
    if (h.status == HomotopyStatus::Unsupported) throw PreconditionError("negativity: unsupported coefficient ring");
    if (h.status == HomotopyStatus::No) {
      e.violated = true;
      e.witness = m;
      break;
    }
  }
  return e;
}

}  // namespace

NegativityReport negativity_check(const std::vector<BoundedComplex>& objects, const std::vector<int>& shifts) {
  NegativityReport rep;
  Ring r = nullptr;
  for (const auto& o : objects) {
    if (!o.ring()) continue;
    if (r && o.ring() != r) throw DomainError("negativity: objects over different rings");
    r = o.ring();
  }
  for (int i : shifts)
    if (i <= 0) throw DomainError("negativity: shifts must be positive, got " + std::to_string(i));
  if (r && !(r->kind == RingKind::Integers || r->is_field())) {
    rep.supported = false;
    return rep;
  }
  struct Job {
    std::size_t p, q;
    int i;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < objects.size(); ++p)
    for (std::size_t q = 0; q < objects.size(); ++q)
      for (int i : shifts) jobs.push_back({p, q, i});
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t b0 = 0; b0 < jobs.size(); b0 += batch) {
    std::vector<std::future<NegativityEntry>> running;
    for (std::size_t k = b0; k < std::min(jobs.size(), b0 + batch); ++k) {
      const Job& j = jobs[k];
      running.push_back(
          std::async(std::launch::async, check_pair, std::cref(objects[j.p]), std::cref(objects[j.q]), j.p, j.q, j.i));
    }
    for (auto& f : running) rep.entries.push_back(f.get());
  }
  return rep;
}

}  // namespace cohn
