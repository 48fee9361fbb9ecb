#include "streamlink/samplers/kernels.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/model/posterior.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace streamlink {

ChainStats& ChainStats::operator+=(const ChainStats& o) {
  lb_proposed += o.lb_proposed;
  lb_accepted += o.lb_accepted;
  lb_null += o.lb_null;
  pprb_proposed += o.pprb_proposed;
  pprb_accepted += o.pprb_accepted;
  burn_seconds += o.burn_seconds;
  sample_seconds += o.sample_seconds;
  return *this;
}

void component_sweep(ChainState& state, int file, const ZPriorHyper& hyper, Rng& rng) {
  thread_local std::vector<double> cum, weights;
  const auto& layout = state.z().layout();
  const RecordId previous = layout.offset(file);
  for (RecordId r = previous; r < previous + layout.size(file); ++r) {
    state.unlink(r);
    component_log_weights(r, state.z(), state.scorer(), hyper, cum, weights);
    const auto pick = static_cast<RecordId>(rng.categorical_log(weights));
    if (pick < previous) state.link(r, pick);
  }
}

double log_barker(double log_t) {
  return log_t >= 0.0 ? -std::log1p(std::exp(-log_t)) : log_t - std::log1p(std::exp(log_t));
}

int scaled_block_size(int new_file_size) {
  return std::max(1, static_cast<int>(std::lround(75.0 * new_file_size / 200.0)));
}

namespace {

using Kind = MoveProposal::Kind;

struct LocalMove {
  Kind kind;
  int a; // new-file block index (j or j1)
  int b; // old block index for add/target_swap, new index for source_swap/double_swap
  double delta;
};

// Block-local view of one matching vector. tgt[j] is the old-block index of
// j's target, -1 when j is unlinked and -2 when j links outside the block;
// src[q] is the new-block index linking into q, -1 when q is free and -2
// when q is taken by a record outside the block.
struct Workspace {
  std::vector<RecordId> bn, bo;
  std::vector<int> tgt, src, tgt_y, src_y;
  std::vector<double> gain;
  std::vector<LocalMove> moves;
  std::vector<double> logw;
  std::vector<RecordId> perm;
  std::vector<int> bo_index, bn_index;
  int nbo = 0;

  double g(int j, int q) const { return gain[static_cast<std::size_t>(j) * nbo + q]; }
};

void choose(std::vector<RecordId>& out, RecordId first, RecordId count, int block, Rng& rng,
            std::vector<RecordId>& perm) {
  out.clear();
  if (block <= 0 || block >= count) {
    for (RecordId i = 0; i < count; ++i) out.push_back(first + i);
    return;
  }
  perm.resize(static_cast<std::size_t>(count));
  std::iota(perm.begin(), perm.end(), first);
  for (int i = 0; i < block; ++i) {
    const auto k = i + static_cast<RecordId>(rng.below(static_cast<std::uint64_t>(count - i)));
    std::swap(perm[i], perm[k]);
    out.push_back(perm[i]);
  }
}

// Sums the Barker weights of the neighborhood; stores the moves when asked.
double enumerate(Workspace& w, const std::vector<int>& tgt, const std::vector<int>& src, double add_d,
                 double del_d, bool store) {
  double top = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  auto push = [&](Kind kind, int a, int b, double delta) {
    const double lw = log_barker(delta);
    if (lw > top) {
      sum = sum * std::exp(top - lw) + 1.0;
      top = lw;
    } else {
      sum += std::exp(lw - top);
    }
    if (store) {
      w.moves.push_back({kind, a, b, delta});
      w.logw.push_back(lw);
    }
  };
  const int nbn = static_cast<int>(w.bn.size());
  const int nbo = w.nbo;
  for (int j = 0; j < nbn; ++j) {
    if (tgt[j] != -1) continue;
    for (int q = 0; q < nbo; ++q)
      if (src[q] == -1) push(Kind::add, j, q, w.g(j, q) + add_d);
  }
  for (int j = 0; j < nbn; ++j)
    if (tgt[j] >= 0) push(Kind::remove, j, tgt[j], del_d - w.g(j, tgt[j]));
  for (int j = 0; j < nbn; ++j) {
    if (tgt[j] < 0) continue;
    const double here = w.g(j, tgt[j]);
    for (int q = 0; q < nbo; ++q)
      if (src[q] == -1) push(Kind::target_swap, j, q, w.g(j, q) - here);
  }
  for (int j = 0; j < nbn; ++j) {
    if (tgt[j] < 0) continue;
    const double here = w.g(j, tgt[j]);
    for (int j2 = 0; j2 < nbn; ++j2)
      if (tgt[j2] == -1) push(Kind::source_swap, j, j2, w.g(j2, tgt[j]) - here);
  }
  for (int j1 = 0; j1 < nbn; ++j1) {
    if (tgt[j1] < 0) continue;
    for (int j2 = j1 + 1; j2 < nbn; ++j2) {
      if (tgt[j2] < 0) continue;
      push(Kind::double_swap, j1, j2,
           w.g(j1, tgt[j2]) + w.g(j2, tgt[j1]) - w.g(j1, tgt[j1]) - w.g(j2, tgt[j2]));
    }
  }
  return sum > 0.0 ? top + std::log(sum) : -std::numeric_limits<double>::infinity();
}

// Applies a local move to the block view; returns the change in link count.
int apply_local(const LocalMove& mv, std::vector<int>& tgt, std::vector<int>& src) {
  switch (mv.kind) {
  case Kind::add:
    tgt[mv.a] = mv.b;
    src[mv.b] = mv.a;
    return 1;
  case Kind::remove:
    src[tgt[mv.a]] = -1;
    tgt[mv.a] = -1;
    return -1;
  case Kind::target_swap:
    src[tgt[mv.a]] = -1;
    tgt[mv.a] = mv.b;
    src[mv.b] = mv.a;
    return 0;
  case Kind::source_swap: {
    const int q = tgt[mv.a];
    tgt[mv.a] = -1;
    tgt[mv.b] = q;
    src[q] = mv.b;
    return 0;
  }
  case Kind::double_swap: {
    const int q1 = tgt[mv.a], q2 = tgt[mv.b];
    tgt[mv.a] = q2;
    tgt[mv.b] = q1;
    src[q2] = mv.a;
    src[q1] = mv.b;
    return 0;
  }
  case Kind::none: break;
  }
  return 0;
}

} // namespace

MoveProposal lb_propose(const ChainState& state, int file, const ZPriorHyper& hyper, int block_size,
                        Rng& rng) {
  thread_local Workspace w;
  const auto& z = state.z();
  const auto& layout = z.layout();
  if (file < 1 || file >= layout.file_count()) throw StructuralError("no matching vector for that file");
  const RecordId first = layout.offset(file);
  const RecordId n_new = layout.size(file);
  const RecordId previous = first;

  choose(w.bn, first, n_new, block_size, rng, w.perm);
  choose(w.bo, 0, previous, block_size, rng, w.perm);
  const int nbn = static_cast<int>(w.bn.size());
  w.nbo = static_cast<int>(w.bo.size());

  w.bo_index.assign(static_cast<std::size_t>(previous), -1);
  w.bn_index.assign(static_cast<std::size_t>(n_new), -1);
  for (int q = 0; q < w.nbo; ++q) w.bo_index[w.bo[q]] = q;
  for (int j = 0; j < nbn; ++j) w.bn_index[w.bn[j] - first] = j;

  w.tgt.assign(static_cast<std::size_t>(nbn), -1);
  w.src.assign(static_cast<std::size_t>(w.nbo), -1);
  for (int j = 0; j < nbn; ++j)
    if (z.is_linked(w.bn[j])) {
      const int q = w.bo_index[z.target(w.bn[j])];
      w.tgt[j] = q >= 0 ? q : -2;
    }
  for (int q = 0; q < w.nbo; ++q) {
    const RecordId s = z.source(w.bo[q]);
    if (s < 0) continue;
    const bool in_block = s >= first && s < first + n_new && w.bn_index[s - first] >= 0;
    w.src[q] = in_block ? w.bn_index[s - first] : -2;
  }

  // Gains G(j, q) over A(bo[q]) x D(bn[j]); they do not depend on vector `file`.
  const auto& score = state.scorer();
  w.gain.assign(static_cast<std::size_t>(nbn) * w.nbo, 0.0);
  for (int j = 0; j < nbn; ++j) {
    if (w.tgt[j] == -2) continue;
    for (int q = 0; q < w.nbo; ++q) {
      if (w.src[q] == -2) continue;
      double g = 0.0;
      for (RecordId a = w.bo[q];; a = z.target(a)) {
        for (RecordId b = w.bn[j];; b = z.source(b)) {
          g += score(a, b);
          if (z.is_free(b)) break;
        }
        if (!z.is_linked(a)) break;
      }
      w.gain[static_cast<std::size_t>(j) * w.nbo + q] = g;
    }
  }

  const int n = z.link_count(file);
  auto lp = [&](int links) { return log_z_prior(links, previous, n_new, hyper); };
  const double lp_n = lp(n);
  const double add_x = n + 1 <= std::min(previous, n_new) ? lp(n + 1) - lp_n : 0.0;
  const double del_x = n >= 1 ? lp(n - 1) - lp_n : 0.0;

  w.moves.clear();
  w.logw.clear();
  MoveProposal out;
  const double log_zx = enumerate(w, w.tgt, w.src, add_x, del_x, true);
  if (w.moves.empty()) return out;
  const LocalMove mv = w.moves[rng.categorical_log(w.logw)];

  w.tgt_y = w.tgt;
  w.src_y = w.src;
  const int ny = n + apply_local(mv, w.tgt_y, w.src_y);
  const double lp_ny = lp(ny);
  const double add_y = ny + 1 <= std::min(previous, n_new) ? lp(ny + 1) - lp_ny : 0.0;
  const double del_y = ny >= 1 ? lp(ny - 1) - lp_ny : 0.0;
  const double log_zy = enumerate(w, w.tgt_y, w.src_y, add_y, del_y, false);

  out.kind = mv.kind;
  out.log_delta = mv.delta;
  out.log_zx = log_zx;
  out.log_zy = log_zy;
  out.j1 = w.bn[mv.a];
  switch (mv.kind) {
  case Kind::add:
    out.p1 = w.bo[mv.b];
    break;
  case Kind::remove:
    out.p1 = w.bo[w.tgt[mv.a]];
    break;
  case Kind::target_swap:
    out.p1 = w.bo[w.tgt[mv.a]];
    out.p2 = w.bo[mv.b];
    break;
  case Kind::source_swap:
    out.p1 = w.bo[w.tgt[mv.a]];
    out.j2 = w.bn[mv.b];
    break;
  case Kind::double_swap:
    out.p1 = w.bo[w.tgt[mv.a]];
    out.j2 = w.bn[mv.b];
    out.p2 = w.bo[w.tgt[mv.b]];
    break;
  case Kind::none: break;
  }
  return out;
}

void apply_move(ChainState& state, const MoveProposal& mv) {
  switch (mv.kind) {
  case Kind::add: state.link(mv.j1, mv.p1); break;
  case Kind::remove: state.unlink(mv.j1); break;
  case Kind::target_swap:
    state.unlink(mv.j1);
    state.link(mv.j1, mv.p2);
    break;
  case Kind::source_swap:
    state.unlink(mv.j1);
    state.link(mv.j2, mv.p1);
    break;
  case Kind::double_swap:
    state.unlink(mv.j1);
    state.unlink(mv.j2);
    state.link(mv.j1, mv.p2);
    state.link(mv.j2, mv.p1);
    break;
  case Kind::none: break;
  }
}

void revert_move(ChainState& state, const MoveProposal& mv) {
  switch (mv.kind) {
  case Kind::add: state.unlink(mv.j1); break;
  case Kind::remove: state.link(mv.j1, mv.p1); break;
  case Kind::target_swap:
    state.unlink(mv.j1);
    state.link(mv.j1, mv.p1);
    break;
  case Kind::source_swap:
    state.unlink(mv.j2);
    state.link(mv.j1, mv.p1);
    break;
  case Kind::double_swap:
    state.unlink(mv.j1);
    state.unlink(mv.j2);
    state.link(mv.j1, mv.p1);
    state.link(mv.j2, mv.p2);
    break;
  case Kind::none: break;
  }
}

bool lb_step(ChainState& state, int file, const ZPriorHyper& hyper, int block_size, Rng& rng,
             ChainStats* stats) {
  const MoveProposal mv = lb_propose(state, file, hyper, block_size, rng);
  if (stats) ++stats->lb_proposed;
  if (mv.kind == Kind::none) {
    if (stats) ++stats->lb_null;
    return false;
  }
  const double la = mv.log_accept();
  if (la >= 0.0 || std::log(rng.uniform()) < la) {
    apply_move(state, mv);
    if (stats) ++stats->lb_accepted;
    return true;
  }
  return false;
}

} // namespace streamlink
