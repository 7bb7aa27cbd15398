#include "cpd/pcpd/matching.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cpd::pcpd {

namespace {

// Primal-dual blossom solver. Vertex duals start at the maximum weight; edge
// slack is du + dv - 2w. Weights are doubled on entry so every dual stays
// integral.
class Blossom {
 public:
  Blossom(std::size_t n, std::vector<WeightedEdge> edges) : nv_(n), edges_(std::move(edges)) {
    for (auto& e : edges_) e.weight *= 2;
    const std::size_t ne = edges_.size();
    std::int64_t maxw = 0;
    for (const auto& e : edges_) maxw = std::max(maxw, e.weight);
    endpoint_.resize(2 * ne);
    for (std::size_t p = 0; p < 2 * ne; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(nv_, {});
    for (std::size_t k = 0; k < ne; ++k) {
      neighbend_[edges_[k].u].push_back(static_cast<long>(2 * k + 1));
      neighbend_[edges_[k].v].push_back(static_cast<long>(2 * k));
    }
    mate_.assign(nv_, -1);
    label_.assign(2 * nv_, 0);
    labelend_.assign(2 * nv_, -1);
    inblossom_.resize(nv_);
    for (std::size_t i = 0; i < nv_; ++i) inblossom_[i] = static_cast<long>(i);
    blossomparent_.assign(2 * nv_, -1);
    blossomchilds_.assign(2 * nv_, {});
    blossombase_.assign(2 * nv_, -1);
    for (std::size_t i = 0; i < nv_; ++i) blossombase_[i] = static_cast<long>(i);
    blossomendps_.assign(2 * nv_, {});
    bestedge_.assign(2 * nv_, -1);
    blossombestedges_.assign(2 * nv_, {});
    has_bestedges_.assign(2 * nv_, false);
    for (std::size_t b = nv_; b < 2 * nv_; ++b) unused_.push_back(static_cast<long>(b));
    dualvar_.assign(2 * nv_, 0);
    for (std::size_t i = 0; i < nv_; ++i) dualvar_[i] = maxw;
    allowedge_.assign(ne, false);
  }

  std::vector<long> solve();

 private:
  std::int64_t slack(long k) const {
    const auto& e = edges_[static_cast<std::size_t>(k)];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
  }

  void leaves(long b, std::vector<long>& out) const {
    if (b < static_cast<long>(nv_)) {
      out.push_back(b);
      return;
    }
    for (long t : blossomchilds_[b]) leaves(t, out);
  }
  std::vector<long> leaves(long b) const {
    std::vector<long> out;
    leaves(b, out);
    return out;
  }

  static long wrap(long j, std::size_t len) {
    const long l = static_cast<long>(len);
    return ((j % l) + l) % l;
  }

  void assign_label(long w, int t, long p);
  long scan_blossom(long v, long w);
  void add_blossom(long base, long k);
  void expand_blossom(long b, bool endstage);
  void augment_blossom(long b, long v);
  void augment_matching(long k);

  std::size_t nv_;
  std::vector<WeightedEdge> edges_;
  std::vector<long> endpoint_;
  std::vector<std::vector<long>> neighbend_;
  std::vector<long> mate_;
  std::vector<int> label_;
  std::vector<long> labelend_;
  std::vector<long> inblossom_;
  std::vector<long> blossomparent_;
  std::vector<std::vector<long>> blossomchilds_;
  std::vector<long> blossombase_;
  std::vector<std::vector<long>> blossomendps_;
  std::vector<long> bestedge_;
  std::vector<std::vector<long>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<long> unused_;
  std::vector<std::int64_t> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<long> queue_;
};

void Blossom::assign_label(long w, int t, long p) {
  const long b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const long base = blossombase_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

long Blossom::scan_blossom(long v, long w) {
  std::vector<long> path;
  long base = -1;
  while (v != -1 || w != -1) {
    long b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (long b : path) label_[b] = 1;
  return base;
}

void Blossom::add_blossom(long base, long k) {
  long v = edges_[k].u, w = edges_[k].v;
  const long bb = inblossom_[base];
  long bv = inblossom_[v], bw = inblossom_[w];
  const long b = unused_.back();
  unused_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  std::vector<long> path, endps;
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  blossomchilds_[b] = path;
  blossomendps_[b] = endps;
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dualvar_[b] = 0;
  for (long x : leaves(b)) {
    if (label_[inblossom_[x]] == 2) queue_.push_back(x);
    inblossom_[x] = b;
  }
  std::vector<long> bestedgeto(2 * nv_, -1);
  for (long sub : path) {
    std::vector<std::vector<long>> nblists;
    if (!has_bestedges_[sub]) {
      for (long x : leaves(sub)) {
        std::vector<long> l;
        for (long p : neighbend_[x]) l.push_back(p / 2);
        nblists.push_back(std::move(l));
      }
    } else {
      nblists.push_back(blossombestedges_[sub]);
    }
    for (const auto& nblist : nblists) {
      for (long kk : nblist) {
        long i = edges_[kk].u, j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const long bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    }
    blossombestedges_[sub].clear();
    has_bestedges_[sub] = false;
    bestedge_[sub] = -1;
  }
  blossombestedges_[b].clear();
  for (long kk : bestedgeto)
    if (kk != -1) blossombestedges_[b].push_back(kk);
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (long kk : blossombestedges_[b])
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void Blossom::expand_blossom(long b, bool endstage) {
  const std::vector<long> childs = blossomchilds_[b];
  for (long s : childs) {
    blossomparent_[s] = -1;
    if (s < static_cast<long>(nv_)) {
      inblossom_[s] = s;
    } else if (endstage && dualvar_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (long x : leaves(s)) inblossom_[x] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& ch = blossomchilds_[b];
    const auto& ep = blossomendps_[b];
    const std::size_t len = ch.size();
    const long entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    long j = static_cast<long>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    long jstep, endptrick;
    if (j & 1) {
      j -= static_cast<long>(len);
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    long p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[ep[wrap(j - endptrick, len)] / 2] = true;
      j += jstep;
      p = ep[wrap(j - endptrick, len)] ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    long bv = ch[wrap(j, len)];
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (ch[wrap(j, len)] != entrychild) {
      bv = ch[wrap(j, len)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      long found = -1;
      for (long x : leaves(bv))
        if (label_[x] != 0) {
          found = x;
          break;
        }
      if (found >= 0) {
        label_[found] = 0;
        label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = -1;
  labelend_[b] = -1;
  blossomchilds_[b].clear();
  blossomendps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void Blossom::augment_blossom(long b, long v) {
  long t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= static_cast<long>(nv_)) augment_blossom(t, v);
  auto& ch = blossomchilds_[b];
  auto& ep = blossomendps_[b];
  const std::size_t len = ch.size();
  const long i = static_cast<long>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  long j = i;
  long jstep, endptrick;
  if (i & 1) {
    j -= static_cast<long>(len);
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = ch[wrap(j, len)];
    const long p = ep[wrap(j - endptrick, len)] ^ endptrick;
    if (t >= static_cast<long>(nv_)) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = ch[wrap(j, len)];
    if (t >= static_cast<long>(nv_)) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  blossombase_[b] = blossombase_[ch[0]];
}

void Blossom::augment_matching(long k) {
  const long ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
  for (const auto& sp : ends) {
    long s = sp[0], p = sp[1];
    while (true) {
      const long bs = inblossom_[s];
      if (bs >= static_cast<long>(nv_)) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const long t = endpoint_[labelend_[bs]];
      const long bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const long j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= static_cast<long>(nv_)) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<long> Blossom::solve() {
  const long nv = static_cast<long>(nv_);
  for (std::size_t stage = 0; stage < nv_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (std::size_t b = nv_; b < 2 * nv_; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (long v = 0; v < nv; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const long v = queue_.back();
        queue_.pop_back();
        for (long p : neighbend_[v]) {
          const long k = p / 2;
          const long w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const long base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const long b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = 1;
      std::int64_t delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv);
      long deltaedge = -1, deltablossom = -1;
      for (long v = 0; v < nv; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const std::int64_t d = slack(bestedge_[v]);
          if (d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (long b = 0; b < 2 * nv; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const std::int64_t d = slack(bestedge_[b]) / 2;
          if (d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (long b = nv; b < 2 * nv; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 && dualvar_[b] < delta) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      for (long v = 0; v < nv; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == 1)
          dualvar_[v] -= delta;
        else if (l == 2)
          dualvar_[v] += delta;
      }
      for (long b = nv; b < 2 * nv; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1)
            dualvar_[b] += delta;
          else if (label_[b] == 2)
            dualvar_[b] -= delta;
        }
      }
      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        long i = edges_[deltaedge].u, j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (long b = nv; b < 2 * nv; ++b)
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0)
        expand_blossom(b, true);
  }
  std::vector<long> out(nv_, -1);
  for (long v = 0; v < nv; ++v)
    if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
  return out;
}

}  // namespace

Matching max_weight_matching(std::size_t vertex_count, const std::vector<WeightedEdge>& edges) {
  // Parallel edges collapse to their heaviest copy; the first one wins ties.
  std::vector<WeightedEdge> kept;
  std::map<NodePair, std::size_t> seen;
  for (const WeightedEdge& e : edges) {
    if (e.weight < 0) throw std::invalid_argument("max_weight_matching: negative edge weight");
    if (e.u >= vertex_count || e.v >= vertex_count)
      throw std::invalid_argument("max_weight_matching: edge endpoint out of range");
    if (e.weight == 0 || e.u == e.v) continue;
    const NodePair key(e.u, e.v);
    const auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, kept.size());
      kept.push_back(e);
    } else if (kept[it->second].weight < e.weight) {
      kept[it->second].weight = e.weight;
    }
  }
  Matching out;
  if (kept.empty()) return out;
  Blossom solver(vertex_count, std::move(kept));
  const std::vector<long> mate = solver.solve();
  for (std::size_t v = 0; v < mate.size(); ++v)
    if (mate[v] > static_cast<long>(v)) out.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(mate[v]));
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t matching_weight(const Matching& m, const std::vector<WeightedEdge>& edges) {
  std::map<NodePair, std::int64_t> w;
  for (const WeightedEdge& e : edges) {
    auto& slot = w[NodePair(e.u, e.v)];
    slot = std::max(slot, e.weight);
  }
  std::int64_t total = 0;
  for (const NodePair& p : m) {
    const auto it = w.find(p);
    if (it != w.end()) total += it->second;
  }
  return total;
}

}  // namespace cpd::pcpd
