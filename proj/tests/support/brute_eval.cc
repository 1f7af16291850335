#include "support/brute_eval.h"

#include <algorithm>
#include <cstring>

namespace framekit::testing {

namespace {

bool Contains(const std::vector<Handle> &v, Handle h) {
  return std::find(v.begin(), v.end(), h) != v.end();
}

// Frames evoked by mentions, then reachable over frame values.
std::vector<Handle> AllFrames(const Document &doc) {
  std::vector<Handle> out;
  for (const Mention &m : doc.mentions()) {
    for (Handle f : m.evoked) {
      if (!Contains(out, f)) out.push_back(f);
    }
  }
  for (Handle t : doc.themes()) {
    if (!Contains(out, t)) out.push_back(t);
  }
  for (size_t i = 0; i < out.size(); ++i) {
    for (const Slot &s : doc.store().Slots(out[i])) {
      if (s.role == doc.store().id() || s.role == doc.store().isa()) continue;
      const Handle *h = AsHandle(s.value);
      if (h != nullptr && h->IsFrame() && !Contains(out, *h)) out.push_back(*h);
    }
  }
  return out;
}

bool Excluded(const Store &s, Handle role) { return role == s.id() || role == s.isa(); }

std::string RoleText(const Store &s, Handle role) {
  return role.IsSymbol() ? s.SymbolName(role) : std::string();
}

bool SameLiteral(const Store &gs, const Value &a, const Store &ps, const Value &b) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return true;
    case 1: return std::get<int64_t>(a) == std::get<int64_t>(b);
    case 2: {
      double x = std::get<double>(a), y = std::get<double>(b);
      return std::memcmp(&x, &y, sizeof x) == 0;
    }
    case 3: return std::get<std::string>(a) == std::get<std::string>(b);
    default: break;
  }
  Handle x = std::get<Handle>(a), y = std::get<Handle>(b);
  if (x.kind != y.kind) return false;
  if (x.IsSymbol()) return gs.SymbolName(x) == ps.SymbolName(y);
  return x.IsFrame();  // frame-valued types compare equal
}

struct Aligner {
  std::vector<std::pair<Handle, Handle>> pairs;

  bool HasGold(Handle g) const {
    for (const auto &p : pairs) {
      if (p.first == g) return true;
    }
    return false;
  }
  bool HasPred(Handle h) const {
    for (const auto &p : pairs) {
      if (p.second == h) return true;
    }
    return false;
  }
  Handle PredOf(Handle g) const {
    for (const auto &p : pairs) {
      if (p.first == g) return p.second;
    }
    return Handle{};
  }
};

std::vector<Handle> FramesOfSpan(const Document &doc, int begin, int length) {
  std::vector<Handle> out;
  for (const Mention &m : doc.mentions()) {
    if (m.begin != begin || m.length != length) continue;
    for (Handle f : m.evoked) {
      if (!Contains(out, f)) out.push_back(f);
    }
  }
  return out;
}

}  // namespace

BruteReport BruteForceEvaluate(const Document &gold, const Document &pred) {
  const Store &gs = gold.store();
  const Store &ps = pred.store();
  BruteReport r;

  // Spans as distinct (begin, length) pairs.
  std::vector<std::pair<int, int>> gspans, pspans;
  for (const Mention &m : gold.mentions()) {
    std::pair<int, int> s{m.begin, m.length};
    if (std::find(gspans.begin(), gspans.end(), s) == gspans.end()) gspans.push_back(s);
  }
  for (const Mention &m : pred.mentions()) {
    std::pair<int, int> s{m.begin, m.length};
    if (std::find(pspans.begin(), pspans.end(), s) == pspans.end()) pspans.push_back(s);
  }
  int64_t common = 0;
  for (const auto &g : gspans) {
    for (const auto &p : pspans) common += g == p;
  }
  r.span = {common, static_cast<int64_t>(pspans.size()), common,
            static_cast<int64_t>(gspans.size())};

  // Seeds: spans in order of their first gold mention.
  Aligner al;
  std::vector<std::pair<Handle, Handle>> queue;
  std::vector<std::pair<int, int>> done;
  for (const Mention &m : gold.mentions()) {
    std::pair<int, int> s{m.begin, m.length};
    if (std::find(done.begin(), done.end(), s) != done.end()) continue;
    done.push_back(s);
    if (std::find(pspans.begin(), pspans.end(), s) == pspans.end()) continue;
    std::vector<Handle> gf = FramesOfSpan(gold, s.first, s.second);
    std::vector<Handle> pf = FramesOfSpan(pred, s.first, s.second);
    size_t j = 0;
    for (Handle g : gf) {
      if (al.HasGold(g)) continue;
      while (j < pf.size() && al.HasPred(pf[j])) ++j;
      if (j == pf.size()) break;
      al.pairs.emplace_back(g, pf[j]);
      queue.emplace_back(g, pf[j]);
      ++j;
    }
  }

  std::vector<Handle> gframes = AllFrames(gold);
  std::vector<Handle> pframes = AllFrames(pred);
  // Extension over links, first in first out.
  for (size_t q = 0; q < queue.size(); ++q) {
    Handle g = queue[q].first, p = queue[q].second;
    for (const Slot &gslot : gs.Slots(g)) {
      const Handle *gt = AsHandle(gslot.value);
      if (Excluded(gs, gslot.role) || gt == nullptr || !gt->IsFrame()) continue;
      if (al.HasGold(*gt)) continue;
      for (const Slot &pslot : ps.Slots(p)) {
        const Handle *pt = AsHandle(pslot.value);
        if (Excluded(ps, pslot.role) || pt == nullptr || !pt->IsFrame()) continue;
        if (al.HasPred(*pt) || RoleText(ps, pslot.role) != RoleText(gs, gslot.role)) continue;
        al.pairs.emplace_back(*gt, *pt);
        queue.emplace_back(*gt, *pt);
        break;
      }
    }
    // Sources pointing at g and p, in frame order then slot order.
    std::vector<std::pair<std::string, Handle>> gin, pin;
    for (Handle f : gframes) {
      for (const Slot &s : gs.Slots(f)) {
        const Handle *t = AsHandle(s.value);
        if (!Excluded(gs, s.role) && t != nullptr && *t == g) gin.emplace_back(RoleText(gs, s.role), f);
      }
    }
    for (Handle f : pframes) {
      for (const Slot &s : ps.Slots(f)) {
        const Handle *t = AsHandle(s.value);
        if (!Excluded(ps, s.role) && t != nullptr && *t == p) pin.emplace_back(RoleText(ps, s.role), f);
      }
    }
    for (const auto &[role, gsrc] : gin) {
      if (al.HasGold(gsrc)) continue;
      for (const auto &[prole, psrc] : pin) {
        if (al.HasPred(psrc) || prole != role) continue;
        al.pairs.emplace_back(gsrc, psrc);
        queue.emplace_back(gsrc, psrc);
        break;
      }
    }
  }
  r.alignment = al.pairs;

  int64_t aligned = 0;
  for (Handle g : gframes) aligned += al.HasGold(g);
  r.frame = {aligned, static_cast<int64_t>(pframes.size()), aligned,
             static_cast<int64_t>(gframes.size())};

  // Totals.
  auto tally = [&](const Store &s, const std::vector<Handle> &frames, int index) {
    for (Handle f : frames) {
      for (const Slot &slot : s.Slots(f)) {
        if (slot.role == s.id()) continue;
        if (slot.role == s.isa()) {
          ++r.type[index];
        } else if (IsFrameValue(slot.value)) {
          ++r.role[index];
        } else {
          ++r.label[index];
        }
      }
    }
  };
  tally(gs, gframes, 3);
  tally(ps, pframes, 1);

  // Matches: pair off equal slots within each aligned frame pair.
  for (Handle g : gframes) {
    if (!al.HasGold(g)) continue;
    Handle p = al.PredOf(g);
    auto pslots = ps.Slots(p);
    std::vector<bool> used(pslots.size(), false);
    for (const Slot &gslot : gs.Slots(g)) {
      if (gslot.role == gs.id()) continue;
      for (size_t j = 0; j < pslots.size(); ++j) {
        const Slot &pslot = pslots[j];
        if (used[j] || pslot.role == ps.id()) continue;
        bool gtype = gslot.role == gs.isa(), ptype = pslot.role == ps.isa();
        if (gtype != ptype) continue;
        int64_t *counter;
        if (gtype) {
          if (!SameLiteral(gs, gslot.value, ps, pslot.value)) continue;
          counter = nullptr;
        } else {
          if (RoleText(gs, gslot.role) != RoleText(ps, pslot.role)) continue;
          bool glink = IsFrameValue(gslot.value), plink = IsFrameValue(pslot.value);
          if (glink != plink) continue;
          if (glink) {
            Handle gt = std::get<Handle>(gslot.value), pt = std::get<Handle>(pslot.value);
            if (!al.HasGold(gt) || al.PredOf(gt) != pt) continue;
          } else if (!SameLiteral(gs, gslot.value, ps, pslot.value)) {
            continue;
          }
          counter = glink ? r.role.data() : r.label.data();
        }
        if (counter == nullptr) counter = r.type.data();
        used[j] = true;
        ++counter[0];
        ++counter[2];
        break;
      }
    }
  }
  return r;
}

}  // namespace framekit::testing
