#include "framekit/evaluator.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <set>

#include "parallel.h"

namespace framekit {

namespace {

double Ratio(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void CheckTokens(const Document &gold, const Document &pred) {
  const auto &a = gold.tokens();
  const auto &b = pred.tokens();
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kTokenMismatch,
                "token count differs: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].text != b[i].text) {
      throw Error(ErrorCode::kTokenMismatch,
                  "token " + std::to_string(i) + " differs: '" + a[i].text +
                      "' vs '" + b[i].text + "'");
    }
  }
}

bool Skipped(const Store &store, Handle role) {
  return role == store.id() || role == store.isa();
}

// Store-independent text for a non-frame value.
std::string Describe(const Store &store, const Value &v) {
  switch (v.index()) {
    case 0: return "nil";
    case 1: return "i:" + std::to_string(std::get<int64_t>(v));
    case 2: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "f:%.17g", std::get<double>(v));
      return buf;
    }
    case 3: return "s:" + std::get<std::string>(v);
    default: break;
  }
  Handle h = std::get<Handle>(v);
  if (h.IsSymbol()) return "y:" + store.SymbolName(h);
  if (h.IsArray()) {
    std::string out = "a:[";
    for (const Value &e : store.Elements(h)) {
      out += IsFrameValue(e) ? std::string("frame") : Describe(store, e);
      out += ' ';
    }
    return out + "]";
  }
  return "frame";
}

const std::string &RoleName(const Store &store, Handle role) {
  static const std::string kNonSymbol = "";
  return role.IsSymbol() ? store.SymbolName(role) : kNonSymbol;
}

// Frames evoked by each (begin, length) span, deduplicated, in mention order.
std::map<std::pair<int, int>, std::vector<Handle>> SpanFrames(const Document &doc) {
  std::map<std::pair<int, int>, std::vector<Handle>> out;
  for (const Mention &m : doc.mentions()) {
    auto &frames = out[{m.begin, m.length}];
    for (Handle f : m.evoked) {
      if (std::find(frames.begin(), frames.end(), f) == frames.end()) {
        frames.push_back(f);
      }
    }
  }
  return out;
}

// Incoming links: target -> (role name, source).
using Incoming =
    std::unordered_map<Handle, std::vector<std::pair<std::string, Handle>>, HandleHash>;

Incoming IncomingLinks(const Document &doc, const std::vector<Handle> &frames) {
  Incoming in;
  const Store &store = doc.store();
  for (Handle f : frames) {
    for (const Slot &slot : store.Slots(f)) {
      if (Skipped(store, slot.role) || !IsFrameValue(slot.value)) continue;
      in[std::get<Handle>(slot.value)].emplace_back(RoleName(store, slot.role), f);
    }
  }
  return in;
}

template <typename Key>
int64_t MultisetOverlap(std::vector<Key> a, std::vector<Key> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  int64_t n = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

void Count(MetricCounts &c, int64_t gold_total, int64_t pred_total, int64_t matched) {
  c.total_gold += gold_total;
  c.total_pred += pred_total;
  c.matched_gold += matched;
  c.matched_pred += matched;
}

}  // namespace

double MetricCounts::Precision() const { return Ratio(matched_pred, total_pred); }
double MetricCounts::Recall() const { return Ratio(matched_gold, total_gold); }
double MetricCounts::F1() const {
  double p = Precision(), r = Recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

MetricCounts &MetricCounts::operator+=(const MetricCounts &other) {
  matched_pred += other.matched_pred;
  total_pred += other.total_pred;
  matched_gold += other.matched_gold;
  total_gold += other.total_gold;
  return *this;
}

const char *MetricName(Metric metric) {
  switch (metric) {
    case Metric::kSpan: return "SPAN";
    case Metric::kFrame: return "FRAME";
    case Metric::kType: return "TYPE";
    case Metric::kRole: return "ROLE";
    case Metric::kLabel: return "LABEL";
    case Metric::kSlot: return "SLOT";
    case Metric::kCombined: return "COMBINED";
  }
  return "?";
}

const char *MetricKey(Metric metric) {
  switch (metric) {
    case Metric::kSpan: return "span";
    case Metric::kFrame: return "frame";
    case Metric::kType: return "type";
    case Metric::kRole: return "role";
    case Metric::kLabel: return "label";
    case Metric::kSlot: return "slot";
    case Metric::kCombined: return "combined";
  }
  return "?";
}

void EvalReport::Merge(const EvalReport &other) {
  for (int i = 0; i < kNumBaseMetrics; ++i) counts[i] += other.counts[i];
  UpdateAggregates();
}

void EvalReport::UpdateAggregates() {
  MetricCounts slot, combined;
  for (Metric m : {Metric::kType, Metric::kRole, Metric::kLabel}) slot += (*this)[m];
  combined = slot;
  combined += (*this)[Metric::kSpan];
  combined += (*this)[Metric::kFrame];
  (*this)[Metric::kSlot] = slot;
  (*this)[Metric::kCombined] = combined;
}

void Alignment::Add(Handle gold, Handle pred) {
  gold_to_pred.emplace(gold, pred);
  pred_to_gold.emplace(pred, gold);
}

Alignment Align(const Document &gold, const Document &pred) {
  CheckTokens(gold, pred);
  const Store &gs = gold.store();
  const Store &ps = pred.store();
  Alignment alignment;
  std::deque<std::pair<Handle, Handle>> queue;
  auto pair = [&](Handle g, Handle p) {
    alignment.Add(g, p);
    queue.emplace_back(g, p);
  };

  auto gold_spans = SpanFrames(gold);
  auto pred_spans = SpanFrames(pred);
  for (const Mention &m : gold.mentions()) {
    auto g = gold_spans.find({m.begin, m.length});
    auto p = pred_spans.find({m.begin, m.length});
    if (g == gold_spans.end() || p == pred_spans.end()) continue;
    auto pi = p->second.begin();
    for (Handle gf : g->second) {
      if (alignment.HasGold(gf)) continue;
      while (pi != p->second.end() && alignment.HasPred(*pi)) ++pi;
      if (pi == p->second.end()) break;
      pair(gf, *pi++);
    }
    gold_spans.erase(g);
  }

  Incoming gold_in = IncomingLinks(gold, gold.Frames());
  Incoming pred_in = IncomingLinks(pred, pred.Frames());
  while (!queue.empty()) {
    auto [g, p] = queue.front();
    queue.pop_front();
    // Outgoing links with equal roles.
    for (const Slot &gslot : gs.Slots(g)) {
      if (Skipped(gs, gslot.role) || !IsFrameValue(gslot.value)) continue;
      Handle gt = std::get<Handle>(gslot.value);
      if (alignment.HasGold(gt)) continue;
      const std::string &role = RoleName(gs, gslot.role);
      for (const Slot &pslot : ps.Slots(p)) {
        if (Skipped(ps, pslot.role) || !IsFrameValue(pslot.value)) continue;
        Handle pt = std::get<Handle>(pslot.value);
        if (alignment.HasPred(pt) || RoleName(ps, pslot.role) != role) continue;
        pair(gt, pt);
        break;
      }
    }
    // Incoming links with equal roles.
    auto gi = gold_in.find(g);
    auto pi = pred_in.find(p);
    if (gi == gold_in.end() || pi == pred_in.end()) continue;
    for (const auto &[role, gsrc] : gi->second) {
      if (alignment.HasGold(gsrc)) continue;
      for (const auto &[prole, psrc] : pi->second) {
        if (alignment.HasPred(psrc) || prole != role) continue;
        pair(gsrc, psrc);
        break;
      }
    }
  }
  return alignment;
}

EvalReport Evaluate(const Document &gold, const Document &pred) {
  Alignment alignment = Align(gold, pred);
  const Store &gs = gold.store();
  const Store &ps = pred.store();
  EvalReport report;

  std::set<std::pair<int, int>> gspans, pspans;
  for (const Mention &m : gold.mentions()) gspans.emplace(m.begin, m.length);
  for (const Mention &m : pred.mentions()) pspans.emplace(m.begin, m.length);
  int64_t common = 0;
  for (const auto &s : gspans) common += pspans.count(s);
  Count(report[Metric::kSpan], gspans.size(), pspans.size(), common);

  std::vector<Handle> gframes = gold.Frames();
  std::vector<Handle> pframes = pred.Frames();
  int64_t aligned = 0;
  for (Handle g : gframes) aligned += alignment.HasGold(g);
  Count(report[Metric::kFrame], gframes.size(), pframes.size(), aligned);

  // Totals over all frames; matches only within aligned pairs.
  for (int side = 0; side < 2; ++side) {
    const Store &store = side == 0 ? gs : ps;
    for (Handle f : side == 0 ? gframes : pframes) {
      for (const Slot &slot : store.Slots(f)) {
        MetricCounts *c;
        if (slot.role == store.id()) continue;
        if (slot.role == store.isa()) {
          c = &report[Metric::kType];
        } else if (IsFrameValue(slot.value)) {
          c = &report[Metric::kRole];
        } else {
          c = &report[Metric::kLabel];
        }
        ++(side == 0 ? c->total_gold : c->total_pred);
      }
    }
  }

  using Key = std::pair<std::string, std::string>;
  for (Handle g : gframes) {
    auto it = alignment.gold_to_pred.find(g);
    if (it == alignment.gold_to_pred.end()) continue;
    Handle p = it->second;
    std::vector<Key> gtypes, ptypes, groles, proles, glabels, plabels;
    for (const Slot &slot : gs.Slots(g)) {
      if (slot.role == gs.id()) continue;
      if (slot.role == gs.isa()) {
        gtypes.emplace_back("", Describe(gs, slot.value));
      } else if (IsFrameValue(slot.value)) {
        auto t = alignment.gold_to_pred.find(std::get<Handle>(slot.value));
        if (t == alignment.gold_to_pred.end()) continue;
        groles.emplace_back(RoleName(gs, slot.role), std::to_string(t->second.index));
      } else {
        glabels.emplace_back(RoleName(gs, slot.role), Describe(gs, slot.value));
      }
    }
    for (const Slot &slot : ps.Slots(p)) {
      if (slot.role == ps.id()) continue;
      if (slot.role == ps.isa()) {
        ptypes.emplace_back("", Describe(ps, slot.value));
      } else if (IsFrameValue(slot.value)) {
        Handle t = std::get<Handle>(slot.value);
        if (!alignment.HasPred(t)) continue;
        proles.emplace_back(RoleName(ps, slot.role), std::to_string(t.index));
      } else {
        plabels.emplace_back(RoleName(ps, slot.role), Describe(ps, slot.value));
      }
    }
    int64_t n = MultisetOverlap(gtypes, ptypes);
    report[Metric::kType].matched_gold += n;
    report[Metric::kType].matched_pred += n;
    n = MultisetOverlap(groles, proles);
    report[Metric::kRole].matched_gold += n;
    report[Metric::kRole].matched_pred += n;
    n = MultisetOverlap(glabels, plabels);
    report[Metric::kLabel].matched_gold += n;
    report[Metric::kLabel].matched_pred += n;
  }
  report.UpdateAggregates();
  return report;
}

EvalReport EvaluateCorpus(std::span<const Document> gold,
                          std::span<const Document> pred, int jobs) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "corpus sizes differ: " + std::to_string(gold.size()) + " gold vs " +
                    std::to_string(pred.size()) + " predicted");
  }
  std::vector<EvalReport> parts(gold.size());
  ParallelFor(gold.size(), jobs, [&](size_t i) {
    try {
      parts[i] = Evaluate(gold[i], pred[i]);
    } catch (const Error &e) {
      throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
    }
  });
  EvalReport total;
  for (const EvalReport &r : parts) total.Merge(r);
  total.UpdateAggregates();
  return total;
}

std::string FormatReport(const EvalReport &report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %21s %21s\n", "Metric",
                "Precision", "Recall", "F1", "matched/pred", "matched/gold");
  out += line;
  for (int i = 0; i < kNumMetrics; ++i) {
    const MetricCounts &c = report.counts[i];
    std::string pc = std::to_string(c.matched_pred) + "/" + std::to_string(c.total_pred);
    std::string gc = std::to_string(c.matched_gold) + "/" + std::to_string(c.total_gold);
    std::snprintf(line, sizeof(line), "%-10s %10.2f %10.2f %10.2f %21s %21s\n",
                  MetricName(static_cast<Metric>(i)), 100.0 * c.Precision(),
                  100.0 * c.Recall(), 100.0 * c.F1(), pc.c_str(), gc.c_str());
    out += line;
  }
  return out;
}

std::string FormatMetrics(const EvalReport &report) {
  std::string out;
  char line[1024];
  for (int i = 0; i < kNumMetrics; ++i) {
    const MetricCounts &c = report.counts[i];
    const char *key = MetricKey(static_cast<Metric>(i));
    std::snprintf(line, sizeof(line),
                  "%s.precision=%.2f\n%s.recall=%.2f\n%s.f1=%.2f\n"
                  "%s.matched_pred=%lld\n%s.total_pred=%lld\n"
                  "%s.matched_gold=%lld\n%s.total_gold=%lld\n",
                  key, 100.0 * c.Precision(), key, 100.0 * c.Recall(), key,
                  100.0 * c.F1(), key, static_cast<long long>(c.matched_pred), key,
                  static_cast<long long>(c.total_pred), key,
                  static_cast<long long>(c.matched_gold), key,
                  static_cast<long long>(c.total_gold));
    out += line;
  }
  return out;
}

}  // namespace framekit
