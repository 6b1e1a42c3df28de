#pragma once

#include "loclab/outcome.hpp"
#include "loclab/view.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace loclab {

enum class NsStatus { ok, violation, precondition_unmet };

inline const char* to_string(NsStatus s) {
  switch (s) {
    case NsStatus::ok: return "ok";
    case NsStatus::violation: return "violation";
    case NsStatus::precondition_unmet: return "precondition unmet";
  }
  return "?";
}

struct NsVerdict {
  NsStatus status = NsStatus::ok;
  std::size_t isomorphisms_checked = 0;
  bool exhaustive = true;  // false when the isomorphism cap was hit
  std::string detail;
  bool ok() const { return status == NsStatus::ok; }
};

namespace detail {

/// A restricted labeling expressed in the coordinates of one side: per
/// anchor its node label, its port labels by port index (ports outside the
/// view left empty), and the sorted (input, output) pairs of those ports.
struct NsKey {
  std::vector<std::string> nodes;
  std::vector<std::vector<std::string>> positional;
  std::vector<std::vector<std::pair<std::string, std::string>>> dangling;
  auto operator<=>(const NsKey&) const = default;
};

inline std::map<NsKey, Rational> transported(const RestrictedOutcome& r, const View& from, const View& to,
                                             const std::vector<NodeId>& phi, const std::vector<EdgeId>& emap) {
  std::map<NsKey, Rational> out;
  const std::size_t k = from.anchors.size();
  // Scope order equals anchor order (both sorted by source id).
  std::vector<std::size_t> target(k);
  for (std::size_t i = 0; i < k; ++i) {
    NodeId img = phi[from.anchors[i]];
    target[i] = static_cast<std::size_t>(std::find(to.anchors.begin(), to.anchors.end(), img) - to.anchors.begin());
  }
  for (auto& [part, p] : r.support) {
    NsKey key;
    key.nodes.resize(k);
    key.positional.resize(k);
    key.dangling.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = target[i];
      const NodeId ah = to.anchors[j];
      const auto& from_ports = from.ports[from.anchors[i]];
      const auto& to_ports = to.ports[ah];
      key.nodes[j] = part[i].node;
      key.positional[j].assign(to_ports.size(), std::string());
      for (std::size_t q = 0; q < from_ports.size(); ++q) {
        const auto& port = from_ports[q];
        if (!port.local_edge) {
          key.dangling[j].push_back({port.label, part[i].ports[q]});
          continue;
        }
        EdgeId le = emap.empty() ? *port.local_edge : emap[*port.local_edge];
        std::size_t slot = 0;
        while (slot < to_ports.size() && to_ports[slot].local_edge != le) ++slot;
        if (slot == to_ports.size()) throw std::logic_error("view isomorphism does not carry a port");
        key.positional[j][slot] = part[i].ports[q];
      }
      std::sort(key.dangling[j].begin(), key.dangling[j].end());
    }
    out[std::move(key)] += p;
  }
  return out;
}

inline std::vector<std::string> sorted_port_labels(const View& v, NodeId local) {
  std::vector<std::string> out;
  for (auto& p : v.ports[local]) out.push_back(p.label);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Compares the marginals of two outcomes on anchor sets whose radius-T
/// views are isomorphic, for every view isomorphism (up to `max_isomorphisms`).
inline NsVerdict verify_non_signaling(const Outcome& og, const Outcome& oh, std::span<const NodeId> ag,
                                      std::span<const NodeId> ah, std::size_t radius,
                                      std::size_t max_isomorphisms = 100000) {
  if (og.input().graph().is_multi() || oh.input().graph().is_multi())
    throw input_error("non-signaling certification supports simple graphs only");
  const View g0 = extract_view(og.input(), ag, 0), h0 = extract_view(oh.input(), ah, 0);
  const View gt = extract_view(og.input(), ag, radius), ht = extract_view(oh.input(), ah, radius);
  NsVerdict verdict;
  if (!views_isomorphic(g0, h0)) {
    verdict.status = NsStatus::precondition_unmet;
    verdict.detail = "radius-0 views are not isomorphic";
    return verdict;
  }
  const auto rg = restrict(og, ag);
  const auto rh = restrict(oh, ah);
  const auto identity = [&] {
    std::vector<NodeId> id(ht.size());
    for (NodeId i = 0; i < id.size(); ++i) id[i] = i;
    return id;
  }();
  const auto reference = detail::transported(rh, ht, ht, identity, {});

  bool any = false;
  for_each_view_isomorphism(gt, ht, [&](const std::vector<NodeId>& phi) {
    // The restriction to the anchors must also be an isomorphism of the
    // radius-0 views.
    for (NodeId a : gt.anchors) {
      NodeId b = phi[a];
      if (gt.base.node_label(a) != ht.base.node_label(b) ||
          detail::sorted_port_labels(gt, a) != detail::sorted_port_labels(ht, b))
        return true;
    }
    any = true;
    ++verdict.isomorphisms_checked;
    auto emap = edge_map(gt.base, ht.base, phi);
    if (detail::transported(rg, gt, ht, phi, emap) != reference) {
      verdict.status = NsStatus::violation;
      verdict.detail = "marginals differ under view isomorphism #" + std::to_string(verdict.isomorphisms_checked);
      return false;
    }
    if (verdict.isomorphisms_checked >= max_isomorphisms) {
      verdict.exhaustive = false;
      return false;
    }
    return true;
  });
  if (!any) {
    verdict.status = NsStatus::precondition_unmet;
    verdict.detail = "radius-" + std::to_string(radius) + " views are not isomorphic";
  }
  return verdict;
}

}  // namespace loclab
