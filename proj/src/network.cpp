#include "ppsim/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace ppsim {

namespace {

std::vector<std::string> feeds_of(const NodeSpec& spec) {
  if (const auto* r = std::get_if<RouterSpec>(&spec.kind)) {
    return {r->f_from, r->b_from};
  }
  if (const auto* l = std::get_if<LoadSpec>(&spec.kind)) {
    return {l->from};
  }
  return {};
}

}  // namespace

Network Network::build(std::span<const NodeSpec> specs) {
  Network net;
  net.specs_.assign(specs.begin(), specs.end());

  for (std::size_t i = 0; i < net.specs_.size(); ++i) {
    const NodeSpec& spec = net.specs_[i];
    if (spec.id.empty()) {
      throw std::invalid_argument("node without an id");
    }
    if (!net.index_of_.emplace(spec.id, i).second) {
      throw std::invalid_argument("duplicate node id: " + spec.id);
    }
  }

  std::size_t n_loads = 0;
  for (const NodeSpec& spec : net.specs_) {
    for (const std::string& feed : feeds_of(spec)) {
      if (feed.empty()) {
        throw std::invalid_argument("node " + spec.id + " has a missing feed");
      }
      const auto it = net.index_of_.find(feed);
      if (it == net.index_of_.end()) {
        throw std::invalid_argument("node " + spec.id +
                                    " references unknown node " + feed);
      }
      if (std::holds_alternative<LoadSpec>(net.specs_[it->second].kind)) {
        throw std::invalid_argument("node " + spec.id +
                                    " cannot draw from a load");
      }
    }
    if (std::holds_alternative<LoadSpec>(spec.kind)) {
      ++n_loads;
    }
  }
  if (n_loads != 1) {
    throw std::invalid_argument("network needs exactly one load terminal");
  }

  // Kahn topological sort over feed edges; leftovers mean a cycle.
  std::vector<std::size_t> in_degree(net.specs_.size(), 0);
  std::vector<std::vector<std::size_t>> dependents(net.specs_.size());
  for (std::size_t i = 0; i < net.specs_.size(); ++i) {
    for (const std::string& feed : feeds_of(net.specs_[i])) {
      const std::size_t j = net.index_of_.at(feed);
      dependents[j].push_back(i);
      ++in_degree[i];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < net.specs_.size(); ++i) {
    if (in_degree[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    net.topo_order_.push_back(i);
    if (std::holds_alternative<LoadSpec>(net.specs_[i].kind)) {
      net.load_index_ = i;
    }
    for (std::size_t j : dependents[i]) {
      if (--in_degree[j] == 0) ready.push_back(j);
    }
  }
  if (net.topo_order_.size() != net.specs_.size()) {
    throw std::invalid_argument("network wiring contains a cycle");
  }
  return net;
}

NetworkRun Network::run(std::size_t n_slots) {
  NetworkRun out;
  out.n_slots = n_slots;

  std::vector<SeededGenerator> source_gens;
  std::vector<Router> routers;
  std::vector<std::size_t> instance_of(specs_.size(), 0);
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (const auto* s = std::get_if<SourceSpec>(&specs_[i].kind)) {
      if (!(s->p >= 0.0 && s->p <= 1.0)) {
        throw std::invalid_argument("source probability outside [0, 1]");
      }
      instance_of[i] = source_gens.size();
      source_gens.emplace_back(s->seed);
      out.source_draws.emplace(specs_[i].id, BitStream{});
    } else if (const auto* r = std::get_if<RouterSpec>(&specs_[i].kind)) {
      instance_of[i] = routers.size();
      routers.emplace_back(r->mode, r->buffer, r->seed);
      out.router_traces.emplace(specs_[i].id, std::vector<SlotTrace>{});
      out.router_intervals.emplace(specs_[i].id, BitStream{});
    }
  }

  // Per-slot staging: the current draw of each source and the current
  // trace of each router, refreshed in topological order.
  std::vector<Bit> slot_draw(specs_.size(), 0);
  std::vector<SlotTrace> slot_trace(specs_.size());

  const auto port_bit = [&](const std::string& from, bool phase_b) -> Bit {
    const std::size_t j = index_of_.at(from);
    if (std::holds_alternative<SourceSpec>(specs_[j].kind)) {
      return slot_draw[j];
    }
    return phase_b ? slot_trace[j].out_b : slot_trace[j].out_f;
  };

  for (std::size_t t = 0; t < n_slots; ++t) {
    for (std::size_t i : topo_order_) {
      const NodeSpec& spec = specs_[i];
      if (const auto* s = std::get_if<SourceSpec>(&spec.kind)) {
        slot_draw[i] = source_gens[instance_of[i]].bernoulli(s->p);
        out.source_draws.at(spec.id).push_back(slot_draw[i]);
      } else if (const auto* r = std::get_if<RouterSpec>(&spec.kind)) {
        const Bit in_f = port_bit(r->f_from, false);
        const Bit in_b = port_bit(r->b_from, true);
        const SlotTrace tr = routers[instance_of[i]].step(in_f, in_b);
        slot_trace[i] = tr;
        out.router_traces.at(spec.id).push_back(tr);
        BitStream& intervals = out.router_intervals.at(spec.id);
        intervals.push_back(tr.out_f);
        intervals.push_back(tr.out_b);
      } else {
        const auto& l = std::get<LoadSpec>(spec.kind);
        const std::size_t j = index_of_.at(l.from);
        if (std::holds_alternative<SourceSpec>(specs_[j].kind)) {
          out.terminal.push_back(slot_draw[j]);
        } else {
          out.terminal.push_back(slot_trace[j].out_f);
          out.terminal.push_back(slot_trace[j].out_b);
        }
      }
    }
  }
  return out;
}

}  // namespace ppsim
