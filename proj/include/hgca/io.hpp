#pragma once

// Instance file format (strict JSON with decimal-string weights so round
// trips are bit exact), canonical serialization, and seeded generators.
// Canonical form: fixed key order, edges sorted with sorted good lists,
// weights rendered by format_rational; parse(serialize(x)) reproduces x and
// serialize(parse(f)) = f for canonical f.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hgca/rational.hpp"
#include "hgca/rng.hpp"
#include "hgca/valuation.hpp"

namespace hgca {

using Json = nlohmann::ordered_json;

namespace detail {

inline void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const auto& k : allowed) ok = ok || item.key() == k;
    if (!ok) throw std::invalid_argument(where + ": unknown field '" + item.key() + "'");
  }
}

inline int require_int(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument(where + ": missing field '" + key + "'");
  if (!obj[key].is_number_integer())
    throw std::invalid_argument(where + ": field '" + key + "' must be an integer");
  return obj[key].get<int>();
}

inline Rational require_weight(const Json& value, const std::string& where) {
  if (!value.is_string())
    throw std::invalid_argument(where + ": weight must be a decimal string");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

}  // namespace detail

inline Instance instance_from_json(const Json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("instance file: top level must be an object");
  detail::require_keys(doc, {"num_players", "num_goods", "valuations", "support_graph"},
                       "instance file");
  int n = detail::require_int(doc, "num_players", "instance file");
  int m = detail::require_int(doc, "num_goods", "instance file");
  if (!doc.contains("valuations") || !doc["valuations"].is_array())
    throw std::invalid_argument("instance file: field 'valuations' must be an array");

  std::vector<HypergraphValuation> valuations;
  int vi = 0;
  for (const auto& val : doc["valuations"]) {
    std::string where = "valuation " + std::to_string(vi);
    if (!val.is_object()) throw std::invalid_argument(where + ": must be an object");
    detail::require_keys(val, {"vertex_weights", "edges"}, where);
    if (!val.contains("vertex_weights") || !val["vertex_weights"].is_array())
      throw std::invalid_argument(where + ": field 'vertex_weights' must be an array");
    std::vector<Rational> weights;
    int gi = 0;
    for (const auto& w : val["vertex_weights"])
      weights.push_back(detail::require_weight(w, where + " good " + std::to_string(gi++)));
    std::vector<HyperEdge> edges;
    if (val.contains("edges")) {
      if (!val["edges"].is_array())
        throw std::invalid_argument(where + ": field 'edges' must be an array");
      int ei = 0;
      for (const auto& edge : val["edges"]) {
        std::string ewhere = where + " edge " + std::to_string(ei++);
        if (!edge.is_object()) throw std::invalid_argument(ewhere + ": must be an object");
        detail::require_keys(edge, {"goods", "weight"}, ewhere);
        if (!edge.contains("goods") || !edge["goods"].is_array())
          throw std::invalid_argument(ewhere + ": field 'goods' must be an array");
        std::vector<int> goods;
        for (const auto& g : edge["goods"]) {
          if (!g.is_number_integer())
            throw std::invalid_argument(ewhere + ": goods must be integers");
          goods.push_back(g.get<int>());
        }
        if (!edge.contains("weight"))
          throw std::invalid_argument(ewhere + ": missing field 'weight'");
        edges.push_back(HyperEdge{std::move(goods), detail::require_weight(edge["weight"], ewhere)});
      }
    }
    try {
      valuations.push_back(HypergraphValuation::make(m, std::move(weights), std::move(edges)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
    ++vi;
  }

  std::optional<std::vector<std::pair<int, int>>> support;
  if (doc.contains("support_graph")) {
    if (!doc["support_graph"].is_array())
      throw std::invalid_argument("instance file: field 'support_graph' must be an array");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc["support_graph"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw std::invalid_argument(
            "instance file: support_graph entries must be 2-element integer arrays");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    support = std::move(edges);
  }
  return Instance::make(n, m, std::move(valuations), std::move(support));
}

inline Instance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("instance file: invalid syntax: ") + e.what());
  }
  return instance_from_json(doc);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("instance file: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

inline Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["num_players"] = inst.num_players;
  doc["num_goods"] = inst.num_goods;
  Json vals = Json::array();
  for (const auto& v : inst.valuations) {
    Json jv;
    Json weights = Json::array();
    for (const auto& w : v.vertex_weights) weights.push_back(format_rational(w));
    jv["vertex_weights"] = std::move(weights);
    Json edges = Json::array();
    for (const auto& e : v.edges) {
      Json je;
      je["goods"] = e.goods;
      je["weight"] = format_rational(e.weight);
      edges.push_back(std::move(je));
    }
    jv["edges"] = std::move(edges);
    vals.push_back(std::move(jv));
  }
  doc["valuations"] = std::move(vals);
  if (inst.support_graph) {
    Json support = Json::array();
    for (auto [a, b] : *inst.support_graph) support.push_back(Json::array({a, b}));
    doc["support_graph"] = std::move(support);
  }
  return doc;
}

inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("instance file: cannot write '" + path + "'");
  out << serialize_instance(inst);
}

// Two players over m goods (m a perfect square): player 0 holds weight
// sqrt(m) on good 0 only; player 1 holds unit edges from good 0 to every
// other good and no vertex weight. A greedy order that serves player 0
// first earns sqrt(m); the optimum hands everything to player 1 for m - 1.
inline Instance generate_star(int m) {
  if (m < 1) throw std::invalid_argument("star: m must be >= 1");
  int s = 0;
  while (s * s < m) ++s;
  if (s * s != m) throw std::invalid_argument("star: m must be a perfect square");
  std::vector<Rational> w0(m, Rational(0));
  w0[0] = Rational(s);
  HypergraphValuation v0 = HypergraphValuation::make(m, std::move(w0), {});
  std::vector<HyperEdge> edges;
  for (int j = 1; j < m; ++j) edges.push_back(HyperEdge{{0, j}, Rational(1)});
  HypergraphValuation v1 =
      HypergraphValuation::make(m, std::vector<Rational>(m, Rational(0)), std::move(edges));
  return Instance::make(2, m, {std::move(v0), std::move(v1)}, std::nullopt);
}

// rows x cols grid: support graph is the grid; every player draws integer
// vertex weights and per-grid-edge weights uniformly from {0,...,10}.
inline Instance generate_grid(int rows, int cols, int num_players, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid: dimensions must be >= 1");
  if (num_players < 1) throw std::invalid_argument("grid: need at least one player");
  int m = rows * cols;
  std::vector<std::pair<int, int>> support;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int g = r * cols + c;
      if (c + 1 < cols) support.push_back({g, g + 1});
      if (r + 1 < rows) support.push_back({g, g + cols});
    }
  Rng rng = derived_rng(seed, 0x67726964ull);
  std::vector<HypergraphValuation> vals;
  for (int i = 0; i < num_players; ++i) {
    std::vector<Rational> weights(m);
    for (auto& w : weights) w = Rational(rng.next_below(11));
    std::vector<HyperEdge> edges;
    for (auto [a, b] : support) {
      Rational w(rng.next_below(11));
      if (w > 0) edges.push_back(HyperEdge{{a, b}, w});
    }
    vals.push_back(HypergraphValuation::make(m, std::move(weights), std::move(edges)));
  }
  return Instance::make(num_players, m, std::move(vals), support);
}

// Each player wants one random bundle of the given size, worth an integer
// value in {1,...,10}, and nothing else.
inline Instance generate_single_minded(int m, int num_players, int bundle_size,
                                       std::uint64_t seed) {
  if (m < 1 || num_players < 1) throw std::invalid_argument("single-minded: bad sizes");
  if (bundle_size < 1 || bundle_size > m)
    throw std::invalid_argument("single-minded: bundle size out of range");
  Rng rng = derived_rng(seed, 0x736d696eull);
  std::vector<HypergraphValuation> vals;
  for (int i = 0; i < num_players; ++i) {
    std::vector<int> bundle;
    while (static_cast<int>(bundle.size()) < bundle_size) {
      int g = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
      if (std::find(bundle.begin(), bundle.end(), g) == bundle.end()) bundle.push_back(g);
    }
    Rational value(1 + rng.next_below(10));
    vals.push_back(HypergraphValuation::make(
        m, std::vector<Rational>(m, Rational(0)), {HyperEdge{std::move(bundle), value}}));
  }
  return Instance::make(num_players, m, std::move(vals), std::nullopt);
}

// Random hypergraph valuations: integer vertex weights in {0,...,wmax} and
// `edge_count` edges per player, sizes uniform in {2,...,r}, weights in
// {0,...,wmax}. Duplicate good sets merge; rank 1 means no edges.
inline Instance generate_random_hypergraph(int m, int num_players, int r, int edge_count,
                                           int weight_max, std::uint64_t seed) {
  if (m < 1 || num_players < 1) throw std::invalid_argument("random-hypergraph: bad sizes");
  if (r < 1 || r > m) throw std::invalid_argument("random-hypergraph: rank out of range");
  if (edge_count < 0 || weight_max < 0)
    throw std::invalid_argument("random-hypergraph: bad parameters");
  Rng rng = derived_rng(seed, 0x72616e64ull);
  std::vector<HypergraphValuation> vals;
  for (int i = 0; i < num_players; ++i) {
    std::vector<Rational> weights(m);
    for (auto& w : weights) w = Rational(rng.next_below(static_cast<std::uint64_t>(weight_max) + 1));
    std::vector<HyperEdge> edges;
    if (r >= 2)
      for (int e = 0; e < edge_count; ++e) {
        int size = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r - 1)));
        std::vector<int> goods;
        while (static_cast<int>(goods.size()) < size) {
          int g = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
          if (std::find(goods.begin(), goods.end(), g) == goods.end()) goods.push_back(g);
        }
        Rational w(rng.next_below(static_cast<std::uint64_t>(weight_max) + 1));
        if (w > 0) edges.push_back(HyperEdge{std::move(goods), w});
      }
    vals.push_back(HypergraphValuation::make(m, std::move(weights), std::move(edges)));
  }
  return Instance::make(num_players, m, std::move(vals), std::nullopt);
}

}  // namespace hgca
