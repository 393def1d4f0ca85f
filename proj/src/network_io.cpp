#include "netbound/network_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "netbound/error.hpp"

namespace netbound::network {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorCode::Parse, "network file: " + where + ": " + msg);
}

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

Complex entry(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(where, "matrix entries must be numbers or [re, im] pairs");
}

ComplexMatrix matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || !v[0].is_array() || v[0].empty()) {
    fail(where, "expected a non-empty list of rows");
  }
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols) fail(where, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(v[r][c], where);
  }
  return m;
}

channels::Channel parse_channel(const json& v, const std::string& where) {
  allow_keys(v, where, {"kind", "param", "kraus", "choi_simulable"});
  const std::string kind_name = text(require(v, where, "kind"), where + ".kind");
  const auto kind = channels::parse_kind(kind_name);
  if (!kind) fail(where, "unknown channel kind '" + kind_name + "'");

  std::optional<bool> simulable;
  if (auto it = v.find("choi_simulable"); it != v.end()) {
    if (!it->is_boolean()) fail(where + ".choi_simulable", "expected a boolean");
    simulable = it->get<bool>();
  }

  if (*kind == channels::ChannelKind::Custom) {
    const json& kraus = require(v, where, "kraus");
    if (!kraus.is_array() || kraus.empty()) fail(where + ".kraus", "expected a non-empty list");
    if (!simulable) fail(where, "custom channels must declare choi_simulable");
    std::vector<ComplexMatrix> ops;
    for (std::size_t i = 0; i < kraus.size(); ++i) {
      ops.push_back(matrix(kraus[i], where + ".kraus[" + std::to_string(i) + "]"));
    }
    auto ch = channels::make_custom_channel(std::move(ops), *simulable);
    if (auto it = v.find("param"); it != v.end()) ch.param = number(*it, where + ".param");
    return ch;
  }

  if (v.contains("kraus")) fail(where, "kraus is only allowed for custom channels");
  const double param = number(require(v, where, "param"), where + ".param");
  if (simulable && *simulable != channels::default_choi_simulable(*kind)) {
    fail(where, "choi_simulable contradicts the channel kind");
  }
  return channels::make_channel(*kind, param);
}

MeasureOverrides parse_overrides(const json& v, const std::string& where) {
  allow_keys(v, where, {"e_r", "e_max", "e_sq_ub"});
  MeasureOverrides o;
  if (v.contains("e_r")) o.e_r = number(v["e_r"], where + ".e_r");
  if (v.contains("e_max")) o.e_max = number(v["e_max"], where + ".e_max");
  if (v.contains("e_sq_ub")) o.e_sq_ub = number(v["e_sq_ub"], where + ".e_sq_ub");
  return o;
}

}  // namespace

NetworkFile parse_network(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("network file: ") + e.what());
  }
  allow_keys(doc, "root", {"epsilon", "nodes", "edges"});

  const double epsilon = number(require(doc, "root", "epsilon"), "epsilon");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) fail("epsilon", "must lie in [0, 1)");

  const json& nodes_json = require(doc, "root", "nodes");
  if (!nodes_json.is_array()) fail("nodes", "expected a list");
  std::vector<std::string> nodes;
  for (const auto& n : nodes_json) nodes.push_back(text(n, "nodes"));

  const json& edges_json = require(doc, "root", "edges");
  if (!edges_json.is_array()) fail("edges", "expected a list");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& e = edges_json[i];
    allow_keys(e, where, {"from", "to", "channel", "avg_uses", "overrides"});
    Edge edge;
    edge.from = text(require(e, where, "from"), where + ".from");
    edge.to = text(require(e, where, "to"), where + ".to");
    edge.avg_uses = number(require(e, where, "avg_uses"), where + ".avg_uses");
    try {
      edge.channel = parse_channel(require(e, where, "channel"), where + ".channel");
    } catch (const Error& err) {
      if (err.code() == ErrorCode::Parse) throw;
      fail(where + ".channel", err.what());
    }
    if (e.contains("overrides")) edge.overrides = parse_overrides(e["overrides"], where + ".overrides");
    edges.push_back(std::move(edge));
  }

  try {
    return {epsilon, NetworkGraph(std::move(nodes), std::move(edges))};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::Parse, e.what());
    throw;
  }
}

NetworkFile load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "network file: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

}  // namespace netbound::network
