#include "netbound/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "netbound/channels.hpp"
#include "netbound/emax.hpp"
#include "netbound/error.hpp"
#include "netbound/network.hpp"
#include "netbound/network_io.hpp"
#include "netbound/sweep.hpp"

namespace netbound::cli {

namespace {

using nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

channels::Channel builtin_channel(const std::string& kind_name, double param) {
  const auto kind = channels::parse_kind(kind_name);
  if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown channel kind '" + kind_name + "'");
  if (*kind == channels::ChannelKind::Custom) {
    throw Error(ErrorCode::InvalidArgument, "custom channels are only available in network files");
  }
  return channels::make_channel(*kind, param);
}

void cmd_channel(const std::string& kind, double param, std::ostream& out) {
  const auto ch = builtin_channel(kind, param);
  const auto m = channels::closed_form_measures(ch.kind, param);
  out << "kind=" << channels::to_string(ch.kind) << '\n';
  out << "param=" << fixed6(param) << '\n';
  out << "choi_simulable=" << (ch.choi_simulable ? "true" : "false") << '\n';
  if (m.e_r) out << "e_r=" << fixed6(m.e_r->bits) << '\n';
  if (m.e_sq_ub) out << "e_sq_ub=" << fixed6(m.e_sq_ub->bits) << '\n';
  if (m.e_max) out << "e_max(closed_form)=" << fixed6(m.e_max->bits) << '\n';
  out << "e_max(sdp)=" << fixed6(emax::emax_sigma_sdp(ch).value) << '\n';
}

void cmd_emax(const std::string& kind, double param, const std::string& method, std::ostream& out) {
  const auto ch = builtin_channel(kind, param);
  if (method == "closed") {
    const auto m = channels::closed_form_measures(ch.kind, param);
    if (!m.e_max) {
      throw Error(ErrorCode::MissingMeasure,
                  "no closed form for E_max of " + std::string(channels::to_string(ch.kind)));
    }
    out << "e_max(closed_form)=" << fixed6(m.e_max->bits) << '\n';
  } else if (method == "reduced") {
    out << "e_max(reduced)=" << fixed6(emax::emax_reduced(ch).value) << '\n';
  } else {
    out << "e_max(sdp)=" << fixed6(emax::emax_sigma_sdp(ch).value) << '\n';
    out << "e_max_lower(sdp)=" << fixed6(emax::emax_lower_sdp(ch).value) << '\n';
    out << "e_max_upper_marginal(sdp)=" << fixed6(emax::emax_upper_marginal_sdp(ch).value) << '\n';
  }
}

ordered_json number_or_null(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return *v;
}

ordered_json cut_json(const network::CutBound& b) {
  ordered_json j;
  j["c_a"] = b.cut.c_a;
  j["crossing_edges"] = b.crossing_edges;
  j["e_versatile"] = number_or_null(b.e_versatile);
  const auto measure = [&](network::Measure m) -> std::optional<double> {
    auto it = b.e_by_measure.find(m);
    if (it == b.e_by_measure.end()) return std::nullopt;
    return it->second;
  };
  j["e_emax"] = number_or_null(measure(network::Measure::Emax));
  j["e_r"] = number_or_null(measure(network::Measure::ER));
  j["e_sq_ub"] = number_or_null(measure(network::Measure::EsqUb));
  j["mu"] = number_or_null(b.mu);
  ordered_json bounds = ordered_json::object();
  for (auto kind : {network::ProfileKind::ErVersatile, network::ProfileKind::Emax}) {
    std::optional<double> v;
    for (const auto& e : b.ebit_bounds)
      if (e.profile == kind) v = e.value;
    bounds[std::string(network::to_string(kind))] = number_or_null(v);
  }
  j["ebit_bounds"] = bounds;
  return j;
}

struct NetworkArgs {
  std::string file;
  std::optional<double> epsilon;
  bool min_cut = false;
  bool exhaustive = false;
  bool maxflow = false;
};

void cmd_network(const NetworkArgs& args, std::ostream& out) {
  auto file = network::load_network(args.file);
  const double epsilon = args.epsilon.value_or(file.epsilon);
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--epsilon must lie in [0, 1)");
  }
  network::MeasureCache cache;
  const network::Evaluator eval(file.graph, cache);

  // The versatile weight is required; rerunning it surfaces the missing edge.
  const auto evaluate = [&](const network::Cut& cut) {
    auto b = network::evaluate_cut(eval, cut, epsilon);
    if (!b.e_versatile) network::cut_entanglement(eval, cut, network::Policy::versatile());
    return b;
  };

  ordered_json doc;
  doc["epsilon"] = epsilon;
  if (args.min_cut) {
    auto method = network::MinCutMethod::Auto;
    if (args.exhaustive) method = network::MinCutMethod::Exhaustive;
    if (args.maxflow) method = network::MinCutMethod::MaxFlow;
    const auto best = network::min_cut(eval, network::Policy::versatile(), method);
    doc["min_cut"] = cut_json(evaluate(best.cut));
  } else {
    ordered_json cuts = ordered_json::array();
    for (const auto& cut : network::all_cuts(file.graph)) cuts.push_back(cut_json(evaluate(cut)));
    doc["cuts"] = std::move(cuts);
  }
  out << doc.dump(2) << '\n';
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": bad integer '" + item + "'");
    }
  }
  return values;
}

int cmd_sweep(const std::string& ks, int grid, const std::string& output, bool sdp_check,
              std::ostream& out, std::ostream& err) {
  sweep::SweepSpec spec{parse_int_list(ks, "--k"), grid};
  const std::string csv = sweep::to_csv(sweep::run_sweep(spec));
  if (output.empty() || output == "-") {
    out << csv;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f || !(f << csv) || !f.flush()) {
      throw Error(ErrorCode::InvalidArgument, "cannot write '" + output + "'");
    }
  }
  if (sdp_check) {
    const auto check = sweep::sdp_check(spec);
    const bool ok = check.max_deviation <= 1e-4;
    err << "sdp_check points=" << check.points << " max_deviation="
        << sweep::format_number(check.max_deviation) << (ok ? " ok" : " FAILED") << '\n';
    if (!ok) return kVerificationFailed;
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingMeasure: return kMissingMeasure;
    case ErrorCode::NoConvergence:
    case ErrorCode::Infeasible:
    case ErrorCode::IllConditioned: return kVerificationFailed;
    default: return kUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const acceptance::Oracles& oracles) {
  CLI::App app{"Entanglement cut bounds for quantum networks", "netbound"};
  app.require_subcommand(1);

  std::string kind;
  double param = 0.0;
  std::string method = "sdp";
  auto* channel = app.add_subcommand("channel", "Closed-form and SDP measures of one channel");
  channel->add_option("--kind", kind, "Channel kind")->required();
  channel->add_option("--param", param, "Channel parameter in [0, 1]")->required();

  auto* emax_cmd = app.add_subcommand("emax", "Max-relative entropy of entanglement of a channel");
  emax_cmd->add_option("--kind", kind, "Channel kind")->required();
  emax_cmd->add_option("--param", param, "Channel parameter in [0, 1]")->required();
  emax_cmd->add_option("--method", method, "sdp, reduced or closed")
      ->check(CLI::IsMember({"sdp", "reduced", "closed"}));

  NetworkArgs net;
  double epsilon = 0.0;
  auto* network_cmd = app.add_subcommand("network", "Cut bounds for a network file");
  network_cmd->add_option("--file", net.file, "Network JSON file")->required();
  auto* eps_opt = network_cmd->add_option("--epsilon", epsilon, "Override the file's epsilon");
  network_cmd->add_flag("--min-cut", net.min_cut, "Report only the minimizing cut");
  auto* ex_flag = network_cmd->add_flag("--exhaustive", net.exhaustive, "Enumerate all cuts");
  auto* mf_flag = network_cmd->add_flag("--maxflow", net.maxflow, "Use max-flow");
  ex_flag->excludes(mf_flag);

  std::string ks = "1,2,5,10";
  int grid = 101;
  std::string output;
  bool sdp_check = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "mu over the (x, lambda) grid as CSV");
  sweep_cmd->add_option("--k", ks, "Comma-separated dephasing counts");
  sweep_cmd->add_option("--grid", grid, "Points per axis");
  sweep_cmd->add_option("--output", output, "CSV path (stdout if omitted)");
  sweep_cmd->add_flag("--sdp-check", sdp_check, "Re-check a 5x5 subgrid against the SDP");

  std::string checks;
  auto* verify = app.add_subcommand("verify", "Run the verification checks");
  verify->add_option("--checks", checks, "Comma-separated check ids (default all)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (channel->parsed()) {
      cmd_channel(kind, param, out);
    } else if (emax_cmd->parsed()) {
      cmd_emax(kind, param, method, out);
    } else if (network_cmd->parsed()) {
      if (eps_opt->count() > 0) net.epsilon = epsilon;
      cmd_network(net, out);
    } else if (sweep_cmd->parsed()) {
      return cmd_sweep(ks, grid, output, sdp_check, out, err);
    } else if (verify->parsed()) {
      const auto ids = checks.empty() ? std::vector<int>{} : parse_int_list(checks, "--checks");
      const auto results = acceptance::run_checks(ids, oracles);
      acceptance::print_report(out, results);
      return acceptance::all_passed(results) ? kOk : kVerificationFailed;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kOk;
}

}  // namespace netbound::cli
