#pragma once

// The `stripes` command line: validate, graph, autos, reduce, check, report,
// render. Every JSON document has sorted keys and a schema_version field.
//
// Exit codes: 0 ok, 1 usage or I/O, 2 parse/validation, 3 oracle mismatch.

#include <algorithm>
#include <exception>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "striped/atlas_io.hpp"
#include "striped/autgroup.hpp"
#include "striped/core.hpp"
#include "striped/geometry.hpp"
#include "striped/graph.hpp"
#include "striped/reduce.hpp"
#include "striped/svg.hpp"

namespace striped::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kOracleMismatch = 3 };

namespace detail {

struct Failure {
  ExitCode code;
  nlohmann::json error;
};

inline Failure failure(ExitCode code, std::string kind, std::string message) {
  return {code, {{"kind", std::move(kind)}, {"message", std::move(message)}}};
}

inline void emit(std::ostream& out, nlohmann::json doc) {
  doc["schema_version"] = kSchemaVersion;
  out << doc.dump(2) << '\n';
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw failure(kUsage, "io", "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline StripedAtlas load(const std::string& path) { return parse_atlas(read_file(path)); }

inline nlohmann::json violations_json(const ValidationReport& r) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : r.violations) out.push_back({{"axiom", v.axiom}, {"ids", v.ids}, {"message", v.message}});
  return out;
}

inline nlohmann::json trace_json(const std::vector<ContractionStep>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : trace) out.push_back({{"edge", to_json(s.edge)}, {"kept", s.kept}, {"removed", s.removed}});
  return out;
}

inline nlohmann::json strip_ids(const StripedAtlas& atlas) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& s : atlas.strips) ids.push_back(s.id);
  return ids;
}

/// Affinization replaces gluing maps without touching (vertices, half-edges,
/// pairing, signs). With complete model geometry it is run and checked;
/// otherwise only the combinatorial data is available and is used as is.
inline nlohmann::json affine_marker(const StripedAtlas& reduced) {
  bool model = std::all_of(reduced.strips.begin(), reduced.strips.end(), [](const StripSpec& s) {
    return is_model_strip(s) && s.geom.size() == s.interval_count();
  });
  if (!model) return {{"status", "combinatorial"}};
  auto result = affinize_atlas({reduced, {}});
  if (result.atlas.atlas != reduced) throw std::logic_error("affinization changed the combinatorial data");
  return {{"status", "applied"}, {"affine_gluings", result.atlas.gluing_maps.size()}};
}

inline nlohmann::json component_report(const StripedAtlas& component) {
  ReducedForm form = reduce_atlas(component);
  StripedGraph g = build_graph(form.atlas);
  AutSet autos = automorphisms(g);
  HomotopyType h = form.outcome == ReducedOutcome::Reduced ? HomotopyType::Contractible : HomotopyType::Circle;
  return {{"strips", strip_ids(component)},
          {"reduction",
           {{"outcome", outcome_name(form.outcome)},
            {"contractions", form.trace.size()},
            {"reduced_strips", strip_ids(form.atlas)}}},
          {"affine", affine_marker(form.atlas)},
          {"group", to_json(group_report(autos, h), g)}};
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Striped surfaces: decorated graphs, automorphism groups, reduction", "stripes"};
  app.require_subcommand(1);
  std::string file;
  std::string svg_out;
  bool oracle = false;
  bool cayley = false;

  auto* validate = app.add_subcommand("validate", "Check an atlas document against the atlas axioms");
  auto* graph = app.add_subcommand("graph", "Emit the decorated graph as JSON");
  auto* autos = app.add_subcommand("autos", "Enumerate the automorphism group");
  auto* reduce = app.add_subcommand("reduce", "Contract unessential edges and emit the reduced atlas");
  auto* check = app.add_subcommand("check", "Report the saturation and local-triviality conditions");
  auto* report = app.add_subcommand("report", "Full pipeline ending in a group report");
  auto* render = app.add_subcommand("render", "Draw the atlas as an SVG figure");
  for (auto* sub : {validate, graph, autos, reduce, check, report, render}) {
    sub->add_option("FILE", file, "Atlas document")->required();
  }
  autos->add_flag("--oracle", oracle, "Cross-check against the brute-force enumeration");
  autos->add_flag("--cayley", cayley, "Include the Cayley table");
  render->add_option("--out", svg_out, "Output SVG path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    detail::emit(out, {{"error", {{"kind", "usage"}, {"message", e.what()}}}});
    err << app.help();
    return kUsage;
  }

  try {
    if (validate->parsed()) {
      StripedAtlas atlas = parse_atlas_unchecked(detail::read_file(file));
      ValidationReport r = validate_atlas(atlas);
      if (!r.ok()) {
        throw detail::Failure{kInvalid, {{"kind", "validation"}, {"message", "invalid atlas"},
                                         {"violations", detail::violations_json(r)}}};
      }
      detail::emit(out, {{"ok", true}, {"strips", atlas.strips.size()}, {"gluings", atlas.gluings.size()}});
    } else if (graph->parsed()) {
      detail::emit(out, {{"graph", to_json(build_graph(detail::load(file)))}});
    } else if (autos->parsed()) {
      StripedGraph g = build_graph(detail::load(file));
      AutSet set = automorphisms(g);
      nlohmann::json doc = to_json(set);
      if (oracle) {
        AutSet brute;
        try {
          brute = automorphisms_bruteforce(g);
        } catch (const OracleBoundsError& e) {
          throw detail::failure(kUsage, "oracle-bounds", e.what());
        }
        if (brute.elements != set.elements) {
          throw detail::Failure{kOracleMismatch, {{"kind", "oracle-mismatch"},
                                                  {"message", "search and brute-force enumerations differ"},
                                                  {"search_order", set.order()},
                                                  {"oracle_order", brute.order()}}};
        }
        doc["oracle"] = {{"agrees", true}, {"order", brute.order()}};
      }
      if (cayley) doc["cayley_table"] = cayley_table(set);
      detail::emit(out, std::move(doc));
    } else if (reduce->parsed()) {
      StripedAtlas atlas = detail::load(file);
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& form : reduce_components(atlas)) {
        comps.push_back({{"outcome", outcome_name(form.outcome)},
                         {"is_reduced", is_reduced(form.atlas)},
                         {"trace", detail::trace_json(form.trace)},
                         {"atlas", serialize_atlas(form.atlas)}});
      }
      detail::emit(out, {{"components", comps}});
    } else if (check->parsed()) {
      detail::emit(out, {{"conditions", to_json(check_conditions(detail::load(file)))}});
    } else if (report->parsed()) {
      StripedAtlas atlas = detail::load(file);
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& comp : connected_components(atlas)) comps.push_back(detail::component_report(restrict_atlas(atlas, comp)));
      detail::emit(out, {{"connected", comps.size() == 1}, {"components", comps}});
    } else if (render->parsed()) {
      StripedAtlas atlas = detail::load(file);
      std::string svg = render_svg(atlas);
      std::ofstream f(svg_out, std::ios::binary);
      if (!f || !(f << svg) || !f.flush()) throw detail::failure(kUsage, "io", "cannot write '" + svg_out + "'");
      detail::emit(out, {{"written", svg_out}, {"strips", atlas.strips.size()}});
    }
    return kOk;
  } catch (const detail::Failure& f) {
    detail::emit(out, {{"error", f.error}});
    return f.code;
  } catch (const ParseError& e) {
    detail::emit(out, {{"error", {{"kind", "parse"}, {"message", e.detail()}, {"line", e.line()}, {"column", e.column()}}}});
    return kInvalid;
  } catch (const ValidationError& e) {
    detail::emit(out, {{"error", {{"kind", "validation"}, {"message", "invalid atlas"},
                                  {"violations", detail::violations_json(e.report())}}}});
    return kInvalid;
  } catch (const std::exception& e) {
    detail::emit(out, {{"error", {{"kind", "internal"}, {"message", e.what()}}}});
    return kUsage;
  }
}

}  // namespace striped::cli
