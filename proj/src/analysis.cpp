#include "crosscap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace crosscap {
namespace {

using Json = nlohmann::json;

const std::set<std::string, std::less<>> kRequestKeys{"components", "parameters", "order", "point", "box",
                                                       "grid", "tolerances", "outputs", "span", "step"};
const std::set<std::string, std::less<>> kToleranceKeys{"singular", "whitney", "symmetry", "reduction"};
const std::set<std::string, std::less<>> kOutputs{"report", "curve", "mesh"};

double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(where + " must be finite");
  return x;
}

int integer_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers_at(const Json& j, const std::string& where, std::size_t expected) {
  if (!j.is_array() || j.size() != expected) {
    throw InputError(where + " must be an array of " + std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void collect_parameters(const Expr& e, std::set<std::string>& names) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Parameter>) {
          names.insert(node.name);
        } else if constexpr (std::is_same_v<T, Unary>) {
          collect_parameters(*node.child, names);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_parameters(*node.lhs, names);
          collect_parameters(*node.rhs, names);
        }
      },
      e.node());
}

OrderedJson vec_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  OrderedJson out = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

OrderedJson parameters_json(const ParameterTable& params) {
  OrderedJson out = OrderedJson::object();
  for (const auto& [name, value] : params) out[name] = value;
  return out;
}

OrderedJson errors_json(const std::vector<ErrorRecord>& errors) {
  OrderedJson out = OrderedJson::array();
  for (const auto& e : errors) {
    OrderedJson rec;
    rec["code"] = std::string(error_code_name(e.code));
    rec["point"] = e.point ? vec_json(*e.point) : OrderedJson(nullptr);
    rec["message"] = e.message;
    out.push_back(std::move(rec));
  }
  return out;
}

OrderedJson a_json(const Jet2& a, int order) {
  OrderedJson out = OrderedJson::array();
  for (int d = 0; d <= order; ++d) {
    for (int j = d; j >= 0; --j) {
      OrderedJson c;
      c["j"] = j;
      c["k"] = d - j;
      c["value"] = a(j, d - j);
      out.push_back(std::move(c));
    }
  }
  return out;
}

OrderedJson b_json(const Jet1& b) {
  OrderedJson out = OrderedJson::array();
  for (int k = 3; k <= b.order(); ++k) {
    OrderedJson c;
    c["k"] = k;
    c["value"] = b[k];
    out.push_back(std::move(c));
  }
  return out;
}

OrderedJson symmetry_json(const SymmetryReport& report) {
  OrderedJson out;
  out["order"] = report.order;
  out["tolerance"] = report.tolerance;
  OrderedJson verdicts = OrderedJson::array();
  OrderedJson holds = OrderedJson::array();
  for (const auto& v : report.verdicts) {
    OrderedJson j;
    j["motion"] = to_string(v.motion);
    j["holds"] = v.holds;
    j["residual"] = v.residual;
    j["condition"] = std::string(v.condition);
    verdicts.push_back(std::move(j));
    if (v.holds) holds.push_back(to_string(v.motion));
  }
  out["verdicts"] = std::move(verdicts);
  out["symmetric_under"] = std::move(holds);
  return out;
}

OrderedJson frame_json(const CrossCapFrame& f) {
  OrderedJson out;
  out["origin"] = vec_json(f.origin);
  out["e1"] = vec_json(f.e1);
  out["e2"] = vec_json(f.e2);
  out["e3"] = vec_json(f.e3);
  return out;
}

OrderedJson crosscap_json(const CrossCapEntry& entry) {
  const CrossCapCertificate& cert = entry.certificate;
  const NormalForm& nf = entry.normal_form;
  OrderedJson out;
  out["point"] = vec_json(cert.point);
  out["singular_residual"] = cert.singular_residual;
  out["kernel_angle"] = cert.kernel_angle;
  out["whitney_det"] = cert.whitney_det;
  out["whitney_threshold"] = cert.whitney_threshold;
  out["frame"] = frame_json(nf.frame);
  out["order"] = nf.working_order;
  out["a"] = a_json(nf.a, nf.working_order);
  out["b"] = b_json(nf.b);
  OrderedJson table = OrderedJson::object();
  for (const auto& inv : characteristic_invariants(nf)) table[inv.label] = inv.value;
  out["invariants"] = std::move(table);
  out["reconstruction_residual"] = nf.reconstruction_residual;
  out["symmetry"] = symmetry_json(entry.symmetry);
  if (entry.double_points) {
    const DoublePointSummary& d = *entry.double_points;
    OrderedJson dp;
    dp["samples"] = d.samples;
    dp["arc"] = OrderedJson::array({d.arc_min, d.arc_max});
    dp["max_residual"] = d.max_residual;
    dp["min_normal_angle"] = d.min_normal_angle;
    dp["flagged"] = d.flagged;
    dp["orientation_sign"] = d.orientation_sign;
    out["double_points"] = std::move(dp);
  }
  OrderedJson warnings = OrderedJson::array();
  for (const auto& w : entry.warnings) warnings.push_back(w);
  out["warnings"] = std::move(warnings);
  return out;
}

OrderedJson header_json(const AnalysisReport& report, std::string_view command) {
  OrderedJson out;
  OrderedJson tool;
  tool["name"] = std::string(kToolName);
  tool["version"] = std::string(kToolVersion);
  out["tool"] = std::move(tool);
  out["command"] = std::string(command);
  out["request"] = report.request.echo();
  return out;
}

OrderedJson summary_json(const AnalysisReport& report) {
  OrderedJson out;
  out["entries"] = report.entries.size();
  out["crosscaps"] = report.crosscap_count();
  out["exit_code"] = report.exit_code();
  return out;
}

std::string format_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<std::string> entry_warnings(const CrossCapEntry& e, const RequestTolerances& tol) {
  std::vector<std::string> out;
  out.push_back("coefficients and symmetry verdicts are determined by the " +
                std::to_string(e.normal_form.working_order) + "-jet only");
  for (const auto& v : e.symmetry.verdicts) {
    if (!v.holds && v.residual <= 1e3 * tol.symmetry) {
      out.push_back(to_string(v.motion) + " residual " + format_short(v.residual) + " is close to the tolerance");
    }
    if (v.holds && v.residual > 0.0) {
      out.push_back(to_string(v.motion) + " holds with nonzero residual " + format_short(v.residual));
    }
  }
  if (std::abs(e.certificate.whitney_det) < 1e3 * e.certificate.whitney_threshold) {
    out.push_back("Whitney determinant is within three decades of its threshold");
  }
  return out;
}

ErrorRecord record(const Error& err, const std::optional<Eigen::Vector2d>& point) {
  return {err.code(), err.what(), point};
}

}  // namespace

AnalysisRequest AnalysisRequest::from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("request must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kRequestKeys.count(key)) throw InputError("unknown request key '" + key + "'");
  }
  AnalysisRequest r;
  if (!doc.contains("components")) throw InputError("request needs \"components\"");
  const Json& comps = doc["components"];
  if (!comps.is_array() || comps.size() != 3) throw InputError("components must be an array of three strings");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!comps[i].is_string()) throw InputError("components must be an array of three strings");
    r.components[i] = comps[i].get<std::string>();
  }
  if (doc.contains("parameters")) {
    const Json& params = doc["parameters"];
    if (!params.is_object()) throw InputError("parameters must be an object");
    for (const auto& [name, value] : params.items()) {
      const std::string where = "parameter '" + name + "'";
      std::vector<double> values;
      if (value.is_array()) {
        if (value.empty()) throw InputError(where + " has an empty list");
        for (const auto& x : value) values.push_back(number_at(x, where));
      } else {
        values.push_back(number_at(value, where));
      }
      r.parameters[name] = std::move(values);
    }
  }
  if (doc.contains("order")) r.order = integer_at(doc["order"], "order");
  if (doc.contains("point") && !doc["point"].is_null()) {
    const auto p = numbers_at(doc["point"], "point", 2);
    r.point = Eigen::Vector2d(p[0], p[1]);
  }
  if (doc.contains("box") && !doc["box"].is_null()) {
    const auto b = numbers_at(doc["box"], "box", 4);
    r.box = SearchBox{b[0], b[1], b[2], b[3]};
  }
  if (doc.contains("grid")) r.grid = integer_at(doc["grid"], "grid");
  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    if (!t.is_object()) throw InputError("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!kToleranceKeys.count(key)) throw InputError("unknown tolerance '" + key + "'");
      const double x = number_at(value, "tolerance '" + key + "'");
      if (key == "singular") r.tolerances.singular = x;
      if (key == "whitney") r.tolerances.whitney = x;
      if (key == "symmetry") r.tolerances.symmetry = x;
      if (key == "reduction") r.tolerances.reduction = x;
    }
  }
  if (doc.contains("outputs")) {
    const Json& o = doc["outputs"];
    if (!o.is_array()) throw InputError("outputs must be an array of strings");
    r.outputs.clear();
    for (const auto& x : o) {
      if (!x.is_string()) throw InputError("outputs must be an array of strings");
      r.outputs.push_back(x.get<std::string>());
    }
  }
  if (doc.contains("span")) r.span = number_at(doc["span"], "span");
  if (doc.contains("step")) r.step = number_at(doc["step"], "step");
  return r;
}

AnalysisRequest AnalysisRequest::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open request file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& err) {
    throw InputError("request file '" + path + "' is not valid JSON: " + err.what());
  }
  return from_json(doc);
}

void AnalysisRequest::validate() const {
  if (order < kMinReductionOrder || order > kMaxOrder) {
    throw InputError("order must lie in [3, 12], got " + std::to_string(order));
  }
  if (grid < 2) throw InputError("grid must be at least 2");
  for (double t : {tolerances.singular, tolerances.whitney, tolerances.symmetry, tolerances.reduction}) {
    if (!(t > 0.0)) throw InputError("tolerances must be positive");
  }
  if (box && !(box->u_min < box->u_max && box->v_min < box->v_max)) {
    throw InputError("box must satisfy umin < umax and vmin < vmax");
  }
  if (!(span > 0.0) || !(step > 0.0)) throw InputError("span and step must be positive");
  for (const auto& o : outputs) {
    if (!kOutputs.count(o)) throw InputError("unknown output '" + o + "'");
  }
  std::set<std::string> names;
  for (const auto& src : components) collect_parameters(*parse_expr(src), names);
  for (const auto& name : names) {
    if (!parameters.count(name)) throw UnboundParameter(name);
  }
}

bool AnalysisRequest::wants(std::string_view output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

OrderedJson AnalysisRequest::echo() const {
  OrderedJson out;
  out["components"] = OrderedJson::array({components[0], components[1], components[2]});
  OrderedJson params = OrderedJson::object();
  for (const auto& [name, values] : parameters) {
    if (values.size() == 1) {
      params[name] = values.front();
    } else {
      params[name] = OrderedJson(values);
    }
  }
  out["parameters"] = std::move(params);
  out["order"] = order;
  out["point"] = point ? vec_json(*point) : OrderedJson(nullptr);
  out["box"] = box ? OrderedJson::array({box->u_min, box->u_max, box->v_min, box->v_max}) : OrderedJson(nullptr);
  out["grid"] = grid;
  OrderedJson tol;
  tol["singular"] = tolerances.singular;
  tol["whitney"] = tolerances.whitney;
  tol["symmetry"] = tolerances.symmetry;
  tol["reduction"] = tolerances.reduction;
  out["tolerances"] = std::move(tol);
  out["outputs"] = OrderedJson(outputs);
  out["span"] = span;
  out["step"] = step;
  return out;
}

std::vector<ParameterTable> parameter_sweep(const AnalysisRequest& request) {
  std::vector<ParameterTable> out{ParameterTable{}};
  for (const auto& [name, listed] : request.parameters) {
    std::vector<double> values = listed;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<ParameterTable> next;
    next.reserve(out.size() * values.size());
    for (const auto& partial : out) {
      for (double x : values) {
        ParameterTable t = partial;
        t[name] = x;
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

MapDefinition map_for(const AnalysisRequest& request, const ParameterTable& parameters) {
  return MapDefinition::parse(request.components, parameters, request.order);
}

std::size_t AnalysisReport::crosscap_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.crosscaps.size();
  return n;
}

AnalysisReport run_analysis(const AnalysisRequest& request) {
  request.validate();
  const LocatorTolerances loc{request.tolerances.singular, request.tolerances.whitney};
  const ReductionOptions red{request.tolerances.reduction};
  AnalysisReport report{request, {}};

  for (const ParameterTable& params : parameter_sweep(request)) {
    SweepResult result{params, {}, {}};
    const MapDefinition defn = map_for(request, params);

    std::vector<Eigen::Vector2d> points;
    if (request.point) {
      points.push_back(*request.point);
    } else {
      try {
        for (const auto& c : find_singular_points(defn, request.search_box(), request.grid, loc)) {
          points.push_back(c.point);
        }
      } catch (const Error& err) {
        if (err.code() == ErrorCode::contract) throw;
        result.errors.push_back(record(err, std::nullopt));
      }
      if (points.empty() && result.errors.empty()) {
        result.errors.push_back({ErrorCode::not_crosscap, "no singular points in the search box", std::nullopt});
      }
    }

    for (const Eigen::Vector2d& p : points) {
      try {
        CrossCapCertificate cert = align_kernel(defn, p, request.order, loc);
        NormalForm nf = reduce_to_normal_form(cert, request.order, red);
        SymmetryReport sym = classify_symmetries(nf, request.tolerances.symmetry);
        CrossCapEntry entry{std::move(cert), std::move(nf), sym, std::nullopt, {}};
        entry.warnings = entry_warnings(entry, request.tolerances);
        if (request.wants("curve")) {
          try {
            TraceOptions opts;
            opts.arc_span = request.span;
            opts.step = request.step;
            opts.order = request.order;
            opts.domain = request.box;
            const DoublePointCurve curve = trace_double_points(defn, entry.certificate, opts);
            const TransversalityReport tr = transversality_check(defn, curve);
            double max_res = 0.0;
            for (const auto& s : curve.samples) max_res = std::max(max_res, s.residual);
            entry.double_points = DoublePointSummary{curve.samples.size(), curve.samples.front().arc,
                                                     curve.samples.back().arc, max_res, tr.min_angle,
                                                     tr.flagged.size(), curve.orientation_sign};
          } catch (const Error& err) {
            if (err.code() == ErrorCode::contract) throw;
            result.errors.push_back(record(err, p));
          }
        }
        result.crosscaps.push_back(std::move(entry));
      } catch (const Error& err) {
        if (err.code() == ErrorCode::contract) throw;
        result.errors.push_back(record(err, p));
      }
    }
    report.entries.push_back(std::move(result));
  }
  return report;
}

OrderedJson report_json(const AnalysisReport& report) {
  OrderedJson out = header_json(report, "analyze");
  OrderedJson entries = OrderedJson::array();
  for (const auto& e : report.entries) {
    OrderedJson j;
    j["parameters"] = parameters_json(e.parameters);
    OrderedJson caps = OrderedJson::array();
    for (const auto& c : e.crosscaps) caps.push_back(crosscap_json(c));
    j["crosscaps"] = std::move(caps);
    j["errors"] = errors_json(e.errors);
    entries.push_back(std::move(j));
  }
  out["entries"] = std::move(entries);
  out["summary"] = summary_json(report);
  return out;
}

OrderedJson classify_json(const AnalysisReport& report) {
  OrderedJson out = header_json(report, "classify");
  OrderedJson entries = OrderedJson::array();
  for (const auto& e : report.entries) {
    OrderedJson j;
    j["parameters"] = parameters_json(e.parameters);
    OrderedJson caps = OrderedJson::array();
    for (const auto& c : e.crosscaps) {
      OrderedJson cj;
      cj["point"] = vec_json(c.certificate.point);
      cj["symmetry"] = symmetry_json(c.symmetry);
      OrderedJson witnesses = OrderedJson::array();
      for (const auto& v : c.symmetry.verdicts) {
        if (!v.holds) continue;
        const SymmetryWitness w = symmetry_witness(c.normal_form, v.motion, c.symmetry.tolerance);
        OrderedJson wj;
        wj["motion"] = to_string(v.motion);
        wj["involution"] = w.description;
        wj["orientation_preserving"] = w.orientation_preserving;
        OrderedJson rows = OrderedJson::array();
        for (int i = 0; i < 3; ++i) rows.push_back(vec_json(w.world_matrix.row(i).transpose()));
        wj["world_matrix"] = std::move(rows);
        wj["transport_defect"] = transport_defect(c.normal_form, w.motion);
        witnesses.push_back(std::move(wj));
      }
      cj["witnesses"] = std::move(witnesses);
      caps.push_back(std::move(cj));
    }
    j["crosscaps"] = std::move(caps);
    j["errors"] = errors_json(e.errors);
    entries.push_back(std::move(j));
  }
  out["entries"] = std::move(entries);
  out["summary"] = summary_json(report);
  return out;
}

OrderedJson transport_json(const AnalysisReport& report, MotionTag motion) {
  OrderedJson out = header_json(report, "transport");
  out["motion"] = to_string(motion);
  const CongruenceMotion m = CongruenceMotion::of(motion);
  OrderedJson entries = OrderedJson::array();
  for (const auto& e : report.entries) {
    OrderedJson j;
    j["parameters"] = parameters_json(e.parameters);
    OrderedJson caps = OrderedJson::array();
    for (const auto& c : e.crosscaps) {
      const NormalForm moved = transport_normal_form(c.normal_form, m);
      OrderedJson cj;
      cj["point"] = vec_json(c.certificate.point);
      cj["a"] = a_json(moved.a, moved.working_order);
      cj["b"] = b_json(moved.b);
      cj["transport_defect"] = transport_defect(c.normal_form, m);
      caps.push_back(std::move(cj));
    }
    j["crosscaps"] = std::move(caps);
    j["errors"] = errors_json(e.errors);
    entries.push_back(std::move(j));
  }
  out["entries"] = std::move(entries);
  out["summary"] = summary_json(report);
  return out;
}

std::string mesh_csv(const MapDefinition& defn, const SearchBox& box, int grid) {
  if (grid < 2) throw InputError("mesh grid must be at least 2");
  std::string out = "u,v,x,y,z\n";
  char buf[256];
  for (int i = 0; i < grid; ++i) {
    const double u = box.u_min + (box.u_max - box.u_min) * i / (grid - 1);
    for (int k = 0; k < grid; ++k) {
      const double v = box.v_min + (box.v_max - box.v_min) * k / (grid - 1);
      Eigen::Vector3d x = Eigen::Vector3d::Constant(std::nan(""));
      try {
        x = eval_map_point(defn, Eigen::Vector2d(u, v));
      } catch (const DomainError&) {
      }
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", u, v, x.x(), x.y(), x.z());
      out += buf;
    }
  }
  return out;
}

DoublePointCurve run_selfint(const AnalysisRequest& request) {
  request.validate();
  const auto sweep = parameter_sweep(request);
  if (sweep.size() != 1) throw InputError("selfint needs a single parameter combination");
  const MapDefinition defn = map_for(request, sweep.front());
  const LocatorTolerances loc{request.tolerances.singular, request.tolerances.whitney};
  TraceOptions opts;
  opts.arc_span = request.span;
  opts.step = request.step;
  opts.order = request.order;
  opts.domain = request.box;

  std::vector<Eigen::Vector2d> points;
  if (request.point) {
    points.push_back(*request.point);
  } else {
    for (const auto& c : find_singular_points(defn, request.search_box(), request.grid, loc)) {
      points.push_back(c.point);
    }
  }
  std::string last = "no singular points in the search box";
  for (const auto& p : points) {
    try {
      const CrossCapCertificate cert = align_kernel(defn, p, request.order, loc);
      return trace_double_points(defn, cert, opts);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::contract) throw;
      last = err.what();
    }
  }
  throw SeedFailure("no cross cap to trace from: " + last, INFINITY);
}

OrderedJson error_json(const Error& err) {
  OrderedJson out;
  OrderedJson e;
  e["code"] = std::string(error_code_name(err.code()));
  e["message"] = err.what();
  out["error"] = std::move(e);
  return out;
}

}  // namespace crosscap
