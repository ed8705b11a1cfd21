#include "anisofreq/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anisofreq/error.hpp"

namespace anisofreq {

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ',';
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        emit(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? (indent > 0 ? ", " : ",") : ",";
        if (!flat) {
          out += nl;
          out += pad;
        }
        first = false;
        emit(e, indent, depth + 1, out);
      }
      if (!flat) {
        out += nl;
        out += close_pad;
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : Json(format_number(v)).dump();
      return;
    }
    default:
      out += j.dump();
  }
}

Vec2 vec_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, "expected a 2-vector [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep a marker that this is a float so readers do not narrow it to int.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += '\n';
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    require(!ec, "cannot create " + target.parent_path().string() + ": " + ec.message(), ErrorCode::Io);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), "cannot open " + tmp.string() + " for writing", ErrorCode::Io);
    out << content;
    out.flush();
    require(static_cast<bool>(out), "write to " + tmp.string() + " failed", ErrorCode::Io);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  require(!ec, "rename to " + path + " failed: " + ec.message(), ErrorCode::Io);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path, ErrorCode::Io);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json to_json(const QuadForm& q) { return {{"alpha", q.alpha()}, {"beta", q.beta()}, {"gamma", q.gamma()}}; }

QuadForm quadform_from_json(const Json& j) {
  require(j.is_object() && j.contains("alpha") && j.contains("beta") && j.contains("gamma"),
          "quadratic form needs alpha, beta and gamma");
  return {j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("gamma").get<double>()};
}

Json to_json(const DomainSpec& d) {
  if (const auto* x = std::get_if<Disk>(&d))
    return {{"type", "disk"}, {"radius", x->radius}, {"center", {x->center.x, x->center.y}}};
  if (const auto* x = std::get_if<Rectangle>(&d)) return {{"type", "rectangle"}, {"hw", x->halfwidth}, {"hh", x->halfheight}};
  if (const auto* x = std::get_if<Polygon>(&d)) {
    Json v = Json::array();
    for (const auto& p : x->vertices) v.push_back({p.x, p.y});
    return {{"type", "polygon"}, {"vertices", v}};
  }
  const auto& e = std::get<Ellipse>(d);
  return {{"type", "ellipse"},
          {"center", {e.center.x, e.center.y}},
          {"map", {{e.map.m00, e.map.m01}, {e.map.m10, e.map.m11}}}};
}

DomainSpec domain_from_json(const Json& j) {
  try {
    require(j.is_object() && j.contains("type"), "domain needs a \"type\" field");
    const auto type = j.at("type").get<std::string>();
    DomainSpec d;
    if (type == "disk") {
      Disk disk{{0.0, 0.0}, j.at("radius").get<double>()};
      if (j.contains("center")) disk.center = vec_from_json(j.at("center"));
      d = disk;
    } else if (type == "rectangle") {
      d = Rectangle{j.at("hw").get<double>(), j.at("hh").get<double>()};
    } else if (type == "polygon") {
      Polygon p;
      for (const auto& v : j.at("vertices")) p.vertices.push_back(vec_from_json(v));
      d = p;
    } else if (type == "ellipse") {
      const auto& m = j.at("map");
      require(m.is_array() && m.size() == 2, "ellipse map must be a 2x2 array");
      const Vec2 r0 = vec_from_json(m[0]), r1 = vec_from_json(m[1]);
      d = Ellipse{j.contains("center") ? vec_from_json(j.at("center")) : Vec2{}, Mat2{r0.x, r0.y, r1.x, r1.y}};
    } else if (type == "square") {
      d = domains::square();
    } else if (type == "lshape") {
      d = domains::l_shape();
    } else if (type == "ra") {
      d = domains::rectangle_ra(j.at("a").get<double>());
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown domain type \"" + type + "\"");
    }
    validate(d);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed domain JSON: ") + e.what());
  }
}

Json to_json(const GradientMetric& g) { return {{"m11", g.m11}, {"m12", g.m12}, {"m22", g.m22}}; }

Json to_json(const SolverOptions& o) {
  return {{"tol", o.tol},
          {"max_iter", o.max_iter},
          {"continuation", o.continuation},
          {"step_rule", o.step_rule == StepRule::Backtracking ? "backtracking" : "fixed"},
          {"continuation_stages", o.continuation_stages},
          {"block_size", o.block_size}};
}

Json to_json(const OptimizeOptions& o) {
  return {{"grid_n", o.grid_n},
          {"theta_tol", o.theta_tol},
          {"flat_tolerance", o.flat_tolerance},
          {"route", o.route == Route::Sheared ? "sheared" : "direct"},
          {"mesh_level", o.mesh.level},
          {"coarse_boundary", o.mesh.coarse_boundary},
          {"solver", to_json(o.solver)}};
}

Json to_json(const EigenResult& r) {
  return {{"lambda", r.lambda},
          {"p", r.p},
          {"form", to_json(r.form)},
          {"iterations", r.iterations},
          {"residual", r.residual}};
}

namespace {

Json samples_json(const std::vector<ProfileSample>& samples) {
  Json out = Json::array();
  for (const auto& s : samples) out.push_back(Json::array({s.theta, s.lambda}));
  return out;
}

}  // namespace

Json to_json(const OptimizeResult& r) {
  return {{"a", r.a},
          {"p", r.p},
          {"lambda_min", r.lambda_min},
          {"lambda_max", r.lambda_max},
          {"theta_star", r.theta_star},
          {"alpha_star", r.alpha_star},
          {"extremizer", to_json(r.extremizer)},
          {"minimizers", r.minimizers},
          {"flat_disk_flag", r.flat_disk_flag},
          {"multiplicity_warning", r.multiplicity_warning},
          {"relative_spread", r.relative_spread},
          {"residual", r.residual},
          {"mesh_level", r.mesh_level},
          {"theta_profile", samples_json(r.theta_profile)},
          {"refinement", samples_json(r.refinement)}};
}

Json to_json(const VerificationEntry& e) {
  Json measured = Json::object();
  for (const auto& [k, v] : e.measured) measured[k] = v;
  return {{"name", e.name},
          {"claim", e.claim},
          {"passed", e.passed},
          {"tolerance", e.tolerance},
          {"mesh_level", e.mesh_level},
          {"residual", e.residual},
          {"measured", measured},
          {"note", e.note}};
}

Json to_json(const VerificationReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"passed", r.passed()}, {"entries", entries}};
}

Json envelope(Json payload, const std::string& timestamp) {
  return {{"schema_version", kSchemaVersion}, {"timestamp", timestamp}, {"payload", std::move(payload)}};
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string eigenfunction_csv(const Mesh& m, const std::vector<double>& u) {
  require(u.size() == m.node_count(), "eigenfunction size does not match the mesh");
  std::string out = "x,y,u\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec2 n = m.nodes()[i];
    out += format_number(n.x) + ',' + format_number(n.y) + ',' + format_number(u[i]) + '\n';
  }
  return out;
}

std::string profile_csv(const std::vector<ProfileSample>& samples) {
  std::string out = "theta,lambda\n";
  for (const auto& s : samples) out += format_number(s.theta) + ',' + format_number(s.lambda) + '\n';
  return out;
}

}  // namespace anisofreq
