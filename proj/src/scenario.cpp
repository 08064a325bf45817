#include "quadcover/scenario.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace quadcover::cli {

namespace {

// ---------------------------------------------------------------------------
// Minimal TOML-compatible reader: sections, key = value, numbers, strings,
// booleans and (nested) arrays. Enough for scenario files while staying a
// strict subset of TOML.
// ---------------------------------------------------------------------------

struct Value {
  enum class Type { Number, String, Boolean, Array };
  Type type = Type::Number;
  double num = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<Value> arr;
  int line = 0;
};

using Section = std::map<std::string, Value>;
using Document = std::map<std::string, Section>;

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void skip_ws(std::string_view s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

Value parse_value(std::string_view s, size_t& pos, const std::string& source, int line);

Value parse_array(std::string_view s, size_t& pos, const std::string& source, int line) {
  Value v;
  v.type = Value::Type::Array;
  v.line = line;
  ++pos;  // consume '['
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == ']') {
    ++pos;
    return v;
  }
  while (true) {
    v.arr.push_back(parse_value(s, pos, source, line));
    skip_ws(s, pos);
    if (pos >= s.size()) fail(source, line, "unterminated array");
    if (s[pos] == ',') {
      ++pos;
      skip_ws(s, pos);
      if (pos < s.size() && s[pos] == ']') {  // trailing comma
        ++pos;
        return v;
      }
      continue;
    }
    if (s[pos] == ']') {
      ++pos;
      return v;
    }
    fail(source, line, "expected ',' or ']' in array");
  }
}

Value parse_value(std::string_view s, size_t& pos, const std::string& source, int line) {
  skip_ws(s, pos);
  if (pos >= s.size()) fail(source, line, "missing value");
  Value v;
  v.line = line;
  const char c = s[pos];
  if (c == '[') return parse_array(s, pos, source, line);
  if (c == '"') {
    const size_t end = s.find('"', pos + 1);
    if (end == std::string_view::npos) fail(source, line, "unterminated string");
    v.type = Value::Type::String;
    v.str = std::string(s.substr(pos + 1, end - pos - 1));
    pos = end + 1;
    return v;
  }
  if (s.substr(pos, 4) == "true" || s.substr(pos, 5) == "false") {
    v.type = Value::Type::Boolean;
    v.boolean = s[pos] == 't';
    pos += v.boolean ? 4 : 5;
    return v;
  }
  size_t end = pos;
  while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) ||
                            s[end] == '+' || s[end] == '-' || s[end] == '.' || s[end] == '_'))
    ++end;
  std::string token(s.substr(pos, end - pos));
  token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
  double num = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), num);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    fail(source, line, "cannot parse number '" + token + "'");
  if (!std::isfinite(num)) fail(source, line, "non-finite number");
  v.type = Value::Type::Number;
  v.num = num;
  pos = end;
  return v;
}

// Strips a trailing comment, honoring quotes.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    else if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

Document parse_document(std::string_view text, const std::string& source) {
  Document doc;
  std::string section;  // "" holds top-level keys
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t nl = text.find('\n', start);
    std::string_view raw =
        text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view s = trim(strip_comment(raw));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(source, line_no, "expected ']' after section name");
      const std::string name(trim(s.substr(1, s.size() - 2)));
      if (name.empty()) fail(source, line_no, "empty section name");
      section = name;
      doc[section];
      continue;
    }

    const size_t eq = s.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    if (key.empty()) fail(source, line_no, "empty key");
    std::string_view rest = s.substr(eq + 1);
    size_t pos = 0;
    Value v = parse_value(rest, pos, source, line_no);
    skip_ws(rest, pos);
    if (pos != rest.size()) fail(source, line_no, "trailing characters after value");
    if (!doc[section].emplace(key, std::move(v)).second)
      fail(source, line_no, "duplicate key '" + key + "'");
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Scenario assembly
// ---------------------------------------------------------------------------

[[noreturn]] void missing(const std::string& section, const std::string& key) {
  throw ValidationError("scenario: [" + section + "] is missing key '" + key + "'");
}

const Section* find_section(const Document& doc, const std::string& name) {
  const auto it = doc.find(name);
  return it == doc.end() ? nullptr : &it->second;
}

const Section& require_section(const Document& doc, const std::string& name) {
  const Section* s = find_section(doc, name);
  if (!s) throw ValidationError("scenario: missing section [" + name + "]");
  return *s;
}

double require_number(const Section& sec, const std::string& section, const std::string& key) {
  const auto it = sec.find(key);
  if (it == sec.end()) missing(section, key);
  if (it->second.type != Value::Type::Number)
    throw ValidationError("scenario: [" + section + "] key '" + key + "' must be a number");
  return it->second.num;
}

double number_or(const Section& sec, const std::string& section, const std::string& key,
                 double fallback) {
  const auto it = sec.find(key);
  if (it == sec.end()) return fallback;
  if (it->second.type != Value::Type::Number)
    throw ValidationError("scenario: [" + section + "] key '" + key + "' must be a number");
  return it->second.num;
}

void reject_unknown_keys(const Section& sec, const std::string& section,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : sec)
    if (!allowed.count(key))
      throw ValidationError("scenario: [" + section + "] has unknown key '" + key +
                            "' (line " + std::to_string(value.line) + ")");
}

geometry::Quadrilateral read_quadrilateral(const Document& doc) {
  const Section& sec = require_section(doc, "quadrilateral");
  reject_unknown_keys(sec, "quadrilateral", {"vertices"});
  const auto it = sec.find("vertices");
  if (it == sec.end()) missing("quadrilateral", "vertices");
  const Value& v = it->second;
  if (v.type != Value::Type::Array || v.arr.size() != 4)
    throw ValidationError("scenario: [quadrilateral] vertices must be an array of 4 points");
  std::array<Eigen::Vector2d, 4> pts;
  for (size_t i = 0; i < 4; ++i) {
    const Value& p = v.arr[i];
    if (p.type != Value::Type::Array || p.arr.size() != 2 ||
        p.arr[0].type != Value::Type::Number || p.arr[1].type != Value::Type::Number)
      throw ValidationError("scenario: [quadrilateral] vertex " + std::to_string(i + 1) +
                            " must be [x, y]");
    pts[i] = {p.arr[0].num, p.arr[1].num};
  }
  try {
    return geometry::validate_quadrilateral(pts);
  } catch (const Error& e) {
    throw ValidationError(std::string("scenario: [quadrilateral] ") + e.what());
  }
}

channel::Environment read_environment(const Document& doc, std::string& source_out) {
  const Section& sec = require_section(doc, "environment");
  if (const auto it = sec.find("preset"); it != sec.end()) {
    reject_unknown_keys(sec, "environment", {"preset"});
    if (it->second.type != Value::Type::String)
      throw ValidationError("scenario: [environment] preset must be a string");
    const channel::Environment& env = channel::environment_preset(it->second.str);
    source_out = "preset:" + env.name;
    return env;
  }
  reject_unknown_keys(sec, "environment", {"name", "xi_los", "xi_nlos", "eta", "kappa"});
  channel::Environment env;
  env.name = "custom";
  if (const auto it = sec.find("name"); it != sec.end()) env.name = it->second.str;
  env.xi_los = require_number(sec, "environment", "xi_los");
  env.xi_nlos = require_number(sec, "environment", "xi_nlos");
  env.eta = require_number(sec, "environment", "eta");
  env.kappa = require_number(sec, "environment", "kappa");
  env.validate();
  source_out = "custom";
  return env;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source_name) {
  const Document doc = parse_document(text, source_name);

  for (const auto& [name, section] : doc) {
    static const std::set<std::string> known = {"",          "quadrilateral", "environment",
                                                "link",      "propulsion",    "mission",
                                                "optimizer"};
    if (!known.count(name))
      throw ValidationError("scenario: unknown section [" + name + "]");
  }

  Scenario sc;
  sc.quad = read_quadrilateral(doc);
  sc.env = read_environment(doc, sc.environment_source);

  const Section& link = require_section(doc, "link");
  reject_unknown_keys(link, "link", {"freq_hz", "pt_dbm", "pn_dbm", "g0_db", "m", "gr_db"});
  sc.link.freq_hz = require_number(link, "link", "freq_hz");
  sc.link.pt_dbm = require_number(link, "link", "pt_dbm");
  sc.link.pn_dbm = require_number(link, "link", "pn_dbm");
  sc.link.g0_db = require_number(link, "link", "g0_db");
  sc.link.m = require_number(link, "link", "m");
  sc.link.gr_db = number_or(link, "link", "gr_db", 0.0);
  sc.link.validate();

  const Section& prop = require_section(doc, "propulsion");
  reject_unknown_keys(prop, "propulsion",
                      {"delta", "rho", "varsigma", "rotor_area", "tip_speed", "k_ind",
                       "weight_n", "u0", "drag_ratio", "u_fwd", "u_to"});
  sc.propulsion.delta = require_number(prop, "propulsion", "delta");
  sc.propulsion.rho = require_number(prop, "propulsion", "rho");
  sc.propulsion.varsigma = require_number(prop, "propulsion", "varsigma");
  sc.propulsion.rotor_area = require_number(prop, "propulsion", "rotor_area");
  sc.propulsion.tip_speed = require_number(prop, "propulsion", "tip_speed");
  sc.propulsion.k_ind = require_number(prop, "propulsion", "k_ind");
  sc.propulsion.weight_n = require_number(prop, "propulsion", "weight_n");
  sc.propulsion.u0 = require_number(prop, "propulsion", "u0");
  sc.propulsion.drag_ratio = require_number(prop, "propulsion", "drag_ratio");
  sc.propulsion.u_fwd = require_number(prop, "propulsion", "u_fwd");
  sc.propulsion.u_to = require_number(prop, "propulsion", "u_to");
  sc.propulsion.validate();

  const Section& mission = require_section(doc, "mission");
  reject_unknown_keys(mission, "mission", {"bandwidth_hz", "payload_bits", "payload_bits_list"});
  sc.mission.bandwidth_hz = require_number(mission, "mission", "bandwidth_hz");
  sc.mission.payload_bits = require_number(mission, "mission", "payload_bits");
  sc.mission.pt_watts = std::pow(10.0, (sc.link.pt_dbm - 30.0) / 10.0);
  sc.mission.validate();
  sc.payload_bits_list = {sc.mission.payload_bits};
  if (const auto it = mission.find("payload_bits_list"); it != mission.end()) {
    if (it->second.type != Value::Type::Array)
      throw ValidationError("scenario: [mission] payload_bits_list must be an array");
    sc.payload_bits_list.clear();
    for (const Value& v : it->second.arr) {
      if (v.type != Value::Type::Number || !(v.num > 0.0))
        throw ValidationError("scenario: [mission] payload_bits_list entries must be > 0");
      sc.payload_bits_list.push_back(v.num);
    }
    if (sc.payload_bits_list.empty())
      throw ValidationError("scenario: [mission] payload_bits_list must not be empty");
  }

  if (const Section* opt = find_section(doc, "optimizer")) {
    reject_unknown_keys(*opt, "optimizer", {"h_min", "h_max", "tol_m", "grid_points"});
    sc.search.h_min = number_or(*opt, "optimizer", "h_min", sc.search.h_min);
    sc.search.h_max = number_or(*opt, "optimizer", "h_max", sc.search.h_max);
    sc.search.tol_m = number_or(*opt, "optimizer", "tol_m", sc.search.tol_m);
    sc.search.grid_points =
        static_cast<int>(number_or(*opt, "optimizer", "grid_points", sc.search.grid_points));
  }
  if (!(sc.search.h_min > 0.0))
    throw ValidationError("scenario: [optimizer] h_min must be > 0");
  if (!(sc.search.h_max > sc.search.h_min))
    throw ValidationError("scenario: [optimizer] h_max must exceed h_min");
  if (!(sc.search.tol_m > 0.0))
    throw ValidationError("scenario: [optimizer] tol_m must be > 0");
  if (sc.search.grid_points < 16)
    throw ValidationError("scenario: [optimizer] grid_points must be >= 16");

  if (const Section* top = find_section(doc, "")) {
    reject_unknown_keys(*top, "", {"transit_model"});
    if (const auto it = top->find("transit_model"); it != top->end()) {
      if (it->second.type != Value::Type::String)
        throw ValidationError("scenario: transit_model must be a string");
      sc.transit_model = energy::transit_model_from_string(it->second.str);
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace quadcover::cli
