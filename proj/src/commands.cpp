#include "quadcover/commands.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "quadcover/placement.hpp"

namespace quadcover::cli {

namespace {

constexpr double kRadToDeg = 57.29577951308232;

struct Footprint {
  double a = 0.0;
  double b = 0.0;
};

Footprint footprint_for(const Scenario& sc, Mode mode) {
  if (mode == Mode::Inscribed) {
    const auto e = geometry::max_inscribed_ellipse(sc.quad);
    return {e.geo.a, e.geo.b};
  }
  const auto e = geometry::min_circumscribed_ellipse(sc.quad);
  return {e.geo.a, e.geo.b};
}

Json conic_json(const geometry::Conic& c) {
  return Json{{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3},
              {"c4", c.c4}, {"c5", c.c5}, {"c6", c.c6}};
}

Json vertices_json(const geometry::Quadrilateral& q) {
  Json arr = Json::array();
  for (const auto& p : q.labeled()) arr.push_back(Json::array({p.x(), p.y()}));
  return arr;
}

Json geo_json(const geometry::EllipseGeo& g) {
  return Json{{"center", Json::array({g.center.x(), g.center.y()})},
              {"semi_major_m", g.a},
              {"semi_minor_m", g.b},
              {"rotation_deg", g.rotation * kRadToDeg},
              {"area_m2", g.area()}};
}

// Scale aligning the canonical-normalized conic with the canonical-frame
// family representation (x'^2 coefficient t^2 for the inscribed family, y''^2
// coefficient s v (t - w) for the circumscribed one).
double family_frame_scale(const Scenario& sc, const geometry::Conic& world, Mode mode) {
  using namespace geometry;
  if (mode == Mode::Inscribed) {
    const auto [amap, acq] = affine_to_canonical(sc.quad);
    const Conic canon = transform_conic(world, amap);
    return acq.t * acq.t / canon.c1;
  }
  const auto& v = sc.quad.labeled();
  const bool cw = sc.quad.labels_clockwise();
  const std::array<Eigen::Vector2d, 4> pts =
      cw ? v : std::array<Eigen::Vector2d, 4>{v[0], v[3], v[2], v[1]};
  const auto quad_cw = validate_quadrilateral(pts);
  const auto [smap, scq] = similarity_to_canonical(quad_cw);
  const Conic canon = transform_conic(world, smap);
  const double c3_family = scq.s * scq.vw->x() * (scq.t - scq.vw->y());
  return c3_family / canon.c3;
}

Json inscribed_json(const Scenario& sc) {
  const auto e = geometry::max_inscribed_ellipse(sc.quad);
  Json j;
  j["conic"] = conic_json(e.conic);
  const double k = family_frame_scale(sc, e.conic, Mode::Inscribed);
  j["conic_family_scale"] = k;
  j["conic_family_frame"] = conic_json(e.conic.scaled(k));
  j.update(geo_json(e.geo));
  j["coverage_ratio"] = e.geo.area() / sc.quad.area();
  j["diagnostics"] = Json{
      {"closed_form_q", e.diagnostics.closed_form_q},
      {"closed_form_q_in_range", e.diagnostics.closed_form_q_in_range},
      {"closed_form_area_m2", std::isnan(e.diagnostics.closed_form_area)
                                  ? Json(nullptr)
                                  : Json(e.diagnostics.closed_form_area)},
      {"family_q", e.diagnostics.family_q},
      {"pencil_lambda", e.diagnostics.pencil_lambda},
      {"tangency_params", Json(e.diagnostics.tangency_params)},
  };
  return j;
}

Json circumscribed_json(const Scenario& sc) {
  const auto e = geometry::min_circumscribed_ellipse(sc.quad);
  Json j;
  j["conic"] = conic_json(e.conic);
  const double k = family_frame_scale(sc, e.conic, Mode::Circumscribed);
  j["conic_family_scale"] = k;
  j["conic_family_frame"] = conic_json(e.conic.scaled(k));
  j.update(geo_json(e.geo));
  j["outside_fraction"] = (e.geo.area() - sc.quad.area()) / e.geo.area();
  j["diagnostics"] = Json{
      {"u", e.diagnostics.u},
      {"real_roots", e.diagnostics.real_roots},
      {"ellipse_roots", e.diagnostics.ellipse_roots},
      {"direct_min_u", e.diagnostics.direct_min_u},
      {"direct_min_area_m2", e.diagnostics.direct_min_area},
      {"pencil_min_area_m2", e.diagnostics.pencil_min_area},
      {"cubic_min_area_m2", e.diagnostics.cubic_min_area},
      {"area_vs_pencil_rel", e.diagnostics.area_vs_pencil_rel},
      {"max_vertex_residual", e.diagnostics.max_vertex_residual},
  };
  return j;
}

Json beam_json(double a, double b, double h) {
  const auto g = placement::beam_geometry(a, b, h);
  return Json{{"theta_deg", g.theta * kRadToDeg}, {"psi_deg", g.psi * kRadToDeg},
              {"x0_m", g.x0},                      {"phi_deg", g.phi_deg},
              {"d_m", g.d}};
}

Json optimization_json(const optimizer::OptimizationResult& r) {
  return Json{{"h_opt_m", r.h_opt},
              {"objective_value", r.objective_value},
              {"bracket", Json::array({r.bracket_lo, r.bracket_hi})},
              {"iterations", r.iterations},
              {"stationarity_residual", r.stationarity_residual},
              {"boundary", r.boundary},
              {"domain", Json::array({r.domain_lo, r.domain_hi})}};
}

void flatten_into(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& value : j)
      flatten_into(value, prefix + "." + std::to_string(i++), out);
  } else {
    out += prefix;
    out += ',';
    if (j.is_number_float()) out += format_double(j.get<double>());
    else out += j.dump();
    out += '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

Mode mode_from_string(std::string_view s) {
  if (s == "inscribed") return Mode::Inscribed;
  if (s == "circumscribed") return Mode::Circumscribed;
  throw ValidationError("mode: expected inscribed or circumscribed, got '" + std::string(s) + "'");
}

ObjectiveKind objective_from_string(std::string_view s) {
  if (s == "pathloss") return ObjectiveKind::PathLoss;
  if (s == "snr") return ObjectiveKind::Snr;
  if (s == "energy") return ObjectiveKind::Energy;
  throw ValidationError("objective: expected pathloss, snr or energy, got '" + std::string(s) + "'");
}

std::string_view to_string(Mode m) {
  return m == Mode::Inscribed ? "inscribed" : "circumscribed";
}

std::string_view to_string(ObjectiveKind o) {
  switch (o) {
    case ObjectiveKind::PathLoss: return "pathloss";
    case ObjectiveKind::Snr: return "snr";
    case ObjectiveKind::Energy: return "energy";
  }
  return "pathloss";
}

Json ellipse_report(const Scenario& sc, Mode mode) {
  Json j;
  j["mode"] = std::string(to_string(mode));
  j["quadrilateral"] = Json{{"vertices", vertices_json(sc.quad)},
                            {"area_m2", sc.quad.area()},
                            {"labels_clockwise", sc.quad.labels_clockwise()}};
  j.update(mode == Mode::Inscribed ? inscribed_json(sc) : circumscribed_json(sc));
  return j;
}

Json altitude_report(const Scenario& sc, ObjectiveKind objective, Mode mode) {
  const Footprint fp = footprint_for(sc, mode);
  Json j;
  j["objective"] = std::string(to_string(objective));
  j["mode"] = std::string(to_string(mode));
  j["environment"] = sc.env.name;
  j["semi_major_m"] = fp.a;
  j["semi_minor_m"] = fp.b;

  optimizer::OptimizationResult r;
  switch (objective) {
    case ObjectiveKind::PathLoss:
      r = optimizer::optimal_altitude_pathloss(fp.a, fp.b, sc.link, sc.env, sc.search);
      j["objective_unit"] = "dB path loss";
      break;
    case ObjectiveKind::Snr:
      r = optimizer::optimal_altitude_snr(fp.a, fp.b, sc.link, sc.env, sc.search);
      j["objective_unit"] = "dB SNR";
      break;
    case ObjectiveKind::Energy:
      r = optimizer::optimal_altitude_energy(fp.a, fp.b, sc.link, sc.env, sc.propulsion,
                                             sc.mission, sc.transit_model, sc.search);
      j["objective_unit"] = "J";
      break;
  }
  j.update(optimization_json(r));
  j.update(beam_json(fp.a, fp.b, r.h_opt));
  if (objective == ObjectiveKind::Energy) {
    j["hover_w"] = energy::hover_power_w(sc.propulsion);
    j["forward_w"] = energy::forward_power_w(sc.propulsion);
    j["vto_w"] = energy::vto_power_w(sc.propulsion);
    j["transit_model"] = std::string(energy::to_string(sc.transit_model));
    j["payload_bits"] = sc.mission.payload_bits;
    j["bandwidth_hz"] = sc.mission.bandwidth_hz;
  }
  return j;
}

std::string sweep_csv(const Scenario& sc, Mode mode, double h_min, double h_max, int steps) {
  if (!(h_min > 0.0) || !(h_max > h_min))
    throw ValidationError("sweep: requires 0 < h_min < h_max");
  if (steps < 2) throw ValidationError("sweep: steps must be >= 2");

  const Footprint fp = footprint_for(sc, mode);
  std::string out = "H_m,pl_max_db,snr_min_db,energy_J,psi_deg,theta_deg,phi_deg,x0_m,d_m,p_los\n";
  for (int i = 0; i < steps; ++i) {
    const double h = h_min + (h_max - h_min) * i / (steps - 1);
    const auto g = placement::beam_geometry(fp.a, fp.b, h);
    const double pl = channel::max_path_loss_db(fp.a, fp.b, h, sc.link, sc.env);
    const double snr = channel::min_snr_db(fp.a, fp.b, h, sc.link, sc.env);
    std::string energy_cell;
    try {
      energy_cell = format_double(energy::total_energy_j(
          fp.a, fp.b, h, sc.link, sc.env, sc.propulsion, sc.mission, sc.transit_model));
    } catch (const NonPositiveRateError&) {
      // leave empty
    }
    out += format_double(h);
    out += ',' + format_double(pl);
    out += ',' + format_double(snr);
    out += ',' + energy_cell;
    out += ',' + format_double(g.psi * kRadToDeg);
    out += ',' + format_double(g.theta * kRadToDeg);
    out += ',' + format_double(g.phi_deg);
    out += ',' + format_double(g.x0);
    out += ',' + format_double(g.d);
    out += ',' + format_double(channel::los_probability(g.phi_deg, sc.env));
    out += '\n';
  }
  return out;
}

Json sweep_json(const Scenario& sc, Mode mode, double h_min, double h_max, int steps) {
  const std::string csv = sweep_csv(sc, mode, h_min, h_max, steps);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  Json rows = Json::array();
  std::string line;
  while (std::getline(in, line)) {
    Json row;
    size_t start = 0;
    for (size_t k = 0; k < cols.size(); ++k) {
      const size_t comma = k + 1 < cols.size() ? line.find(',', start) : line.size();
      const std::string cell = line.substr(start, comma - start);
      start = comma + 1;
      if (cell.empty()) {
        row[cols[k]] = nullptr;
      } else {
        double value = 0.0;
        std::from_chars(cell.data(), cell.data() + cell.size(), value);
        row[cols[k]] = value;
      }
    }
    rows.push_back(row);
  }
  return Json{{"mode", std::string(to_string(mode))}, {"rows", rows}};
}

Json full_report(const Scenario& sc) {
  Json j;
  j["quadrilateral"] = Json{{"vertices", vertices_json(sc.quad)},
                            {"area_m2", sc.quad.area()},
                            {"labels_clockwise", sc.quad.labels_clockwise()}};

  const auto [amap, acq] = geometry::affine_to_canonical(sc.quad);
  const auto [smap, scq] = geometry::similarity_to_canonical(sc.quad);
  j["canonical"] = Json{
      {"affine_st", Json::array({acq.s, acq.t})},
      {"similarity_st", Json::array({scq.s, scq.t})},
      {"similarity_vw", Json::array({scq.vw->x(), scq.vw->y()})},
  };

  j["inscribed"] = inscribed_json(sc);
  j["circumscribed"] = circumscribed_json(sc);

  const Footprint insc = {j["inscribed"]["semi_major_m"], j["inscribed"]["semi_minor_m"]};
  const Footprint circ = {j["circumscribed"]["semi_major_m"], j["circumscribed"]["semi_minor_m"]};

  Json table = Json::array();
  for (const Mode mode : {Mode::Inscribed, Mode::Circumscribed}) {
    const Footprint fp = mode == Mode::Inscribed ? insc : circ;
    for (const auto& env : channel::environment_presets()) {
      const auto r = optimizer::optimal_altitude_pathloss(fp.a, fp.b, sc.link, env, sc.search);
      const auto angles = placement::beam_angles(fp.a, fp.b, r.h_opt);
      table.push_back(Json{{"mode", std::string(to_string(mode))},
                           {"environment", env.name},
                           {"h_opt_m", r.h_opt},
                           {"pl_max_db", r.objective_value},
                           {"theta_deg", angles.theta * kRadToDeg},
                           {"psi_deg", angles.psi * kRadToDeg},
                           {"stationarity_residual", r.stationarity_residual},
                           {"boundary", r.boundary}});
    }
  }
  j["optimal_altitude"] = table;

  j["powers"] = Json{{"hover_w", energy::hover_power_w(sc.propulsion)},
                     {"forward_w", energy::forward_power_w(sc.propulsion)},
                     {"vto_w", energy::vto_power_w(sc.propulsion)}};

  Json energy_rows = Json::array();
  for (const Mode mode : {Mode::Inscribed, Mode::Circumscribed}) {
    const Footprint fp = mode == Mode::Inscribed ? insc : circ;
    for (const double payload : sc.payload_bits_list) {
      energy::MissionSpec mission = sc.mission;
      mission.payload_bits = payload;
      const auto r = optimizer::optimal_altitude_energy(fp.a, fp.b, sc.link, sc.env,
                                                        sc.propulsion, mission,
                                                        sc.transit_model, sc.search);
      energy_rows.push_back(Json{{"mode", std::string(to_string(mode))},
                                 {"payload_bits", payload},
                                 {"h_opt_m", r.h_opt},
                                 {"energy_j", r.objective_value},
                                 {"boundary", r.boundary}});
    }
  }
  j["energy"] = Json{{"environment", sc.env.name},
                     {"transit_model", std::string(energy::to_string(sc.transit_model))},
                     {"bandwidth_hz", sc.mission.bandwidth_hz},
                     {"minima", energy_rows}};

  j["scenario"] = Json{
      {"environment",
       Json{{"source", sc.environment_source},
            {"name", sc.env.name},
            {"xi_los", sc.env.xi_los},
            {"xi_nlos", sc.env.xi_nlos},
            {"eta", sc.env.eta},
            {"kappa", sc.env.kappa}}},
      {"link",
       Json{{"freq_hz", sc.link.freq_hz},
            {"pt_dbm", sc.link.pt_dbm},
            {"pn_dbm", sc.link.pn_dbm},
            {"g0_db", sc.link.g0_db},
            {"m", sc.link.m},
            {"gr_db", sc.link.gr_db}}},
      {"propulsion",
       Json{{"delta", sc.propulsion.delta},
            {"rho", sc.propulsion.rho},
            {"varsigma", sc.propulsion.varsigma},
            {"rotor_area", sc.propulsion.rotor_area},
            {"tip_speed", sc.propulsion.tip_speed},
            {"k_ind", sc.propulsion.k_ind},
            {"weight_n", sc.propulsion.weight_n},
            {"u0", sc.propulsion.u0},
            {"drag_ratio", sc.propulsion.drag_ratio},
            {"u_fwd", sc.propulsion.u_fwd},
            {"u_to", sc.propulsion.u_to}}},
      {"mission",
       Json{{"bandwidth_hz", sc.mission.bandwidth_hz},
            {"payload_bits", sc.mission.payload_bits},
            {"pt_watts", sc.mission.pt_watts}}},
      {"optimizer",
       Json{{"h_min", sc.search.h_min},
            {"h_max", sc.search.h_max},
            {"tol_m", sc.search.tol_m},
            {"grid_points", sc.search.grid_points}}}};
  return j;
}

std::string flatten_csv(const Json& j) {
  std::string out = "key,value\n";
  flatten_into(j, "", out);
  return out;
}

std::string human_summary(const Json& j) {
  std::ostringstream os;
  if (j.contains("optimal_altitude")) {
    os << "quadrilateral area: " << j["quadrilateral"]["area_m2"].get<double>() << " m^2\n";
    os << "inscribed  a=" << j["inscribed"]["semi_major_m"].get<double>()
       << " b=" << j["inscribed"]["semi_minor_m"].get<double>()
       << " area=" << j["inscribed"]["area_m2"].get<double>()
       << " coverage=" << 100.0 * j["inscribed"]["coverage_ratio"].get<double>() << "%\n";
    os << "circumscribed a=" << j["circumscribed"]["semi_major_m"].get<double>()
       << " b=" << j["circumscribed"]["semi_minor_m"].get<double>()
       << " area=" << j["circumscribed"]["area_m2"].get<double>()
       << " outside=" << 100.0 * j["circumscribed"]["outside_fraction"].get<double>() << "%\n";
    os << "optimal altitude (path loss):\n";
    for (const auto& row : j["optimal_altitude"]) {
      os << "  " << row["mode"].get<std::string>() << " / "
         << row["environment"].get<std::string>() << ": H=" << row["h_opt_m"].get<double>()
         << " m, theta=" << row["theta_deg"].get<double>()
         << " deg, psi=" << row["psi_deg"].get<double>() << " deg\n";
    }
    os << "energy minima (" << j["energy"]["environment"].get<std::string>() << ", "
       << j["energy"]["transit_model"].get<std::string>() << "):\n";
    for (const auto& row : j["energy"]["minima"]) {
      os << "  " << row["mode"].get<std::string>()
         << " payload=" << row["payload_bits"].get<double>()
         << " bits: H=" << row["h_opt_m"].get<double>()
         << " m, E=" << row["energy_j"].get<double>() << " J\n";
    }
  } else if (j.contains("h_opt_m")) {
    os << j["objective"].get<std::string>() << " / " << j["mode"].get<std::string>() << " / "
       << j["environment"].get<std::string>() << ": H_opt=" << j["h_opt_m"].get<double>()
       << " m, objective=" << j["objective_value"].get<double>() << " "
       << j["objective_unit"].get<std::string>() << "\n";
  } else if (j.contains("semi_major_m")) {
    os << j["mode"].get<std::string>() << " ellipse: a=" << j["semi_major_m"].get<double>()
       << " m, b=" << j["semi_minor_m"].get<double>()
       << " m, area=" << j["area_m2"].get<double>() << " m^2\n";
  }
  return os.str();
}

}  // namespace quadcover::cli
