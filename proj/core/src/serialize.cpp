#include "gcfib/serialize.hpp"

#include <charconv>
#include <cmath>

namespace gcfib {

namespace {

using nlohmann::json;

double scrub(double v) { return v == 0.0 ? 0.0 : v; }  // drop negative zero

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return scrub(v);
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

json to_json(const Vec3& v) { return json::array({scrub(v.x), scrub(v.y), scrub(v.z)}); }

json to_json(const Vec4& v) {
  return json::array({scrub(v[0]), scrub(v[1]), scrub(v[2]), scrub(v[3])});
}

json to_json(const Mat2& m) {
  return json::array(
      {json::array({scrub(m.a), scrub(m.b)}), json::array({scrub(m.c), scrub(m.d)})});
}

json to_json(const Mat4& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(scrub(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const FibrationReport& r) {
  json j;
  j["clean"] = r.clean;
  j["pairs"] = r.pairs;
  j["minSeparationSV"] = finite_or_null(r.min_separation_sv);
  j["witness"] = r.witness ? json::array({to_json(r.witness->first), to_json(r.witness->second)})
                           : json(nullptr);
  return j;
}

json to_json(const GageDecomposition& g) {
  json j;
  j["domainFactor"] = domain_factor_name(g.domain);
  j["planeNormal"] = to_json(g.plane_normal);
  j["imageNormal"] = to_json(g.image_normal);
  j["L"] = to_json(g.l);
  j["rank"] = g.rank;
  j["residual"] = g.fit_residual;
  j["singularValues"] = json::array({g.l_singular_values[0], g.l_singular_values[1]});
  j["planeDegenerate"] = g.plane_degenerate;
  return j;
}

json to_json(const CurvatureTensor4& r) {
  json comps;
  for (int p = 0; p < 6; ++p)
    for (int q = p; q < 6; ++q) {
      auto [i, jdx] = kPairIndex[static_cast<std::size_t>(p)];
      auto [k, l] = kPairIndex[static_cast<std::size_t>(q)];
      // The 1423 entry is determined by the Bianchi identity; store the rest.
      if (i == 1 && jdx == 4 && k == 2 && l == 3) continue;
      std::string label = std::to_string(i) + std::to_string(jdx) + std::to_string(k) +
                          std::to_string(l);
      comps[label] = r.pair_entry(p, q);
    }
  json j;
  j["components"] = comps;
  j["kappaMax"] = r.kappa_max();
  return j;
}

json to_json(const PropertyReport& r) {
  json j;
  j["r1"] = r.r1;
  j["bianchiResidual"] = r.bianchi_residual;
  j["r2"] = {{"ok", r.r2.ok},
             {"maxExcess", r.r2.max_excess},
             {"planeDistance", r.r2.plane_distance},
             {"unique", r.r2.unique}};
  j["r3"] = {{"ok", r.r3.ok}, {"maxDeviation", r.r3.max_deviation}};
  j["worstResidual"] = r.worst_residual;
  return j;
}

json to_json(const BergerMetricReport& r) {
  json j;
  j["s"] = r.s;
  j["kMin"] = r.k_min;
  j["kMax"] = r.k_max;
  j["fiberLength"] = r.fiber_length;
  j["delta"] = r.pinch;
  j["injBound"] = r.inj_bound;
  j["injLessThanBound"] = r.inj_less_than_bound;
  return j;
}

const char* domain_factor_name(DomainFactor f) {
  return f == DomainFactor::Minus ? "minus" : "plus";
}

std::string json_dump(const json& j) { return j.dump(2) + "\n"; }

std::string surface_csv(const std::vector<SurfacePoint>& pts) {
  std::string out = "lambda3,lambda4,xm1,xm2,xm3,xp1,xp2,xp3\n";
  for (const SurfacePoint& p : pts) {
    append_double(out, p.lambda3);
    out.push_back(',');
    append_double(out, p.lambda4);
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      append_double(out, p.xi_minus[i]);
    }
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      append_double(out, p.xi_plus[i]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string berger_csv(const std::vector<BergerMetricReport>& rows) {
  std::string out = "s,kMin,kMax,fiberLength,delta,injBound,injLessThanBound\n";
  for (const BergerMetricReport& r : rows) {
    append_double(out, r.s);
    out.push_back(',');
    append_double(out, r.k_min);
    out.push_back(',');
    append_double(out, r.k_max);
    out.push_back(',');
    append_double(out, r.fiber_length);
    out.push_back(',');
    append_double(out, r.pinch);
    out.push_back(',');
    append_double(out, r.inj_bound);
    out.push_back(',');
    out += r.inj_less_than_bound ? "true" : "false";
    out.push_back('\n');
  }
  return out;
}

}  // namespace gcfib
