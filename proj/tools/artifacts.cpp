#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace rotacover {

void to_json(json& j, const Vec2& v) { j = json::array({v.x, v.y}); }
void from_json(const json& j, Vec2& v) { v = {j.at(0).get<double>(), j.at(1).get<double>()}; }

void to_json(json& j, const Arc& a) { j = {{"start", a.start}, {"length", a.length}}; }
void from_json(const json& j, Arc& a) { a = {j.at("start").get<double>(), j.at("length").get<double>()}; }

void to_json(json& j, const PolarBox& b) {
  j = {{"r_lo", b.r_lo}, {"r_hi", b.r_hi}, {"phi_lo", b.phi_lo}, {"phi_hi", b.phi_hi}};
}
void from_json(const json& j, PolarBox& b) {
  b = {j.at("r_lo").get<double>(), j.at("r_hi").get<double>(), j.at("phi_lo").get<double>(),
       j.at("phi_hi").get<double>()};
}

void to_json(json& j, const Hole& h) { j = {{"center", h.center}, {"radius", h.radius}, {"clearance", h.clearance}}; }
void from_json(const json& j, Hole& h) {
  h = {j.at("center").get<Vec2>(), j.at("radius").get<double>(), j.at("clearance").get<double>()};
}

namespace {

Verdict verdict_from(const std::string& s) {
  for (Verdict v : {Verdict::covered, Verdict::uncovered, Verdict::ambiguous})
    if (s == to_string(v)) return v;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

CriterionVerdict criterion_from(const std::string& s) {
  for (CriterionVerdict v : {CriterionVerdict::passes, CriterionVerdict::fails, CriterionVerdict::inconclusive})
    if (s == to_string(v)) return v;
  throw std::invalid_argument("unknown criterion verdict '" + s + "'");
}

}  // namespace

void to_json(json& j, const CoverageReport& r) {
  json cells = json::array();
  for (const CoverageCell& c : r.cells) cells.push_back({{"box", c.box}, {"verdict", to_string(c.verdict)}, {"depth", c.depth}});
  j = {{"region", r.region},
       {"eps", r.eps},
       {"max_depth", r.max_depth},
       {"cell_count", r.cell_count},
       {"covered_area", r.covered_area},
       {"uncovered_area", r.uncovered_area},
       {"ambiguous_area", r.ambiguous_area},
       {"cells", cells}};
}

void from_json(const json& j, CoverageReport& r) {
  r = {};
  r.region = j.at("region").get<PolarBox>();
  r.eps = j.at("eps").get<double>();
  r.max_depth = j.at("max_depth").get<int>();
  r.cell_count = j.at("cell_count").get<std::size_t>();
  r.covered_area = j.at("covered_area").get<double>();
  r.uncovered_area = j.at("uncovered_area").get<double>();
  r.ambiguous_area = j.at("ambiguous_area").get<double>();
  for (const json& c : j.at("cells")) {
    r.cells.push_back({c.at("box").get<PolarBox>(), verdict_from(c.at("verdict").get<std::string>()),
                       c.at("depth").get<int>()});
  }
}

void to_json(json& j, const GoodSequenceResult& r) {
  json shells = json::array();
  for (const ShellRecord& s : r.shells) {
    shells.push_back({{"r_lo", s.r_lo},
                      {"r_hi", s.r_hi},
                      {"eps", s.eps},
                      {"arc", s.arc},
                      {"angles", s.angles},
                      {"term", s.term},
                      {"extension", s.extension},
                      {"cell_count", s.cell_count},
                      {"covered_area", s.covered_area},
                      {"uncovered_area", s.uncovered_area},
                      {"ambiguous_area", s.ambiguous_area}});
  }
  j = {{"angles", r.angles}, {"limit", r.limit},   {"interval", r.interval},
       {"r_start", r.r_start}, {"shells", shells}, {"adjustments", r.adjustments}};
}

void from_json(const json& j, GoodSequenceResult& r) {
  r = {};
  r.angles = j.at("angles").get<std::vector<double>>();
  r.limit = j.at("limit").get<double>();
  r.interval = j.at("interval").get<Arc>();
  r.r_start = j.at("r_start").get<double>();
  r.adjustments = j.at("adjustments").get<std::vector<std::string>>();
  for (const json& s : j.at("shells")) {
    ShellRecord rec;
    rec.r_lo = s.at("r_lo").get<double>();
    rec.r_hi = s.at("r_hi").get<double>();
    rec.eps = s.at("eps").get<double>();
    rec.arc = s.at("arc").get<Arc>();
    rec.angles = s.at("angles").get<std::vector<double>>();
    rec.term = s.at("term").get<std::size_t>();
    rec.extension = s.at("extension").get<bool>();
    rec.cell_count = s.at("cell_count").get<std::size_t>();
    rec.covered_area = s.at("covered_area").get<double>();
    rec.uncovered_area = s.at("uncovered_area").get<double>();
    rec.ambiguous_area = s.at("ambiguous_area").get<double>();
    r.shells.push_back(std::move(rec));
  }
}

void to_json(json& j, const BadSequenceResult& r) {
  j = {{"angles", r.angles}, {"holes", r.holes}, {"clearances", r.clearances}};
}
void from_json(const json& j, BadSequenceResult& r) {
  r.angles = j.at("angles").get<std::vector<double>>();
  r.holes = j.at("holes").get<std::vector<Hole>>();
  r.clearances = j.at("clearances").get<std::vector<std::vector<double>>>();
}

void to_json(json& j, const PerfectSetResult& r) {
  j = {{"levels", r.levels}, {"holes", r.holes}, {"clearances", r.clearances}};
}
void from_json(const json& j, PerfectSetResult& r) {
  r.levels = j.at("levels").get<std::vector<std::vector<Arc>>>();
  r.holes = j.at("holes").get<std::vector<Hole>>();
  r.clearances = j.at("clearances").get<std::vector<std::vector<double>>>();
}

void to_json(json& j, const DilateCover& d) {
  j = {{"factors", d.factors},
       {"minimal_prefix", d.minimal_prefix},
       {"max_min_distance", d.max_min_distance},
       {"breakpoints", d.breakpoints}};
}
void from_json(const json& j, DilateCover& d) {
  d.factors = j.at("factors").get<std::vector<int>>();
  d.minimal_prefix = j.at("minimal_prefix").get<int>();
  d.max_min_distance = j.at("max_min_distance").get<double>();
  d.breakpoints = j.at("breakpoints").get<std::size_t>();
}

void to_json(json& j, const CriterionReport& r) {
  json annuli = json::array();
  for (const auto& [lo, hi] : r.annuli) annuli.push_back({lo, hi});
  j = {{"verdict", to_string(r.verdict)}, {"delta", r.delta}, {"annuli", annuli}, {"sups", r.sups}, {"note", r.note}};
}
void from_json(const json& j, CriterionReport& r) {
  r = {};
  r.verdict = criterion_from(j.at("verdict").get<std::string>());
  r.delta = j.at("delta").get<double>();
  for (const json& a : j.at("annuli")) r.annuli.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  r.sups = j.at("sups").get<std::vector<double>>();
  r.note = j.at("note").get<std::string>();
}

namespace {

json bumps_json(const std::vector<SmoothBump>& arcs) {
  json out = json::array();
  for (const SmoothBump& b : arcs) out.push_back({{"arc", b.arc}, {"mass", b.mass}, {"ramp", b.ramp}});
  return out;
}

}  // namespace

void to_json(json& j, const CantorReport& r) {
  json stages = json::array();
  for (const StageRecord& s : r.stages) {
    stages.push_back({{"n", s.n},
                      {"support_length", s.support_length},
                      {"top_mass", s.top_mass},
                      {"R", s.R},
                      {"envelope", s.envelope},
                      {"N", s.N},
                      {"diff_sup", s.diff_sup},
                      {"arc_count", s.arc_count},
                      {"evidence",
                       {{"R", s.evidence.R},
                        {"octave_sups", s.evidence.octave_sups},
                        {"tail_slope", s.evidence.tail_slope},
                        {"samples", s.evidence.samples}}},
                      {"arcs", bumps_json(s.arcs)}});
  }
  j = {{"root", r.root}, {"stages", stages}};
}

void from_json(const json& j, CantorReport& r) {
  r = {};
  r.root = j.at("root").get<Arc>();
  for (const json& s : j.at("stages")) {
    StageRecord rec;
    rec.n = s.at("n").get<int>();
    rec.support_length = s.at("support_length").get<double>();
    rec.top_mass = s.at("top_mass").get<double>();
    rec.R = s.at("R").get<double>();
    rec.envelope = s.at("envelope").get<double>();
    rec.N = s.at("N").get<int>();
    rec.diff_sup = s.at("diff_sup").get<double>();
    rec.arc_count = s.at("arc_count").get<std::size_t>();
    const json& ev = s.at("evidence");
    rec.evidence.R = ev.at("R").get<double>();
    rec.evidence.octave_sups = ev.at("octave_sups").get<std::vector<double>>();
    rec.evidence.tail_slope = ev.at("tail_slope").get<double>();
    rec.evidence.samples = ev.at("samples").get<std::size_t>();
    for (const json& b : s.at("arcs")) {
      rec.arcs.push_back({b.at("arc").get<Arc>(), b.at("mass").get<double>(), b.at("ramp").get<double>()});
    }
    r.stages.push_back(std::move(rec));
  }
}

}  // namespace rotacover

namespace rotacover::cli {

json artifact(const std::string& command, json body) {
  return {{"schema", 1}, {"command", command}, {"result", std::move(body)}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return json::parse(in);
}

std::string render_ppm(const CoverageReport& report, int width, int height) {
  // Unpainted pixels (cells not kept) stay gray.
  std::vector<unsigned char> px(static_cast<std::size_t>(width) * height * 3, 128);
  const PolarBox& reg = report.region;
  const double dr = (reg.r_hi - reg.r_lo) / height;
  const double dphi = (reg.phi_hi - reg.phi_lo) / width;
  for (const CoverageCell& c : report.cells) {
    // Pixels whose centers fall in [lo, hi) along each axis.
    const auto first = [](double lo, double origin, double step) {
      return static_cast<int>(std::ceil((lo - origin) / step - 0.5));
    };
    const int y0 = std::max(0, first(c.box.r_lo, reg.r_lo, dr));
    const int y1 = std::min(height, first(c.box.r_hi, reg.r_lo, dr));
    const int x0 = std::max(0, first(c.box.phi_lo, reg.phi_lo, dphi));
    const int x1 = std::min(width, first(c.box.phi_hi, reg.phi_lo, dphi));
    const unsigned char v = c.verdict == Verdict::covered ? 255 : c.verdict == Verdict::uncovered ? 0 : 128;
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        for (int k = 0; k < 3; ++k) px[(static_cast<std::size_t>(y) * width + x) * 3 + k] = v;
  }
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

std::string profile_csv(const CriterionReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "r_lo,r_hi,sup,delta\n";
  for (std::size_t i = 0; i < report.sups.size(); ++i) {
    out << report.annuli[i].first << "," << report.annuli[i].second << "," << report.sups[i] << "," << report.delta
        << "\n";
  }
  return out.str();
}

std::string envelope_csv(const CantorReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "n,R_n,R_next,support_length,top_mass,envelope,N,arc_count\n";
  const auto& st = report.stages;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const double next = i + 1 < st.size() ? st[i + 1].R : 8.0 * st[i].R;
    out << st[i].n << "," << st[i].R << "," << next << "," << st[i].support_length << "," << st[i].top_mass << ","
        << st[i].envelope << "," << st[i].N << "," << st[i].arc_count << "\n";
  }
  return out.str();
}

}  // namespace rotacover::cli
