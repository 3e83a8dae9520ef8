#pragma once

// CSV and JSON serialization of states, trajectories and run summaries.

#include <charconv>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "gclm/classify.hpp"
#include "gclm/errors.hpp"
#include "gclm/model.hpp"
#include "gclm/ode.hpp"

namespace gclm::io {

using json = nlohmann::ordered_json;

// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::ConfigError, "not a number: '" + s + "'");
  return x;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
    write_fields(header);
  }
  void row(const std::vector<double>& values) {
    if (values.size() != width_) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
    std::vector<std::string> f;
    f.reserve(values.size());
    for (double v : values) f.push_back(format_double(v));
    write_fields(f);
  }
  void row_text(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
    write_fields(fields);
  }

 private:
  void write_fields(const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) os_ << (i ? "," : "") << f[i];
    os_ << '\n';
  }
  std::ostream& os_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Numeric CSV only.
inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::ConfigError, "empty CSV");
  t.header = split_fields(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != t.header.size()) throw Error(ErrorKind::ConfigError, "CSV row width mismatch");
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& s : f) row.push_back(parse_double(s));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Column layouts. Time is always column 1.

inline std::vector<std::string> csv_header(const PoleFamilyState& s) {
  std::vector<std::string> h{"t"};
  for (std::size_t k = 0; k < s.poles.size(); ++k) {
    const std::string i = std::to_string(k + 1);
    for (const char* name : {"amp", "loc"}) {
      h.push_back(std::string(name) + i + "_re");
      h.push_back(std::string(name) + i + "_im");
    }
  }
  h.push_back("omega_av");
  return h;
}

inline std::vector<double> csv_row(const PoleFamilyState& s) {
  std::vector<double> r{s.t};
  for (const auto& p : s.poles) {
    r.insert(r.end(), {p.amp.real(), p.amp.imag(), p.loc.real(), p.loc.imag()});
  }
  r.push_back(s.omega_av);
  return r;
}

inline std::vector<std::string> csv_header(const DoublePoleState&) {
  return {"t", "amp2_re", "amp2_im", "loc_re", "loc_im", "omega_av", "gauge_q"};
}

inline std::vector<double> csv_row(const DoublePoleState& s) {
  return {s.t, s.amp2.real(), s.amp2.imag(), s.loc.real(), s.loc.imag(), s.omega_av, s.gauge_q};
}

inline std::vector<std::string> csv_header(const RealReducedState&) { return {"t", "omega2i", "vc"}; }
inline std::vector<double> csv_row(const RealReducedState& s) { return {s.t, s.omega2i, s.vc}; }

inline PoleFamilyState pole_family_from_row(const std::vector<double>& r) {
  if (r.size() < 2 || (r.size() - 2) % 4 != 0) throw Error(ErrorKind::ConfigError, "bad pole-family row");
  PoleFamilyState s;
  s.t = r[0];
  for (std::size_t i = 1; i + 4 <= r.size() - 1; i += 4)
    s.poles.push_back(Pole{cplx(r[i], r[i + 1]), cplx(r[i + 2], r[i + 3])});
  s.omega_av = r.back();
  return s;
}

inline DoublePoleState double_pole_from_row(const std::vector<double>& r) {
  if (r.size() != 7) throw Error(ErrorKind::ConfigError, "bad double-pole row");
  return DoublePoleState{r[0], cplx(r[1], r[2]), cplx(r[3], r[4]), r[5], r[6]};
}

inline RealReducedState real_from_row(const std::vector<double>& r) {
  if (r.size() != 3) throw Error(ErrorKind::ConfigError, "bad real-reduced row");
  return RealReducedState{r[0], r[1], r[2]};
}

template <class State>
void write_trajectory(std::ostream& os, const Trajectory<State>& tr) {
  if (tr.samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  CsvWriter w(os, csv_header(tr.samples.front()));
  for (const auto& s : tr.samples) w.row(csv_row(s));
}

// JSON.

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, where + ": expected {\"re\", \"im\"}");
  for (const auto& [k, _] : j.items())
    if (k != "re" && k != "im") throw Error(ErrorKind::ConfigError, where + ": unknown key '" + k + "'");
  if (!j.contains("re") || !j.contains("im") || !j["re"].is_number() || !j["im"].is_number())
    throw Error(ErrorKind::ConfigError, where + ": expected numeric re and im");
  return cplx(j["re"].get<double>(), j["im"].get<double>());
}

inline json to_json(const PoleFamilyState& s) {
  json poles = json::array();
  for (const auto& p : s.poles) poles.push_back(json{{"amp", to_json(p.amp)}, {"loc", to_json(p.loc)}});
  return json{{"kind", "poles"}, {"t", s.t}, {"poles", poles}, {"omega_av", s.omega_av}};
}

inline json to_json(const DoublePoleState& s) {
  return json{{"kind", "double_pole"}, {"t", s.t},          {"amp2", to_json(s.amp2)},
              {"loc", to_json(s.loc)}, {"omega_av", s.omega_av}, {"gauge_q", s.gauge_q}};
}

inline json to_json(const RealReducedState& s) {
  return json{{"kind", "real"}, {"t", s.t}, {"omega2i", s.omega2i}, {"vc", s.vc}};
}

template <class State>
json event_json(const Trajectory<State>& tr) {
  json j{{"kind", to_string(tr.event.kind)}, {"t_event", tr.event.t_event}};
  j["x_c"] = tr.event.x_c ? json(*tr.event.x_c) : json(nullptr);
  j["detail"] = tr.event.detail;
  j["state"] = to_json(tr.event.state);
  j["stats"] = json{{"accepted", tr.stats.accepted}, {"rejected", tr.stats.rejected}, {"rhs_evals", tr.stats.rhs_evals}};
  return j;
}

inline json to_json(const ClassificationResult& c) {
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  json j{{"verdict", to_string(c.verdict)}, {"t_c", opt(c.t_c)},   {"x_c", opt(c.x_c)},
         {"alpha", opt(c.alpha)},          {"beta", opt(c.beta)}, {"r_c", opt(c.r_c)}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline json to_json(const ExponentFit& f) {
  return json{{"alpha", f.alpha},   {"beta", f.beta},     {"loc_slope", f.loc_slope}, {"amp_slope", f.amp_slope},
              {"t_c", f.t_c},       {"tau_lo", f.tau_lo}, {"tau_hi", f.tau_hi},       {"samples", f.samples}};
}

}  // namespace gclm::io
