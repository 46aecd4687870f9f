#include "csvio.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common.hpp"

namespace sphstat {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c) throw Error(Errc::io_failure, "bad numeric field: " + s);
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string window_spec(const Window& w) {
  std::string s;
  for (int i = 0; i < w.dim; ++i) s += format_double(w.lo[i]) + ":";
  for (int i = 0; i < w.dim; ++i) {
    s += format_double(w.hi[i]);
    if (i + 1 < w.dim) s += ":";
  }
  return s;
}

Window parse_window_spec(const std::string& s, int dim) {
  std::vector<std::string> f = split(s, ':');
  if (int(f.size()) != 2 * dim) throw Error(Errc::io_failure, "bad window spec: " + s);
  Window w;
  w.dim = dim;
  for (int i = 0; i < dim; ++i) w.lo[i] = parse_double(f[std::size_t(i)]);
  for (int i = 0; i < dim; ++i) w.hi[i] = parse_double(f[std::size_t(dim + i)]);
  return w;
}

}  // namespace

void save_realization_csv(const Realization& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot open for writing: " + path);
  out << "# spherestats realization v1\n";
  out << "# gamma=" << format_double(r.params.gamma) << " radius=" << r.params.radii.spec()
      << " dim=" << r.dim << " seed=" << r.seed << " margin=" << format_double(r.margin)
      << "\n";
  out << "# window=" << window_spec(r.window) << "\n";
  out << "# sim_window=" << window_spec(r.sim_window) << "\n";
  out << "id";
  for (int i = 0; i < r.dim; ++i) out << ",x" << (i + 1);
  out << ",radius\n";
  for (std::size_t g = 0; g < r.count(); ++g) {
    out << g;
    for (int i = 0; i < r.dim; ++i) out << "," << format_double(r.center(g)[i]);
    out << "," << format_double(r.radii[g]) << "\n";
  }
  if (!out) throw Error(Errc::io_failure, "write failed: " + path);
}

Realization load_realization_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot open: " + path);
  Realization r;
  std::string line;
  bool have_params = false, have_window = false, have_sim = false, have_header = false;
  std::string window_str, sim_str;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        std::size_t eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "gamma") {
          r.params.gamma = parse_double(val);
          have_params = true;
        } else if (key == "radius") {
          r.params.radii = RadiusLaw::parse(val);
        } else if (key == "dim") {
          r.params.dim = r.dim = int(std::stol(val));
        } else if (key == "seed") {
          r.seed = std::stoull(val);
        } else if (key == "margin") {
          r.margin = parse_double(val);
        } else if (key == "window") {
          window_str = val;
          have_window = true;
        } else if (key == "sim_window") {
          sim_str = val;
          have_sim = true;
        }
      }
      continue;
    }
    if (!have_header) {
      if (line.rfind("id,", 0) != 0)
        throw Error(Errc::io_failure, "missing realization column header");
      have_header = true;
      continue;
    }
    std::vector<std::string> f = split(line, ',');
    if (int(f.size()) != r.dim + 2)
      throw Error(Errc::io_failure, "bad realization row: " + line);
    for (int i = 0; i < r.dim; ++i) r.centers.push_back(parse_double(f[std::size_t(1 + i)]));
    r.radii.push_back(parse_double(f.back()));
  }
  if (!have_params || !have_window || !have_sim || !have_header)
    throw Error(Errc::io_failure, "realization file misses required metadata");
  r.window = parse_window_spec(window_str, r.dim);
  r.sim_window = parse_window_spec(sim_str, r.dim);
  r.params.validate();
  return r;
}

void save_measure_csv(const WeightedRadiusMeasure& m, const std::string& path,
                      const std::vector<double>& cdf_knots) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot open for writing: " + path);
  out << "# spherestats measure v1\n";
  out << "# total=" << format_double(m.total) << "\n";
  out << "radius,weight\n";
  for (std::size_t i = 0; i < m.size(); ++i)
    out << format_double(m.radii[i]) << "," << format_double(m.weights[i]) << "\n";
  if (!cdf_knots.empty() && m.normalizable()) {
    StepCdf cdf = StepCdf::from_measure(m);
    out << "# cdf\n";
    out << "s,value\n";
    for (double s : cdf_knots)
      out << format_double(s) << "," << format_double(cdf.at(s)) << "\n";
  }
  if (!out) throw Error(Errc::io_failure, "write failed: " + path);
}

}  // namespace sphstat
