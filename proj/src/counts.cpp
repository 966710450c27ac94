#include "modvar/counts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace modvar {

namespace {

constexpr double kGridUniformityTol = 1e-6;  // relative

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view field, const std::string& context) {
  double v{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw io_error("coincidence csv: bad number in " + context);
  return v;
}

std::int64_t parse_count(std::string_view field, const std::string& context) {
  std::int64_t v{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw io_error("coincidence csv: bad count in " + context);
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void check_uniform(const Eigen::ArrayXd& coords, const char* which) {
  if (coords.size() < 2)
    throw std::invalid_argument(std::string("CountsMap: ") + which + " needs at least 2 positions");
  const double mean_step = (coords(coords.size() - 1) - coords(0)) / double(coords.size() - 1);
  if (!(mean_step > 0.0))
    throw std::invalid_argument(std::string("CountsMap: ") + which + " must be strictly increasing");
  for (Eigen::Index i = 1; i < coords.size(); ++i) {
    const double step = coords(i) - coords(i - 1);
    if (std::abs(step - mean_step) > kGridUniformityTol * mean_step)
      throw std::invalid_argument(std::string("CountsMap: ") + which +
                                  " positions are not uniformly spaced");
  }
}

Axis axis_from_positions(const Eigen::ArrayXd& rho, DetectorPlane plane,
                         const OpticsConfig& optics, bool flip) {
  Axis axis;
  axis.kind = plane == DetectorPlane::near ? AxisKind::position : AxisKind::momentum;
  axis.count = rho.size();
  const double sign = (plane == DetectorPlane::far && flip) ? -1.0 : 1.0;
  const double first = sign * convert_detector_coords(rho(0), plane, optics);
  const double last = sign * convert_detector_coords(rho(rho.size() - 1), plane, optics);
  axis.start = std::min(first, last);
  axis.step = std::abs(last - first) / double(rho.size() - 1);
  return axis;
}

}  // namespace

void CountsMap::validate() const {
  optics.validate();
  check_uniform(rho1_mm, "rho1");
  check_uniform(rho2_mm, "rho2");
  if (counts.rows() != rho1_mm.size() || counts.cols() != rho2_mm.size())
    throw std::invalid_argument("CountsMap: counts shape does not match positions");
  if ((counts < 0).any()) throw std::invalid_argument("CountsMap: negative counts");
  if (total() <= 0) throw std::invalid_argument("CountsMap: empty map");
}

JointDistribution normalize_counts(const CountsMap& m) {
  if (m.counts.size() == 0 || m.counts.sum() <= 0)
    throw std::invalid_argument("normalize_counts: empty map");
  m.validate();

  JointDistribution j;
  j.axis1 = axis_from_positions(m.rho1_mm, m.kind, m.optics, m.flip);
  j.axis2 = axis_from_positions(m.rho2_mm, m.kind, m.optics, m.flip);
  j.probs = m.counts.cast<double>() / double(m.total());
  if (m.kind == DetectorPlane::far && m.flip) {
    // negated momenta run backwards; reverse both dimensions to keep axes increasing
    j.probs = j.probs.reverse().eval();
  }
  return j;
}

CountsMap load_coincidence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);

  std::map<std::string, std::string> meta;
  std::string line;
  bool have_header = false;
  std::vector<double> r1, r2;
  std::vector<std::int64_t> cnt;

  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    if (!have_header) {
      if (t != "rho1_mm,rho2_mm,counts")
        throw io_error("coincidence csv: expected header rho1_mm,rho2_mm,counts in " + path);
      have_header = true;
      continue;
    }
    const auto c1 = t.find(',');
    const auto c2 = t.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw io_error("coincidence csv: malformed row at line " + std::to_string(line_no));
    const std::string ctx = "line " + std::to_string(line_no);
    r1.push_back(parse_double(std::string_view(t).substr(0, c1), ctx));
    r2.push_back(parse_double(std::string_view(t).substr(c1 + 1, c2 - c1 - 1), ctx));
    const std::int64_t c = parse_count(std::string_view(t).substr(c2 + 1), ctx);
    if (c < 0) throw std::invalid_argument("coincidence csv: negative counts at " + ctx);
    cnt.push_back(c);
  }
  if (!have_header) throw io_error("coincidence csv: missing header in " + path);
  if (cnt.empty()) throw io_error("coincidence csv: no data rows in " + path);

  CountsMap m;

  const auto kind_it = meta.find("kind");
  if (kind_it == meta.end())
    throw std::invalid_argument("coincidence csv: missing metadata key kind");
  if (kind_it->second == "near")
    m.kind = DetectorPlane::near;
  else if (kind_it->second == "far")
    m.kind = DetectorPlane::far;
  else
    throw std::invalid_argument("coincidence csv: kind must be near or far");

  if (const auto it = meta.find("units"); it != meta.end() && it->second != "mm")
    throw std::invalid_argument("coincidence csv: units must be mm");

  const auto require = [&](const char* key) {
    const auto it = meta.find(key);
    if (it == meta.end())
      throw std::invalid_argument(std::string("coincidence csv: missing metadata key ") + key);
    return parse_double(it->second, std::string("metadata ") + key);
  };
  if (m.kind == DetectorPlane::near) {
    m.optics.magnification = require("magnification");
  } else {
    m.optics.focal_mm = require("focal_mm");
    m.optics.wavelength_nm = require("wavelength_nm");
  }
  if (const auto it = meta.find("flip"); it != meta.end())
    m.flip = it->second == "true" || it->second == "1";

  // unique sorted coordinate sets define the rectangular grid
  std::vector<double> u1 = r1, u2 = r2;
  std::sort(u1.begin(), u1.end());
  u1.erase(std::unique(u1.begin(), u1.end()), u1.end());
  std::sort(u2.begin(), u2.end());
  u2.erase(std::unique(u2.begin(), u2.end()), u2.end());

  if (u1.size() * u2.size() != cnt.size())
    throw std::invalid_argument("coincidence csv: incomplete grid");

  m.rho1_mm = Eigen::Map<const Eigen::ArrayXd>(u1.data(), Eigen::Index(u1.size()));
  m.rho2_mm = Eigen::Map<const Eigen::ArrayXd>(u2.data(), Eigen::Index(u2.size()));
  m.counts.setConstant(Eigen::Index(u1.size()), Eigen::Index(u2.size()), -1);

  for (std::size_t k = 0; k < cnt.size(); ++k) {
    const auto i1 = std::lower_bound(u1.begin(), u1.end(), r1[k]) - u1.begin();
    const auto i2 = std::lower_bound(u2.begin(), u2.end(), r2[k]) - u2.begin();
    if (m.counts(i1, i2) != -1)
      throw std::invalid_argument("coincidence csv: duplicate grid cell");
    m.counts(i1, i2) = cnt[k];
  }
  if ((m.counts < 0).any()) throw std::invalid_argument("coincidence csv: incomplete grid");

  m.validate();
  return m;
}

void save_coincidence_csv(const CountsMap& m, const std::string& path) {
  m.validate();
  std::ostringstream out;
  out << "# kind=" << (m.kind == DetectorPlane::near ? "near" : "far") << "\n";
  if (m.kind == DetectorPlane::near) {
    out << "# magnification=" << format_double(m.optics.magnification) << "\n";
  } else {
    out << "# focal_mm=" << format_double(m.optics.focal_mm) << "\n";
    out << "# wavelength_nm=" << format_double(m.optics.wavelength_nm) << "\n";
  }
  out << "# units=mm\n";
  if (m.flip) out << "# flip=true\n";
  out << "rho1_mm,rho2_mm,counts\n";
  for (Eigen::Index i = 0; i < m.rho1_mm.size(); ++i)
    for (Eigen::Index k = 0; k < m.rho2_mm.size(); ++k)
      out << format_double(m.rho1_mm(i)) << ',' << format_double(m.rho2_mm(k)) << ','
          << m.counts(i, k) << "\n";

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw io_error("cannot write " + tmp);
    f << out.str();
    if (!f.good()) throw io_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

CountsMap to_counts(const JointDistribution& j, const OpticsConfig& optics, std::int64_t total) {
  j.validate();
  optics.validate();
  if (total <= 0) throw std::invalid_argument("to_counts: total must be positive");

  CountsMap m;
  m.kind = j.axis1.kind == AxisKind::position ? DetectorPlane::near : DetectorPlane::far;
  m.optics = optics;
  const double scale = m.kind == DetectorPlane::near ? optics.magnification
                                                     : optics.focal_wavelength_mm2();
  m.rho1_mm = j.axis1.centers() * scale;
  m.rho2_mm = j.axis2.centers() * scale;
  m.counts.resize(j.probs.rows(), j.probs.cols());
  for (Eigen::Index i = 0; i < j.probs.rows(); ++i)
    for (Eigen::Index k = 0; k < j.probs.cols(); ++k)
      m.counts(i, k) = std::llround(j.probs(i, k) * double(total));
  return m;
}

}  // namespace modvar
