#include "reactsim/colorimetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace reactsim {

namespace {

constexpr double kVisibleLow = 380.0;
constexpr double kVisibleHigh = 780.0;

// XYZ -> linear sRGB, D65 reference white.
constexpr std::array<std::array<double, 3>, 3> kXyzToSrgb = {{
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
}};

double srgb_encode(double linear) {
  return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

}  // namespace

SpectralPowerDistribution::SpectralPowerDistribution(std::vector<std::pair<double, double>> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw Error(ErrorCode::invalid_argument, "spectrum needs at least two samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!(samples_[i].second >= 0) || !std::isfinite(samples_[i].second)) {
      throw Error(ErrorCode::invalid_argument, "spectral power must be finite and non-negative");
    }
    if (i > 0 && !(samples_[i].first > samples_[i - 1].first)) {
      throw Error(ErrorCode::invalid_argument, "spectrum wavelengths must strictly increase");
    }
  }
  if (samples_.front().first > kVisibleLow || samples_.back().first < kVisibleHigh) {
    throw Error(ErrorCode::out_of_range, "spectrum must cover 380-780 nm");
  }
}

double SpectralPowerDistribution::power_at(double wavelength_nm) const {
  if (wavelength_nm < samples_.front().first || wavelength_nm > samples_.back().first) return 0.0;
  auto hi = std::lower_bound(samples_.begin(), samples_.end(), wavelength_nm,
                             [](const auto& s, double w) { return s.first < w; });
  if (hi->first == wavelength_nm) return hi->second;
  auto lo = std::prev(hi);
  const double f = (wavelength_nm - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

SpectralPowerDistribution SpectralPowerDistribution::scaled(double factor) const {
  auto copy = samples_;
  for (auto& s : copy) s.second *= factor;
  return SpectralPowerDistribution(std::move(copy));
}

CmfTable::CmfTable(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw Error(ErrorCode::validation_failed, "CMF table needs at least two rows");
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (!(rows_[i].wavelength_nm > rows_[i - 1].wavelength_nm)) {
      throw Error(ErrorCode::validation_failed, "CMF wavelengths must increase");
    }
  }
  if (rows_.front().wavelength_nm > kVisibleLow || rows_.back().wavelength_nm < kVisibleHigh) {
    throw Error(ErrorCode::validation_failed, "CMF table must cover 380-780 nm");
  }
}

CmfTable CmfTable::load(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + csv.string());
  std::vector<Row> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    Row r{};
    if (!(fields >> r.wavelength_nm >> r.x >> r.y >> r.z)) {
      throw Error(ErrorCode::parse_error, csv.string() + ": bad row");
    }
    rows.push_back(r);
  }
  return CmfTable(std::move(rows));
}

XYZ spectrum_to_xyz(const SpectralPowerDistribution& spd, const CmfTable& cmf) {
  XYZ out;
  const auto& rows = cmf.rows();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    const double pa = spd.power_at(a.wavelength_nm);
    const double pb = spd.power_at(b.wavelength_nm);
    const double half_width = 0.5 * (b.wavelength_nm - a.wavelength_nm);
    out.x += half_width * (pa * a.x + pb * b.x);
    out.y += half_width * (pa * a.y + pb * b.y);
    out.z += half_width * (pa * a.z + pb * b.z);
  }
  return out;
}

RGB spectrum_to_rgb(const SpectralPowerDistribution& spd, const CmfTable& cmf, RgbEncoding encoding) {
  const XYZ xyz = spectrum_to_xyz(spd, cmf);
  std::array<double, 3> rgb{};
  for (std::size_t i = 0; i < 3; ++i) {
    rgb[i] = std::max(0.0, kXyzToSrgb[i][0] * xyz.x + kXyzToSrgb[i][1] * xyz.y +
                               kXyzToSrgb[i][2] * xyz.z);
  }
  const double peak = *std::max_element(rgb.begin(), rgb.end());
  if (!(peak > 0)) return RGB{0, 0, 0};
  std::array<std::uint8_t, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    double v = rgb[i] / peak;
    if (encoding == RgbEncoding::srgb_gamma) v = srgb_encode(v);
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
  }
  return RGB{out[0], out[1], out[2]};
}

SpectralPowerDistribution blackbody_spd(double temperature_k) {
  if (!(temperature_k > 0) || !std::isfinite(temperature_k)) {
    throw Error(ErrorCode::invalid_argument, "blackbody temperature must be positive");
  }
  constexpr double h = 6.62607015e-34;
  constexpr double c = 2.99792458e8;
  constexpr double k = 1.380649e-23;
  std::vector<std::pair<double, double>> samples;
  double peak = 0.0;
  for (int nm = 380; nm <= 780; nm += 5) {
    const double lambda = nm * 1e-9;
    const double radiance = 2.0 * h * c * c / std::pow(lambda, 5) /
                            std::expm1(h * c / (lambda * k * temperature_k));
    samples.emplace_back(nm, radiance);
    peak = std::max(peak, radiance);
  }
  if (!(peak > 0)) throw Error(ErrorCode::out_of_range, "blackbody emits no visible power at this temperature");
  for (auto& s : samples) s.second /= peak;
  return SpectralPowerDistribution(std::move(samples));
}

}  // namespace reactsim
