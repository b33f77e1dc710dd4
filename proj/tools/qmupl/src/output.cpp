#include "output.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "qmupl/cli.hpp"
#include "qmupl/errors.hpp"

namespace qmupl::cli {

std::string git_blob_sha1(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string csv_text(const std::vector<Column>& columns) {
  std::string s;
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].values.size() != rows) throw ParameterError("CSV columns differ in length");
    s += (c ? "," : "") + columns[c].name;
  }
  s += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) s += ',';
      s += fmt::format("{:.17g}", columns[c].values[r]);
    }
    s += '\n';
  }
  return s;
}

std::string table_text(const std::vector<std::string>& header, const std::vector<Row>& rows) {
  std::string s;
  for (std::size_t c = 0; c < header.size(); ++c) s += (c ? "," : "") + header[c];
  s += '\n';
  for (const Row& r : rows) {
    if (r.values.size() + 1 != header.size()) throw ParameterError("table row has the wrong width");
    s += r.label;
    for (double v : r.values) s += std::isnan(v) ? std::string(",") : fmt::format(",{:.17g}", v);
    s += '\n';
  }
  return s;
}

namespace {

std::string escape(const std::string& in) {
  std::string out;
  for (char ch : in) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Axis {
  double lo = 0;
  double hi = 1;
  bool log = false;

  [[nodiscard]] double map(double v) const { return log ? std::log10(v) : v; }
  [[nodiscard]] double frac(double v) const { return (map(v) - lo) / (hi - lo); }
  [[nodiscard]] bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis fit_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* v : data) {
    for (double x : *v) {
      if (!a.usable(x)) continue;
      lo = std::min(lo, a.map(x));
      hi = std::max(hi, a.map(x));
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log) {
    for (double e = std::ceil(a.lo); e <= a.hi + 1e-9; e += std::max(1.0, std::floor((a.hi - a.lo) / 6.0)))
      t.push_back(e);
    return t;
  }
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step) t.push_back(v);
  return t;
}

std::string tick_label(double v, bool log) {
  if (log) return fmt::format("1e{}", static_cast<int>(std::lround(v)));
  if (v == 0.0) return "0";
  return fmt::format("{:.3g}", v);
}

}  // namespace

std::string svg_text(const Chart& chart) {
  constexpr double W = 720, H = 440, L = 80, R = 170, T = 40, B = 60;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  std::vector<const std::vector<double>*> xs, ys;
  for (const Series& s : chart.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Axis ax = fit_axis(xs, chart.log_x);
  const Axis ay = fit_axis(ys, chart.log_y);
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + ax.frac(x) * pw; };
  auto py = [&](double y) { return T + (1.0 - ay.frac(y)) * ph; };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      W, H);
  s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", L + pw / 2,
                   escape(chart.title));
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L, T, pw, ph);
  for (double t : ticks(ax)) {
    const double x = L + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", x, T, T + ph);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, T + ph + 16,
                     tick_label(t, ax.log));
  }
  for (double t : ticks(ay)) {
    const double y = T + (1.0 - (t - ay.lo) / (ay.hi - ay.lo)) * ph;
    s += fmt::format("<line x1=\"{1}\" y1=\"{0:.2f}\" x2=\"{2}\" y2=\"{0:.2f}\" stroke=\"#ddd\"/>\n", y, L, L + pw);
    s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", L - 6, y + 4,
                     tick_label(t, ay.log));
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", L + pw / 2, H - 16,
                   escape(chart.x_label));
  s += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                   T + ph / 2, escape(chart.y_label));
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& ser = chart.series[k];
    const char* colour = palette[k % std::size(palette)];
    std::string pts;
    for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
      if (!ax.usable(ser.x[i]) || !ay.usable(ser.y[i])) continue;
      pts += fmt::format("{:.2f},{:.2f} ", px(ser.x[i]), py(ser.y[i]));
    }
    s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour, pts);
    const double ly = T + 14 + 18 * k;
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                     L + pw + 10, ly, L + pw + 30, colour);
    s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", L + pw + 36, ly + 4, escape(ser.name));
  }
  s += "</svg>\n";
  return s;
}

OutputSet::OutputSet(std::filesystem::path dir, bool csv, bool svg) : dir_(std::move(dir)), csv_(csv), svg_(svg) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputSet::write_text(const std::string& name, const std::string& content) {
  std::ofstream f(dir_ / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir_ / name).string());
  f << content;
  const auto it = std::find(files_.begin(), files_.end(), name);
  if (it == files_.end()) {
    files_.push_back(name);
    hashes_.push_back(git_blob_sha1(content));
  } else {
    hashes_[static_cast<std::size_t>(it - files_.begin())] = git_blob_sha1(content);
  }
}

void OutputSet::write_csv(const std::string& name, const std::vector<Column>& columns) {
  if (csv_) write_text(name, csv_text(columns));
}

void OutputSet::write_svg(const std::string& name, const Chart& chart) {
  if (svg_) write_text(name, svg_text(chart));
}

void OutputSet::write_manifest(const std::string& command, unsigned long long seed, const std::string& config) {
  nlohmann::ordered_json j;
  j["tool"] = "qmupl";
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  j["config_hash"] = git_blob_sha1(config);
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < files_.size(); ++i) files.push_back({{"path", files_[i]}, {"sha1", hashes_[i]}});
  j["files"] = files;
  std::ofstream out(dir_ / "manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write manifest");
  out << j.dump(2) << '\n';
}

}  // namespace qmupl::cli
