#pragma once

// Serialization: deterministic CSV/JSON/SVG builders plus an atomic file
// writer (temp file + rename, so readers never observe a partial file).
// Floating-point fields use %.17g so a rerun reproduces output byte for byte;
// exact coordinates and displacements are printed as exact decimals.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "diffract/autocorr.hpp"
#include "diffract/core.hpp"
#include "diffract/pointsets.hpp"
#include "diffract/spectrum.hpp"
#include "diffract/windows.hpp"

namespace diffract {

inline void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw IoError("write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename " + tmp + " to " + path);
  }
}

// ---------------------------------------------------------------------------
// CSV builders.

inline std::string points_csv(const PointSet& F) {
  std::string s = F.weighted() ? "x,w\n" : "x\n";
  for (std::size_t i = 0; i < F.size(); ++i) {
    s += F.coord_string(i);
    if (F.weighted()) {
      s += ',';
      s += fmt_g17(F.weight(i));
    }
    s += '\n';
  }
  return s;
}

inline std::string eta_csv(const EtaSeries& series) {
  std::string s = "n,card_Fn,t,intersection_count,eta_count,eta_dens,eta_bound\n";
  for (const auto& r : series.rows) {
    s += std::to_string(r.n);
    s += ',';
    s += std::to_string(r.card);
    s += ',';
    s += std::to_string(series.t);
    s += ',';
    s += std::to_string(r.intersection_count);
    s += ',';
    s += fmt_g17(r.eta_count);
    s += ',';
    s += fmt_g17(r.eta_dens);
    s += ',';
    if (r.eta_bound) s += fmt_g17(*r.eta_bound);
    s += '\n';
  }
  return s;
}

inline std::string comb_csv(const DiracComb& comb) {
  std::string s = "t,weight\n";
  for (const auto& [k, w] : comb.weights) {
    s += comb.displacement_string(k);
    s += ',';
    s += fmt_g17(w);
    s += '\n';
  }
  return s;
}

inline std::string comb2d_csv(const Comb2D& comb) {
  std::string s = "t1,t2,weight\n";
  for (const auto& [k, w] : comb.weights) {
    s += dyadic_to_decimal(k.first, comb.scale_log2);
    s += ',';
    s += dyadic_to_decimal(k.second, comb.scale_log2);
    s += ',';
    s += fmt_g17(w);
    s += '\n';
  }
  return s;
}

inline std::string spectrum_csv(const SpectrumGrid& g) {
  std::string s = "y,intensity,intensity_per_point\n";
  for (std::size_t i = 0; i < g.freqs.size(); ++i) {
    s += fmt_g17(g.freqs[i]);
    s += ',';
    s += fmt_g17(g.intensity[i]);
    s += ',';
    s += fmt_g17(g.per_point(i));
    s += '\n';
  }
  return s;
}

inline std::string density_csv(const std::vector<DensityRow>& rows) {
  std::string s = "n,card,volume,density,running_sup,running_inf\n";
  for (const auto& r : rows) {
    s += std::to_string(r.n);
    s += ',';
    s += std::to_string(r.card);
    s += ',';
    s += fmt_g17(r.volume);
    s += ',';
    s += fmt_g17(r.density);
    s += ',';
    s += fmt_g17(r.running_sup);
    s += ',';
    s += fmt_g17(r.running_inf);
    s += '\n';
  }
  return s;
}

inline std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
  std::string s = "m,n,card,value,bound,meets_bound\n";
  for (const auto& r : rows) {
    s += std::to_string(r.m);
    s += ',';
    s += std::to_string(r.n);
    s += ',';
    s += std::to_string(r.card);
    s += ',';
    s += fmt_g17(r.value);
    s += ',';
    s += fmt_g17(r.bound);
    s += ',';
    s += r.meets_bound ? "1" : "0";
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON mappers.

inline nlohmann::json classification_json(const WindowClassification& c) {
  nlohmann::json j;
  j["family"] = c.family;
  j["horizon"] = c.horizon;
  j["van_hove"] = c.van_hove;
  if (!c.van_hove_note.empty()) j["van_hove_note"] = c.van_hove_note;
  j["contains_zero_eventually"] = c.contains_zero_eventually;
  if (c.ratio_bound) j["ratio_bound"] = *c.ratio_bound;
  if (c.anchored_bound) j["anchored_bound"] = *c.anchored_bound;
  j["regime"] = c.regime_name();
  j["notes"] = c.notes;
  return j;
}

inline nlohmann::json bragg_json(const BraggScanResult& b) {
  nlohmann::json j;
  j["y"] = b.y;
  j["theta"] = b.theta;
  j["bragg_like"] = b.bragg_like;
  j["note"] = b.note;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : b.rows) {
    rows.push_back({{"n", r.n},
                    {"card", r.card},
                    {"intensity", r.intensity},
                    {"per_point", r.per_point}});
  }
  j["rows"] = rows;
  return j;
}

// ---------------------------------------------------------------------------
// Minimal SVG polyline plot, deterministic output.

inline std::string svg_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                                const std::string& title, int width = 800, int height = 400) {
  if (xs.size() != ys.size() || xs.empty())
    throw SpecError("svg plot needs equal-length nonempty coordinate lists");
  if (width < 200 || height < 120 || width > 10000 || height > 10000)
    throw SpecError("svg dimensions out of range");
  auto fmt6 = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  double xlo = xs[0], xhi = xs[0], ylo = ys[0], yhi = ys[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xlo = std::min(xlo, xs[i]);
    xhi = std::max(xhi, xs[i]);
    ylo = std::min(ylo, ys[i]);
    yhi = std::max(yhi, ys[i]);
  }
  if (xhi == xlo) xhi = xlo + 1;
  if (yhi == ylo) yhi = ylo + 1;
  const double w = width, h = height, pad = 50;
  auto px = [&](double x) { return pad + (x - xlo) / (xhi - xlo) * (w - 2 * pad); };
  auto py = [&](double y) { return h - pad - (y - ylo) / (yhi - ylo) * (h - 2 * pad); };
  std::string s;
  const std::string ws = std::to_string(width), hs = std::to_string(height);
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + ws + "\" height=\"" + hs +
       "\" viewBox=\"0 0 " + ws + " " + hs + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + ws + "\" height=\"" + hs + "\" fill=\"white\"/>\n";
  s += "<rect x=\"" + fmt6(pad) + "\" y=\"" + fmt6(pad) + "\" width=\"" + fmt6(w - 2 * pad) +
       "\" height=\"" + fmt6(h - 2 * pad) + "\" fill=\"none\" stroke=\"#888\"/>\n";
  s += "<text x=\"" + fmt6(w / 2) + "\" y=\"30\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
  s += "<text x=\"" + fmt6(pad) + "\" y=\"" + fmt6(h - pad + 20) +
       "\" font-family=\"sans-serif\" font-size=\"12\">" + fmt6(xlo) + "</text>\n";
  s += "<text x=\"" + fmt6(w - pad) + "\" y=\"" + fmt6(h - pad + 20) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + fmt6(xhi) +
       "</text>\n";
  s += "<text x=\"" + fmt6(pad - 5) + "\" y=\"" + fmt6(h - pad) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + fmt6(ylo) +
       "</text>\n";
  s += "<text x=\"" + fmt6(pad - 5) + "\" y=\"" + fmt6(pad + 4) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + fmt6(yhi) +
       "</text>\n";
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += fmt6(px(xs[i])) + "," + fmt6(py(ys[i]));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

} // namespace diffract
