#include "treespace/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace treespace {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

// Minimal JSON emitter; keeps key order and number formatting under our
// control so reports are byte-stable.
class JsonWriter {
 public:
  std::string str() && { return std::move(out_); }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& k) {
    comma();
    quote(k);
    out_ += ':';
    pending_value_ = true;
  }

  void value(const std::string& s) {
    comma();
    quote(s);
  }
  void value(double v) {
    comma();
    if (std::isfinite(v))
      out_ += format_g12(v);
    else
      quote(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
  }
  void value(int64_t v) {
    comma();
    out_ += std::to_string(v);
  }
  void value(uint64_t v) {
    comma();
    out_ += std::to_string(v);
  }
  void value(bool b) {
    comma();
    out_ += b ? "true" : "false";
  }

 private:
  void open(char c) {
    comma();
    out_ += c;
    first_in_scope_ = true;
  }
  void close(char c) {
    out_ += c;
    first_in_scope_ = false;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_in_scope_ && !out_.empty() && out_.back() != '{' &&
        out_.back() != '[')
      out_ += ',';
    first_in_scope_ = false;
  }
  void quote(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
    out_ += '"';
  }

  std::string out_;
  bool first_in_scope_ = true;
  bool pending_value_ = false;
};

std::string objective_name(Objective obj) {
  return obj == Objective::f_parallel ? "par" : "perp";
}

}  // namespace

std::string report_json(const RunReport& report) {
  const TaxonSet& taxa = *report.result.line.midpoint().taxa();
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(std::string("treespace-pca-report"));
  w.key("schema_version");
  w.value(int64_t{1});
  w.key("input");
  w.begin_object();
  w.key("n");
  w.value(int64_t{report.n});
  w.key("m");
  w.value(int64_t{report.m});
  w.key("taxa");
  w.begin_array();
  for (const std::string& t : report.taxa) w.value(t);
  w.end_array();
  w.end_object();
  w.key("midpoint");
  w.value(report.midpoint_newick);
  w.key("objective");
  w.value(report.objective);
  w.key("algorithm");
  w.value(report.algorithm);
  w.key("normalize");
  w.value(report.normalize);
  w.key("seed");
  w.value(report.seed);
  w.key("config");
  w.begin_object();
  w.key("objective");
  w.value(objective_name(report.config.objective));
  w.key("weight_cap");
  w.value(report.config.weight_cap);
  w.key("golden_tol");
  w.value(report.config.golden_tol);
  w.key("iterations");
  w.value(int64_t{report.config.annealing.iterations});
  w.key("tau0");
  w.value(report.config.annealing.tau0);
  w.key("decay");
  w.value(report.config.annealing.decay);
  w.key("birth_floor");
  w.value(report.config.annealing.birth_floor);
  w.end_object();
  w.key("pairs");
  w.begin_array();
  const auto& pairs = report.result.line.pairs();
  for (size_t i = 0; i < pairs.size(); ++i) {
    w.begin_object();
    w.key("p");
    w.value(format_split(pairs[i].p, taxa));
    w.key("p_prime");
    w.value(format_split(pairs[i].p_prime, taxa));
    w.key("w");
    w.value(pairs[i].weight);
    w.key("w_normalized");
    w.value(report.result.normalized_weights[i]);
    w.key("s_break");
    w.value(pairs[i].s_break);
    w.end_object();
  }
  w.end_array();
  w.key("d2_0");
  w.value(report.result.d2_0);
  w.key("d2_par");
  w.value(report.result.d2_par);
  w.key("d2_perp");
  w.value(report.result.d2_perp);
  w.key("proportion");
  w.value(report.result.proportion);
  if (report.result.scale_map) {
    w.key("scale_factors");
    w.begin_array();
    for (const auto& [split, factor] : report.result.scale_map->factors) {
      w.begin_object();
      w.key("split");
      w.value(format_split(split, taxa));
      w.key("factor");
      w.value(factor);
      w.end_object();
    }
    w.end_array();
  }
  w.key("projections");
  w.begin_array();
  for (size_t i = 0; i < report.result.projections.size(); ++i) {
    const Projection& p = report.result.projections[i];
    w.begin_object();
    w.key("index");
    w.value(int64_t(i));
    w.key("s");
    w.value(p.s_star);
    w.key("d_perp");
    w.value(p.d_perp);
    w.end_object();
  }
  w.end_array();
  w.key("wall_time_seconds");
  w.value(report.wall_time_seconds);
  w.end_object();
  std::string out = std::move(w).str();
  out += '\n';
  return out;
}

std::string report_text(const RunReport& report) {
  const TaxonSet& taxa = *report.result.line.midpoint().taxa();
  std::string out;
  out += "treespace pca report\n";
  out += "====================\n";
  out += "trees:      " + std::to_string(report.n) + " on " +
         std::to_string(report.m) + " taxa\n";
  out += "objective:  f_" +
         std::string(report.objective == "par" ? "parallel" : "perpendicular") +
         "\n";
  out += "algorithm:  " + report.algorithm + "\n";
  out += "normalize:  " + std::string(report.normalize ? "yes" : "no") + "\n";
  out += "seed:       " + std::to_string(report.seed) + "\n";
  out += "\n";
  out += "d2_0    = " + format_g12(report.result.d2_0) + "\n";
  out += "d2_par  = " + format_g12(report.result.d2_par) + "\n";
  out += "d2_perp = " + format_g12(report.result.d2_perp) + "\n";
  out += "proportion of variance d2_par/d2_0 = " +
         format_g12(report.result.proportion) + "\n";
  out += "\n";
  const auto& pairs = report.result.line.pairs();
  if (pairs.empty()) {
    out += "principal line: degenerate (no split pairs improve the objective)\n";
  } else {
    out += "principal line pairs (ordered by breakpoint):\n";
    out += "  w             w_norm        s_break       change in topology\n";
    for (size_t i = 0; i < pairs.size(); ++i) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "  %-13s %-13s %-13s %s -> %s\n",
                    format_g12(pairs[i].weight).c_str(),
                    format_g12(report.result.normalized_weights[i]).c_str(),
                    format_g12(pairs[i].s_break).c_str(),
                    format_split(pairs[i].p, taxa).c_str(),
                    format_split(pairs[i].p_prime, taxa).c_str());
      out += buf;
    }
  }
  return out;
}

std::string projections_csv(const PcaResult& result) {
  std::string out = "index,s_star,d_perp\n";
  for (size_t i = 0; i < result.projections.size(); ++i) {
    out += std::to_string(i) + "," + format_g12(result.projections[i].s_star) +
           "," + format_g12(result.projections[i].d_perp) + "\n";
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot write '" + tmp + "'");
    out << content;
    if (!out) fail(ErrorCategory::io, "write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCategory::io, "cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace treespace
