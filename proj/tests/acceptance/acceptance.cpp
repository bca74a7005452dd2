// Runs the built-in sweep suite and re-derives one verdict per criterion from
// the raw rows with pinned tolerances. Exit status is 0 when the set of failing
// criteria equals the --expect-fail list.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "varexp/harness.hpp"

using namespace varexp;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const SweepReport& find(const std::vector<SweepReport>& reps, const std::string& name) {
  for (const auto& r : reps) {
    if (r.scenario.name == name) return r;
  }
  throw std::runtime_error("scenario missing from suite: " + name);
}

std::size_t errors(const SweepReport& r) {
  return static_cast<std::size_t>(
      std::count_if(r.rows.begin(), r.rows.end(), [](const TrialRow& t) { return !t.error.empty(); }));
}

bool counts_for_drift(const TrialRow& t) {
  return t.error.empty() && (!t.extra.is_object() || t.extra.value("drift", true));
}

/// Per family: largest over smallest of the per-variant maximum ratio.
std::map<std::string, double> family_drift(const SweepReport& r) {
  std::map<std::string, std::map<std::string, double>> best;
  for (const auto& t : r.rows) {
    if (!counts_for_drift(t)) continue;
    double& b = best[t.family][t.variant];
    b = std::max(b, t.ratio);
  }
  std::map<std::string, double> out;
  for (const auto& [fam, vars] : best) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& [v, m] : vars) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    out[fam] = lo > 0.0 ? hi / lo : INFINITY;
  }
  return out;
}

double max_drift(const SweepReport& r, std::string* which = nullptr) {
  double worst = 1.0;
  for (const auto& [fam, d] : family_drift(r)) {
    if (d > worst || std::isnan(d)) {
      worst = d;
      if (which) *which = fam;
    }
  }
  return worst;
}

/// Largest over smallest ratio within each (family, group), maximised.
double seed_drift(const SweepReport& r) {
  std::map<std::pair<std::string, std::size_t>, std::pair<double, double>> span;
  for (const auto& t : r.rows) {
    if (!counts_for_drift(t)) continue;
    auto [it, fresh] = span.try_emplace({t.family, t.group}, t.ratio, t.ratio);
    if (!fresh) {
      it->second.first = std::min(it->second.first, t.ratio);
      it->second.second = std::max(it->second.second, t.ratio);
    }
  }
  double worst = 1.0;
  for (const auto& [k, s] : span) worst = std::max(worst, s.first > 0.0 ? s.second / s.first : INFINITY);
  return worst;
}

void require_rows(Verdict& v, const SweepReport& r, std::size_t expected) {
  v.require(r.rows.size() == expected, r.scenario.name + ": expected " + std::to_string(expected) +
                                           " rows, got " + std::to_string(r.rows.size()));
  v.require(errors(r) == 0, r.scenario.name + ": " + std::to_string(errors(r)) + " error rows");
}

double max_of(const Json& arr) {
  double m = 0.0;
  for (const auto& x : arr) m = std::max(m, std::abs(x.get<double>()));
  return m;
}

Verdict criterion(int c, const std::vector<SweepReport>& reps) {
  Verdict v;
  switch (c) {
    case 1: {
      const auto& r = find(reps, "luxemburg_closed_form");
      require_rows(v, r, 600);
      double worst = 0.0;
      for (const auto& t : r.rows) worst = std::max(worst, std::abs(t.ratio - 1.0));
      v.require(worst <= 1e-6, "max |ratio - 1| = " + fmt(worst));
      if (v.pass) v.detail = "600 rows, max |ratio - 1| = " + fmt(worst);
      break;
    }
    case 2: {
      const auto& r = find(reps, "unit_ball");
      require_rows(v, r, 200);
      double worst = 0.0;
      for (const auto& t : r.rows) worst = std::max(worst, std::abs(t.lhs - 1.0));
      v.require(worst <= 1e-4, "max |modular - 1| = " + fmt(worst));
      if (v.pass) v.detail = "200 rows, max |modular - 1| = " + fmt(worst);
      break;
    }
    case 3: {
      const auto& h = find(reps, "holder_pairs");
      const auto& d = find(reps, "duality_sandwich");
      require_rows(v, h, 1000);
      require_rows(v, d, 100);
      std::set<std::string> fams;
      double worst = 0.0;
      for (const auto& t : h.rows) {
        fams.insert(t.family);
        worst = std::max(worst, t.ratio);
      }
      v.require(fams.count("constant") && fams.count("variable"),
                "holder sweep lacks constant or variable exponents");
      v.require(worst <= 1.0 + 1e-6, "holder max ratio " + fmt(worst));
      double lower_gap = INFINITY, upper_gap = INFINITY;
      for (const auto& t : d.rows) {
        const double nf = t.extra.at("norm_f").get<double>();
        lower_gap = std::min(lower_gap, t.lhs - (nf - 1e-3));
        upper_gap = std::min(upper_gap, t.rhs + 1e-6 - t.lhs);
      }
      v.require(lower_gap >= 0.0 && upper_gap >= 0.0, "duality sandwich violated");
      if (v.pass) v.detail = "holder max ratio " + fmt(worst) + ", duality sandwich holds on 100 rows";
      break;
    }
    case 4: {
      const auto& r = find(reps, "generalized_holder_refinement");
      require_rows(v, r, 1000);
      const double d = max_drift(r);
      v.require(d <= 2.0, "drift " + fmt(d) + " > 2");
      if (v.pass) v.detail = "drift " + fmt(d) + " <= 2";
      break;
    }
    case 5: {
      double worst = 0.0, slack = INFINITY;
      for (const char* name : {"atoms_plain", "atoms_b_weighted"}) {
        const auto& r = find(reps, name);
        require_rows(v, r, 100);
        for (const auto& t : r.rows) {
          worst = std::max({worst, max_of(t.extra.at("moment_residuals")),
                            max_of(t.extra.at("b_moment_residuals"))});
          slack = std::min(slack, t.extra.at("size_slack").get<double>());
        }
      }
      v.require(worst <= 1e-9, "max moment residual " + fmt(worst));
      v.require(slack >= -1e-12, "size bound exceeded by " + fmt(-slack));
      if (v.pass) v.detail = "200 atoms, max moment residual " + fmt(worst);
      break;
    }
    case 6: {
      const auto& r = find(reps, "riesz_half_interval");
      require_rows(v, r, 2);
      const double exact = 2.0 * std::sqrt(2.0);
      const std::map<double, double> tol = {{1.0 / 512.0, 0.02}, {1.0 / 2048.0, 0.005}};
      std::string d;
      for (const auto& t : r.rows) {
        const auto it = tol.find(t.resolution);
        v.require(it != tol.end(), "unexpected resolution " + fmt(t.resolution));
        if (it == tol.end()) break;
        const double err = std::abs(t.lhs / exact - 1.0);
        v.require(err <= it->second, t.variant + ": relative error " + fmt(err));
        d += (d.empty() ? "" : ", ") + t.variant + " rel. error " + fmt(err);
      }
      if (v.pass) v.detail = d;
      break;
    }
    case 7: {
      const auto& r = find(reps, "kernel_derivatives");
      v.require(errors(r) == 0, "error rows present");
      std::map<std::string, std::map<double, double>> by_scale;
      for (const auto& t : r.rows) {
        if (t.family == "order0") {
          v.require(t.ratio == 1.0, "order-0 ratio " + fmt(t.ratio));
        } else if (t.family == "order1_m1") {
          v.require(std::abs(t.ratio - 0.5) <= 1e-6, "order-1 ratio " + fmt(t.ratio));
        } else {
          by_scale[t.family][t.scale] = t.ratio;
        }
      }
      v.require(by_scale.size() == 5, "expected 5 multi-indices with 1 <= |beta| <= 2");
      double worst = 1.0;
      for (const auto& [fam, m] : by_scale) {
        v.require(m.size() == 2, fam + ": missing scale");
        if (m.size() != 2) break;
        const double a = m.begin()->second, b = m.rbegin()->second;
        worst = std::max(worst, std::max(a, b) / std::min(a, b));
      }
      v.require(worst <= 1.2, "scale drift " + fmt(worst));
      if (v.pass) v.detail = "order 0 exact, order 1 = 1 - alpha, scale drift " + fmt(worst);
      break;
    }
    case 8: {
      std::string d;
      for (const char* name : {"decay_plain", "decay_b_weighted"}) {
        const auto& r = find(reps, name);
        v.require(errors(r) == 0, std::string(name) + ": error rows present");
        std::set<std::size_t> groups;
        for (const auto& t : r.rows) groups.insert(t.group);
        v.require(groups.size() == 100, std::string(name) + ": expected 100 configurations");
        const double dr = max_drift(r);
        v.require(dr <= 1.5, std::string(name) + ": drift " + fmt(dr));
        d += (d.empty() ? "" : ", ") + std::string(name) + " drift " + fmt(dr);
      }
      if (v.pass) v.detail = d;
      break;
    }
    case 9:
    case 10: {
      const auto& r = find(reps, c == 9 ? "theorem_sweep" : "commutator_sweep");
      v.require(errors(r) == 0, "error rows present");
      std::set<std::size_t> groups;
      for (const auto& t : r.rows) {
        groups.insert(t.group);
        if (t.family == "const_b") v.require(t.lhs <= t.rhs, "constant-b commutator not negligible");
        else v.require(std::isfinite(t.ratio), "non-finite ratio");
      }
      v.require(groups.size() == 50, "expected 50 seeds");
      std::string fam;
      const double dr = max_drift(r, &fam);
      v.require(dr <= 4.0, "drift " + fmt(dr) + " > 4 (family " + fam + ")");
      if (v.pass) v.detail = "drift " + fmt(dr) + " <= 4";
      break;
    }
    case 11: {
      const auto& r = find(reps, "fefferman_stein_refinement");
      v.require(errors(r) == 0, "error rows present");
      std::string fam;
      const double dr = max_drift(r, &fam);
      v.require(dr <= 2.0, "drift " + fmt(dr) + " (" + fam + ")");
      if (v.pass) v.detail = "drift " + fmt(dr) + " <= 2";
      break;
    }
    case 12: {
      const auto& r = find(reps, "claim_scaling");
      v.require(errors(r) == 0, "error rows present");
      for (const auto& t : r.rows) {
        v.require(std::isfinite(t.ratio) && t.ratio > 0.0, "non-finite or zero ratio");
      }
      const double sd = seed_drift(r);
      v.require(sd <= 1.5, "per-seed drift " + fmt(sd));
      if (v.pass) v.detail = "per-seed drift " + fmt(sd) + " <= 1.5";
      break;
    }
    case 13: {
      const auto& r = find(reps, "log_holder_classifier");
      v.require(errors(r) == 0, "error rows present");
      bool saw_jump = false, saw_smooth = false;
      for (const auto& t : r.rows) {
        if (t.family == "constant") {
          v.require(t.lhs == 0.0, t.variant + ": nonzero constants");
        } else if (t.family == "jump") {
          saw_jump = true;
          v.require(t.extra.at("diverging").get<bool>() && !t.extra.at("classified_pass").get<bool>(),
                    "jump exponent not classified as failing");
        } else if (t.family == "smooth") {
          saw_smooth = true;
          v.require(!t.extra.at("diverging").get<bool>() && t.extra.at("classified_pass").get<bool>(),
                    "smooth exponent not classified as passing");
        }
      }
      v.require(saw_jump && saw_smooth, "fixtures missing");
      if (v.pass) v.detail = "constants exact, jump diverges, smooth passes";
      break;
    }
    default:
      v.require(false, "unknown criterion");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  std::size_t threads = 1;
  std::string out_dir;
  app.add_option("--expect-fail", expect_fail, "Criteria documented as failing");
  app.add_option("--criterion", only, "Restrict to these criteria");
  app.add_option("--threads", threads, "Concurrent trials")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Also write JSON/CSV/SVG reports here");
  CLI11_PARSE(app, argc, argv);

  std::set<int> wanted(only.begin(), only.end());
  if (wanted.empty()) {
    for (int c = 1; c <= 13; ++c) wanted.insert(c);
  }
  RunOptions opt;
  opt.threads = threads;
  std::vector<SweepReport> reps;
  std::map<int, bool> harness_pass;
  for (const auto& s : builtin_suite()) {
    if (!wanted.count(s.criterion)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    reps.push_back(run(s, opt));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  ran %-32s %6zu rows %7.1fs\n", s.name.c_str(), reps.back().rows.size(), secs);
    auto [it, fresh] = harness_pass.try_emplace(s.criterion, reps.back().pass);
    if (!fresh) it->second = it->second && reps.back().pass;
    if (!out_dir.empty()) emit(reps.back(), out_dir, {"json", "csv", "svg"});
  }

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::set<int> failed;
  for (int c : wanted) {
    Verdict v;
    try {
      v = criterion(c, reps);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = e.what();
    }
    if (v.pass != harness_pass[c]) {
      v.detail += " [harness verdict disagrees]";
      v.pass = false;
    }
    if (!v.pass) failed.insert(c);
    std::printf("%s criterion %d: %s%s\n", v.pass ? "PASS" : "FAIL", c, v.detail.c_str(),
                !v.pass && expected.count(c) ? " (documented deviation)" : "");
  }
  std::set<int> expected_here;
  for (int c : expected) {
    if (wanted.count(c)) expected_here.insert(c);
  }
  const bool as_expected = failed == expected_here;
  std::printf("%zu/%zu criteria pass; failing set %s the documented list\n",
              wanted.size() - failed.size(), wanted.size(), as_expected ? "matches" : "DIFFERS FROM");
  return as_expected ? 0 : 1;
}
