// Command-line front door: run the library's experiments and emit
// machine-readable tables with a full parameter echo, so that any run can be
// reproduced byte for byte from its own header.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nrlab/characters.hpp"
#include "nrlab/coset_escape.hpp"
#include "nrlab/distribution.hpp"
#include "nrlab/eh_reduction.hpp"
#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"
#include "nrlab/wirsing.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

// Shortest round-trip decimal form, '.' decimal point, no locale anywhere.
std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

// One table per run: '#' header with version, command, and parameter echo,
// then tab-separated rows, then '#' footer notes. The JSON form carries the
// same fields. --threads and --out never enter the echo: they must not
// change a single output byte.
class Table {
 public:
  Table(std::string command, std::vector<std::string> columns)
      : command_(std::move(command)), columns_(std::move(columns)) {}

  void param(const std::string& key, const nlohmann::ordered_json& v) {
    params_[key] = v;
  }
  void note(const std::string& key, const nlohmann::ordered_json& v) {
    notes_[key] = v;
  }
  void row(std::vector<nlohmann::ordered_json> cells) {
    rows_.push_back(std::move(cells));
  }

  std::string render(const std::string& format) const {
    return format == "json" ? render_json() : render_tsv();
  }

 private:
  static std::string cell_text(const nlohmann::ordered_json& c) {
    if (c.is_string()) return c.get<std::string>();
    if (c.is_boolean()) return c.get<bool>() ? "1" : "0";
    if (c.is_number_integer()) return std::to_string(c.get<int64_t>());
    if (c.is_number_unsigned()) return std::to_string(c.get<uint64_t>());
    return fmt(c.get<double>());
  }

  std::string render_tsv() const {
    std::string out;
    out += "# nrlab ";
    out += kVersion;
    out += "\n# command ";
    out += command_;
    out += '\n';
    for (const auto& [k, v] : params_.items()) {
      out += "# param ";
      out += k;
      out += ' ';
      out += cell_text(v);
      out += '\n';
    }
    out += "# columns";
    for (const auto& c : columns_) {
      out += ' ';
      out += c;
    }
    out += '\n';
    for (const auto& r : rows_) {
      for (size_t i = 0; i < r.size(); ++i) {
        if (i) out += '\t';
        out += cell_text(r[i]);
      }
      out += '\n';
    }
    for (const auto& [k, v] : notes_.items()) {
      out += "# note ";
      out += k;
      out += ' ';
      out += cell_text(v);
      out += '\n';
    }
    return out;
  }

  std::string render_json() const {
    nlohmann::ordered_json doc;
    doc["tool"] = "nrlab";
    doc["version"] = kVersion;
    doc["command"] = command_;
    doc["params"] = params_;
    doc["columns"] = columns_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const auto& c : r) row.push_back(c);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    if (!notes_.empty()) doc["notes"] = notes_;
    return doc.dump(2) + "\n";
  }

  std::string command_;
  std::vector<std::string> columns_;
  nlohmann::ordered_json params_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json notes_ = nlohmann::ordered_json::object();
  std::vector<std::vector<nlohmann::ordered_json>> rows_;
};

void emit(const Table& table, const std::string& format,
          const std::string& out_path) {
  std::string text = table.render(format);
  if (out_path.empty() || out_path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw nrlab::error(nrlab::errc::out_of_range,
                              "cannot open output file " + out_path);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string join_thetas(const std::vector<double>& ts) {
  std::string s;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (i) s += ',';
    s += fmt(ts[i]);
  }
  return s;
}

// ---- subcommand bodies -------------------------------------------------------

int run_nonresidue_scan(uint64_t limit, const std::string& format,
                        const std::string& out) {
  nrlab::SieveTables sv = nrlab::build_sieve(std::max<uint64_t>(limit, 4));
  Table t("nonresidue-scan", {"p", "n_p", "exponent"});
  t.param("limit", limit);
  t.param("sieve_limit", sv.limit());
  t.param("format", format);
  double max_exp = 0.0;
  uint64_t max_p = 0;
  for (uint64_t p : sv.primes()) {
    if (p == 2 || p > limit) continue;
    uint64_t np = nrlab::least_nonresidue(p);
    double ex = std::log(double(np)) / std::log(double(p));
    if (ex > max_exp) {
      max_exp = ex;
      max_p = p;
    }
    t.row({p, np, ex});
  }
  t.note("max_exponent", max_exp);
  t.note("max_exponent_at_p", max_p);
  t.note("benchmark_half_sqrt_e", nrlab::vinogradov_exponent(0.0));
  t.note("benchmark_quarter_sqrt_e", nrlab::kHeathBrownC1);
  emit(t, format, out);
  return 0;
}

int run_eh_sweep(uint64_t x, const std::vector<double>& thetas,
                 unsigned threads, const std::string& format,
                 const std::string& out) {
  nrlab::SieveTables sv = nrlab::build_sieve(std::max<uint64_t>(x, 4));
  nrlab::LevelSweepReport rep = nrlab::eh_sweep(x, thetas, sv, threads);
  Table t("eh-sweep", {"theta", "E", "E_over_x"});
  t.param("x", x);
  t.param("theta", join_thetas(thetas));
  t.param("format", format);
  for (size_t i = 0; i < rep.thetas.size(); ++i)
    t.row({rep.thetas[i], rep.E[i], rep.E_over_x[i]});
  emit(t, format, out);
  return 0;
}

int run_typeii(uint64_t q, double A, double eps, double delta, double varpi,
               double nu, const std::string& format, const std::string& out) {
  // the experiment wants primes to x^delta and the split wants x + q cells;
  // x is about q^{1 + eps/(1/2 - 2 varpi)}.
  double growth = 1.0 + eps / (0.5 - 2.0 * varpi);
  auto need = uint64_t(std::pow(double(q), growth) * 1.1) + 2 * q + 64;
  nrlab::SieveTables sv = nrlab::build_sieve(need);
  nrlab::DirichletCharacter chi = nrlab::DirichletCharacter::quadratic(q);
  nrlab::TypeIIExperiment exp =
      nrlab::build_experiment(chi, q, A, eps, delta, varpi, sv);

  Table t("typeii", {"j", "X", "gamma", "reference", "deviation", "disjoint"});
  t.param("q", q);
  t.param("A", A);
  t.param("eps", eps);
  t.param("delta", delta);
  t.param("varpi", varpi);
  t.param("nu", nu);
  t.param("format", format);
  uint64_t j_max = std::max<uint64_t>(1, uint64_t(std::pow(double(q), eps)));
  for (uint64_t j = 1; j <= j_max; ++j) {
    nrlab::TypeIIExperiment probe = exp;
    probe.j = j;
    nrlab::DispersionReport d = nrlab::dispersion_X(probe);
    t.row({j, d.X, d.gamma, d.reference, std::abs(d.X - d.reference),
           d.disjoint_support});
  }
  t.note("N", exp.N);
  t.note("x", exp.x);
  t.note("M", exp.M);
  t.note("window_lo", exp.window_lo);
  t.note("D_size", exp.D.size());
  if (exp.x >= 2 * q) {
    nrlab::SplitXReport s = nrlab::split_X(chi, q, exp.x, nu, sv);
    t.note("split_X", s.X);
    t.note("split_X1", s.X1);
    t.note("split_X2", s.X2);
    t.note("split_X3", s.X3);
    t.note("split_max_residual", s.max_pointwise_residual);
  }
  emit(t, format, out);
  return 0;
}

int run_wirsing(double h, double T, const std::string& format,
                const std::string& out) {
  auto [a, b] = nrlab::heathbrown_reference(T, h);
  Table t("wirsing", {"t", "a", "b"});
  t.param("h", h);
  t.param("T", T);
  t.param("format", format);
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    t.row({a.grid(i), a.values[i], b.values[i]});
  t.note("kernel_mass", nrlab::heathbrown_kernel_mass(h));
  t.note("b_at_T", b.at(b.T));
  emit(t, format, out);
  return 0;
}

int run_coset(unsigned d, unsigned m, uint64_t order_limit, uint64_t seed,
              const std::string& format, const std::string& out) {
  nrlab::PropositionReport rep =
      nrlab::verify_proposition(d, m, order_limit, seed);
  Table t("coset", {"group", "a_size", "cover_size", "outcome", "k", "count"});
  t.param("d", d);
  t.param("m", m);
  t.param("limit", order_limit);
  t.param("seed", seed);
  t.param("format", format);
  for (const auto& row : rep.rows)
    t.row({row.group, row.a_size, row.cover_size, row.outcome, row.k,
           row.count});
  t.note("groups", rep.groups);
  t.note("instances", rep.instances);
  t.note("escapes", rep.escapes);
  t.note("containments", rep.containments);
  t.note("max_escape_k", rep.max_escape_k);
  t.note("dichotomy_holds", rep.dichotomy_holds);
  emit(t, format, out);
  return 0;
}

int run_divisor_corr(uint32_t k, uint64_t x, uint64_t h,
                     const std::string& format, const std::string& out) {
  nrlab::SieveTables sv = nrlab::build_sieve(std::max<uint64_t>(x + h, 4));
  uint64_t value = nrlab::divisor_correlation(k, x, h, sv);
  Table t("divisor-corr", {"k", "x", "h", "correlation"});
  t.param("k", k);
  t.param("x", x);
  t.param("h", h);
  t.param("format", format);
  t.row({k, x, h, value});
  emit(t, format, out);
  return 0;
}

int run_char_profile(uint64_t q, double T, const std::string& format,
                     const std::string& out) {
  constexpr size_t kGrid = 48;
  auto need = uint64_t(std::pow(double(q), T)) + 2;
  nrlab::SieveTables sv = nrlab::build_sieve(std::max<uint64_t>(need, 4));
  nrlab::DirichletCharacter chi = nrlab::DirichletCharacter::quadratic(q);
  nrlab::DensityProfile prof = nrlab::log_density_profiles(chi, T, kGrid, sv);
  Table t("char-profile", {"t", "A_re", "A_im", "B_re", "B_im"});
  t.param("q", q);
  t.param("T", T);
  t.param("grid", uint64_t{kGrid});
  t.param("format", format);
  for (size_t i = 0; i < prof.ts.size(); ++i)
    t.row({prof.ts[i], prof.A[i].real(), prof.A[i].imag(), prof.B[i].real(),
           prof.B[i].imag()});
  emit(t, format, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"number-theory experiment tables (deterministic TSV/JSON)"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");

  std::string format = "tsv";
  std::string out;
  unsigned threads = 1;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--threads", threads, "worker cap; never changes output")
      ->check(CLI::Range(1u, 64u))
      ->capture_default_str();

  auto add_cmd = [&app](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->set_help_flag("--help", "print help and exit");
    s->fallthrough();  // --format/--out/--threads may follow the subcommand
    return s;
  };

  // nonresidue-scan
  auto* scan = add_cmd(
      "nonresidue-scan", "least nonresidue for every odd prime <= limit");
  uint64_t scan_limit = 1000;
  scan->add_option("--limit", scan_limit, "scan primes up to this bound")
      ->required()
      ->check(CLI::Range(uint64_t{3}, uint64_t{100'000'000}));

  // eh-sweep
  auto* sweep = add_cmd(
      "eh-sweep", "discrepancy level statistic over a theta grid");
  uint64_t sweep_x = 10'000;
  std::vector<double> sweep_thetas{0.1, 0.2, 0.3, 0.4, 0.5};
  sweep->add_option("--x", sweep_x, "weight cutoff")->required();
  sweep->add_option("--theta", sweep_thetas, "theta grid")
      ->delimiter(',')
      ->capture_default_str();

  // typeii
  auto* typeii = add_cmd(
      "typeii", "bilinear dispersion experiment at pinned scales");
  uint64_t ti_q = 101;
  double ti_A = -1.0, ti_eps = 0.06, ti_delta = 0.25, ti_varpi = 0.015,
         ti_nu = 0.3;
  typeii->add_option("--q", ti_q, "character modulus")->required();
  typeii->add_option("--A", ti_A, "window width exponent")
      ->capture_default_str();
  typeii->add_option("--eps", ti_eps, "shift range exponent")
      ->capture_default_str();
  typeii->add_option("--delta", ti_delta, "smoothness exponent")
      ->capture_default_str();
  typeii->add_option("--varpi", ti_varpi, "level excess")
      ->capture_default_str();
  typeii->add_option("--nu", ti_nu, "co-divisor split exponent")
      ->capture_default_str();

  // wirsing
  auto* wir = add_cmd(
      "wirsing", "closed-form profiles and their deconvolution");
  double w_h = 1e-4, w_T = 2.0;
  wir->add_option("--h", w_h, "grid step")->capture_default_str();
  wir->add_option("--T", w_T, "domain length")->capture_default_str();

  // coset
  auto* coset = add_cmd(
      "coset", "escape-from-cosets sweep over small abelian groups");
  unsigned c_d = 2, c_m = 2;
  uint64_t c_limit = 20, c_seed = 0xC05E7;
  coset->add_option("--d", c_d, "max group dimension")->capture_default_str();
  coset->add_option("--m", c_m, "max cosets per cover")->capture_default_str();
  coset->add_option("--limit", c_limit, "max group order")
      ->capture_default_str();
  coset->add_option("--seed", c_seed, "sampling seed above the exhaustive range")
      ->capture_default_str();

  // divisor-corr
  auto* dc = add_cmd(
      "divisor-corr", "shifted correlation of k-fold divisor counts");
  uint32_t dc_k = 2;
  uint64_t dc_x = 1000, dc_h = 1;
  dc->add_option("--k", dc_k, "divisor arity")->capture_default_str();
  dc->add_option("--x", dc_x, "summation cutoff")->required();
  dc->add_option("--h", dc_h, "shift")->capture_default_str();

  // char-profile
  auto* cp = add_cmd(
      "char-profile", "logarithmic density profiles of a quadratic character");
  uint64_t cp_q = 101;
  double cp_T = 1.5;
  cp->add_option("--q", cp_q, "character modulus")->required();
  cp->add_option("--T", cp_T, "profile length in log q units")
      ->capture_default_str();


  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n"
              << "run with --help for usage\n";
    return 2;
  }

  try {
    if (scan->parsed())
      return run_nonresidue_scan(scan_limit, format, out);
    if (sweep->parsed())
      return run_eh_sweep(sweep_x, sweep_thetas, threads, format, out);
    if (typeii->parsed())
      return run_typeii(ti_q, ti_A, ti_eps, ti_delta, ti_varpi, ti_nu, format,
                        out);
    if (wir->parsed()) return run_wirsing(w_h, w_T, format, out);
    if (coset->parsed())
      return run_coset(c_d, c_m, c_limit, c_seed, format, out);
    if (dc->parsed()) return run_divisor_corr(dc_k, dc_x, dc_h, format, out);
    if (cp->parsed()) return run_char_profile(cp_q, cp_T, format, out);
  } catch (const nrlab::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
