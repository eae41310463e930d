// scarlab command-line driver.
//
// Every subcommand writes a self-contained output directory: the data files,
// a config.json echoing the fully resolved run configuration, and a
// manifest.json (the only file carrying a timestamp, so repeated runs with
// the same configuration are byte-identical everywhere else).
//
// Exit codes: 0 success, 2 invalid arguments, 3 capacity exceeded,
// 4 internal consistency failure.

#include <chrono>
#include <complex>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scarlab/scarlab.hpp"

namespace {

using nlohmann::ordered_json;
using namespace scarlab;

constexpr const char* kVersion = "1.0.0";

Boundary parse_bc(const std::string& name) {
  if (name == "pbc") return Boundary::PBC;
  if (name == "obc") return Boundary::OBC;
  throw std::invalid_argument("boundary must be pbc or obc");
}

Pattern parse_pattern(const std::string& name) {
  if (name == "z2") return Pattern::Z2;
  if (name == "z2prime") return Pattern::Z2Prime;
  if (name == "z3") return Pattern::Z3;
  if (name == "z4") return Pattern::Z4;
  if (name == "vacuum") return Pattern::Vacuum;
  throw std::invalid_argument("unknown initial state: " + name);
}

std::string iso_utc_now() {
  const std::time_t tt =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

// Rows are ordered_json objects sharing the column list; serialized either as
// a CSV table or as a JSON array mirroring the same fields.
struct Table {
  std::vector<std::string> columns;
  std::vector<ordered_json> rows;
};

std::string csv_cell(const ordered_json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned())
    return std::to_string(v.get<unsigned long long>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return "";
}

// Collects written file names so the manifest can list them.
struct OutputDir {
  std::filesystem::path dir;
  std::vector<std::string> files;

  explicit OutputDir(const std::string& path) : dir(path) {
    std::filesystem::create_directories(dir);
  }

  void write_text(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    files.push_back(name);
  }

  void write_json(const std::string& name, const ordered_json& j) {
    write_text(name, dump_json(j) + "\n");
  }

  void write_table(const std::string& base, const Table& t,
                   const std::string& format) {
    if (format == "json") {
      ordered_json arr = ordered_json::array();
      for (const auto& row : t.rows) arr.push_back(row);
      write_json(base + ".json", arr);
      return;
    }
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ',';
      out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_cell(row.at(t.columns[c]));
      }
      out += '\n';
    }
    write_text(base + ".csv", out);
  }

  void finish(const ordered_json& config, const std::string& command) {
    write_json("config.json", config);
    ordered_json manifest;
    manifest["tool"] = "scarlab";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["generated_at"] = iso_utc_now();
    manifest["files"] = files;
    write_file(dir / "manifest.json", dump_json(manifest) + "\n");
  }
};

ordered_json json_doubles(const std::vector<double>& v) {
  ordered_json arr = ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Option bags. One per subcommand; defaults are the resolved values echoed
// into config.json.

struct CommonOpts {
  int length = 0;
  std::string bc = "pbc";
  int momentum = 0;
  bool momentum_set = false;
  int inversion = 0;
  bool inversion_set = false;
  std::string out;
  std::string format = "csv";
  double stagger = 0.0;
  bool exact = false;
  double tmax = 30.0;
  double dt = 0.1;
  std::uint64_t seed = 1;
};

ordered_json sector_summary(const SymmetrySector& sec) {
  ordered_json j;
  j["L"] = sec.length();
  j["k"] = sec.momentum();
  if (sec.parity() != 0)
    j["I"] = sec.parity();
  else
    j["I"] = nullptr;
  j["dimension"] = sec.size();
  std::map<std::uint32_t, std::size_t> hist;
  for (std::uint32_t s : sec.orbit_sizes()) ++hist[s];
  ordered_json h;
  for (const auto& [size, count] : hist) h[std::to_string(size)] = count;
  j["orbit_size_histogram"] = h;
  return j;
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the list of payload files via OutputDir and
// throws on error; the caller maps exceptions to exit codes.

void cmd_basis(const CommonOpts& o, const std::string& command) {
  const Boundary bc = parse_bc(o.bc);
  ConstrainedBasis basis(o.length, bc);
  OutputDir out(o.out);

  std::string text;
  for (std::size_t j = 0; j < basis.size(); ++j)
    text += to_string(basis.state(j), o.length) + "\n";
  out.write_text("basis.txt", text);

  ordered_json config;
  config["subcommand"] = "basis";
  config["length"] = o.length;
  config["bc"] = o.bc;
  config["dimension"] = basis.size();
  if (o.momentum_set) {
    if (bc != Boundary::PBC)
      throw std::invalid_argument("momentum sectors need periodic boundaries");
    SymmetrySector sec(basis, o.momentum, o.inversion_set ? o.inversion : 0);
    out.write_json("sector.json", sector_summary(sec));
    config["momentum"] = o.momentum;
    config["inversion"] =
        o.inversion_set ? ordered_json(o.inversion) : ordered_json(nullptr);
  }
  config["out"] = o.out;
  out.finish(config, command);
}

void cmd_graph(const CommonOpts& o, const std::string& command) {
  const Boundary bc = parse_bc(o.bc);
  ConstrainedBasis basis(o.length, bc);
  HilbertGraph g = build_graph(basis);
  OutputDir out(o.out);

  std::string edges;
  for (const auto& [i, j] : g.edges)
    edges += std::to_string(i) + " " + std::to_string(j) + "\n";
  out.write_text("graph.txt", edges);

  std::string dot = "graph hilbert {\n";
  for (std::size_t j = 0; j < basis.size(); ++j) {
    dot += "  " + std::to_string(j) + " [label=\"" +
           to_string(basis.state(j), o.length) +
           "\", layer=" + std::to_string(basis.hamming(j)) + "];\n";
  }
  for (const auto& [i, j] : g.edges)
    dot += "  " + std::to_string(i) + " -- " + std::to_string(j) + ";\n";
  dot += "}\n";
  out.write_text("graph.dot", dot);

  ordered_json config;
  config["subcommand"] = "graph";
  config["length"] = o.length;
  config["bc"] = o.bc;
  config["dimension"] = basis.size();
  config["edges"] = g.edges.size();
  config["out"] = o.out;
  out.finish(config, command);
}

void cmd_spectrum(const CommonOpts& o, bool matrix, const std::string& command) {
  const Boundary bc = parse_bc(o.bc);
  ConstrainedBasis basis(o.length, bc);
  OutputDir out(o.out);

  SpectrumResult res;
  if (o.momentum_set) {
    if (bc != Boundary::PBC)
      throw std::invalid_argument("momentum sectors need periodic boundaries");
    if (o.stagger != 0.0)
      throw std::invalid_argument(
          "the staggered field breaks translation symmetry; drop --momentum");
    if (matrix)
      throw std::invalid_argument("matrix export covers the full basis only");
    SymmetrySector sec(basis, o.momentum, o.inversion_set ? o.inversion : 0);
    res = diagonalize(sec, false);
  } else {
    OperatorSpec spec;
    spec.stagger_amplitude = o.stagger;
    res = diagonalize_full(basis, spec, false);
    if (matrix) {
      SparseOperator op = assemble(spec, basis);
      std::string trip;
      for (std::size_t r = 0; r < op.dimension; ++r) {
        for (std::size_t p = op.row_start[r]; p < op.row_start[r + 1]; ++p) {
          trip += std::to_string(r) + " " + std::to_string(op.col[p]) + " " +
                  format_double(op.val[p]) + "\n";
        }
      }
      out.write_text("matrix.txt", trip);
    }
  }

  Table t;
  t.columns = {"index", "energy"};
  for (std::size_t i = 0; i < res.energies.size(); ++i) {
    ordered_json row;
    row["index"] = i;
    row["energy"] = res.energies[i];
    t.rows.push_back(std::move(row));
  }
  out.write_table("spectrum", t, o.format);

  ordered_json config;
  config["subcommand"] = "spectrum";
  config["length"] = o.length;
  config["bc"] = o.bc;
  config["momentum"] =
      o.momentum_set ? ordered_json(o.momentum) : ordered_json(nullptr);
  config["inversion"] =
      o.inversion_set ? ordered_json(o.inversion) : ordered_json(nullptr);
  config["stagger"] = o.stagger;
  config["dimension"] = res.dimension;
  config["format"] = o.format;
  config["out"] = o.out;
  out.finish(config, command);
}

void write_statistics(OutputDir& out, const LevelStatistics& st,
                      const ordered_json& label_L, const ordered_json& label_k,
                      const ordered_json& label_I, const char* synthetic) {
  ordered_json j;
  j["L"] = label_L;
  j["k"] = label_k;
  j["I"] = label_I;
  if (synthetic) j["synthetic"] = synthetic;
  j["window"] = ordered_json::array({st.window_lo, st.window_hi});
  j["ks_poisson"] = st.ks_poisson;
  j["ks_semipoisson"] = st.ks_semi_poisson;
  j["ks_wd"] = st.ks_wigner_dyson;
  j["r_mean"] = st.r_mean;
  j["spacing_count"] = st.spacings.size();
  out.write_json("statistics.json", j);

  Table t;
  t.columns = {"s"};
  for (double s : st.spacings) {
    ordered_json row;
    row["s"] = s;
    t.rows.push_back(std::move(row));
  }
  out.write_table("spacings", t, "csv");
}

void cmd_levelstats(const CommonOpts& o, const std::string& synthetic,
                    std::size_t levels, const std::string& command,
                    const char* label = "levelstats") {
  OutputDir out(o.out);
  ordered_json config;
  config["subcommand"] = label;

  if (!synthetic.empty()) {
    std::vector<double> e = synthetic == "poisson"
                                ? poisson_levels(levels, o.seed)
                                : goe_levels(levels, o.seed);
    const auto [lo, hi] = bulk_window(e.size());
    LevelStatistics st = level_statistics(e, lo, hi);
    write_statistics(out, st, nullptr, nullptr, nullptr, synthetic.c_str());
    config["synthetic"] = synthetic;
    config["levels"] = levels;
    config["seed"] = o.seed;
  } else {
    if (o.length == 0)
      throw std::invalid_argument("need --length or --synthetic");
    ConstrainedBasis basis(o.length, Boundary::PBC);
    const int k = o.momentum_set ? o.momentum : 0;
    const int inv = o.inversion_set ? o.inversion : +1;
    SymmetrySector sec(basis, k, inv);
    SpectrumResult res = diagonalize(sec, false);
    const auto [lo, hi] = bulk_window(res.energies.size());
    LevelStatistics st = level_statistics(res.energies, lo, hi);
    write_statistics(out, st, o.length, k, inv, nullptr);
    config["length"] = o.length;
    config["momentum"] = k;
    config["inversion"] = inv;
    config["dimension"] = res.dimension;
  }
  config["out"] = o.out;
  out.finish(config, command);
}

ordered_json band_json(const OverlapScatter& scatter, const ScarBand& band) {
  ordered_json j;
  j["L"] = band.L;
  j["omega"] = band.omega;
  ordered_json members = ordered_json::array();
  for (std::size_t m : band.members) {
    const ScatterPoint& pt = scatter.points[m];
    ordered_json e;
    e["energy"] = pt.energy;
    e["overlap"] = pt.overlap;
    e["pr2"] = pt.pr2;
    members.push_back(std::move(e));
  }
  j["members"] = members;
  j["central_window"] = band.central_window;
  j["mean_abs_rel_energy_error"] = band.mean_abs_rel_energy_error;
  j["pr2_band_mean"] = band.pr2_band_mean;
  j["pr2_bulk_mean"] = band.pr2_bulk_mean;
  j["pr2_ratio"] = band.pr2_ratio;
  j["overlap_separation"] = band.overlap_separation;
  return j;
}

Table scatter_table(const OverlapScatter& scatter, const ScarBand& band) {
  std::vector<char> special(scatter.points.size(), 0);
  for (std::size_t m : band.members) special[m] = 1;
  Table t;
  t.columns = {"energy", "overlap", "pr2", "is_special"};
  for (std::size_t i = 0; i < scatter.points.size(); ++i) {
    const ScatterPoint& pt = scatter.points[i];
    ordered_json row;
    row["energy"] = pt.energy;
    row["overlap"] = pt.overlap;
    row["pr2"] = pt.pr2;
    row["is_special"] = static_cast<int>(special[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void cmd_scars(const CommonOpts& o, const std::string& command,
               const char* label = "scars") {
  ConstrainedBasis basis(o.length, Boundary::PBC);
  FsaResult fsa = run_fsa(basis);
  BandScatter bs(basis, dense_cap());
  ScarBand band = detect_band(bs.scatter, fsa.energies);

  OutputDir out(o.out);
  out.write_table("scatter", scatter_table(bs.scatter, band), o.format);
  out.write_json("band.json", band_json(bs.scatter, band));

  ordered_json config;
  config["subcommand"] = label;
  config["length"] = o.length;
  config["bc"] = "pbc";
  config["format"] = o.format;
  config["out"] = o.out;
  out.finish(config, command);
}

ordered_json fsa_json(const FsaResult& fsa) {
  ordered_json j;
  j["L"] = fsa.L;
  j["beta"] = json_doubles(fsa.beta);
  j["err"] = json_doubles(fsa.step_error);
  j["energies"] = json_doubles(fsa.energies);
  j["overlaps_z2"] = json_doubles(fsa_reference_overlaps(fsa));
  j["closure_residual"] = fsa.closure_residual;
  j["mean_err"] = fsa.mean_error();
  j["max_err"] = fsa.max_error();
  return j;
}

void cmd_fsa(const CommonOpts& o, const std::string& command) {
  ConstrainedBasis basis(o.length, Boundary::PBC);
  FsaResult fsa = run_fsa(basis);
  OutputDir out(o.out);
  out.write_json("fsa.json", fsa_json(fsa));

  ordered_json config;
  config["subcommand"] = "fsa";
  config["length"] = o.length;
  config["bc"] = "pbc";
  config["out"] = o.out;
  out.finish(config, command);
}

Table timeseries_table(const QuenchResult& run) {
  Table t;
  t.columns = {"t", "fidelity", "correlator", "entropy"};
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    ordered_json row;
    row["t"] = run.t[i];
    row["fidelity"] = run.fidelity[i];
    row["correlator"] = run.correlator[i];
    row["entropy"] = run.entropy.empty() ? 0.0 : run.entropy[i];
    t.rows.push_back(std::move(row));
  }
  return t;
}

ordered_json analysis_json(const OscillationAnalysis& a,
                           const QuenchResult& run) {
  ordered_json j;
  j["slope"] = a.entropy_slope;
  j["period_entropy_residual"] = a.period_entropy_residual;
  j["period_correlator"] = a.period_correlator;
  j["fit_window"] = ordered_json::array({a.fit_lo, a.fit_hi});
  j["max_norm_error"] = run.max_norm_error;
  j["max_energy_drift"] = run.max_energy_drift;
  return j;
}

void cmd_dynamics(const CommonOpts& o, const std::string& initial,
                  double fit_lo, double fit_hi, const std::string& command) {
  const Boundary bc = parse_bc(o.bc);
  ConstrainedBasis basis(o.length, bc);
  const Word start = product_state(parse_pattern(initial), o.length, bc);

  QuenchOptions qo;
  qo.tmax = o.tmax;
  qo.dt = o.dt;
  qo.method = o.exact ? EvolveMethod::SpectralFull : EvolveMethod::Krylov;
  QuenchResult run = quench(basis, start, qo);

  OutputDir out(o.out);
  out.write_table("timeseries", timeseries_table(run), o.format);
  if (fit_hi <= 0.0) fit_hi = o.tmax;
  OscillationAnalysis a = oscillation_analysis(run, fit_lo, fit_hi);
  out.write_json("analysis.json", analysis_json(a, run));

  ordered_json config;
  config["subcommand"] = "dynamics";
  config["length"] = o.length;
  config["bc"] = o.bc;
  config["initial"] = initial;
  config["tmax"] = o.tmax;
  config["dt"] = o.dt;
  config["method"] = o.exact ? "spectral" : "krylov";
  config["entropy_cut"] = run.entropy_cut;
  config["fit_window"] = ordered_json::array({fit_lo, fit_hi});
  config["format"] = o.format;
  config["out"] = o.out;
  out.finish(config, command);
}

std::size_t kernel_prediction(int L, Boundary bc, double stagger) {
  if (bc != Boundary::OBC) return SIZE_MAX;
  if (L % 2 == 0) return fibonacci(L / 2 + 1);
  return stagger == 0.0 ? fibonacci((L - 1) / 2) : 0;
}

void cmd_zeromodes(const CommonOpts& o, const std::string& command) {
  const Boundary bc = parse_bc(o.bc);
  ConstrainedBasis basis(o.length, bc);
  OutputDir out(o.out);

  ordered_json j;
  j["L"] = o.length;
  j["bc"] = o.bc;
  j["dimension"] = basis.size();
  j["stagger"] = o.stagger;

  if (o.exact) {
    ZeroModeOptions zo;
    zo.stagger = o.stagger;
    ZeroModeReport rep = exact_zero_modes(basis, zo);
    j["method"] = "exact";
    j["kernelDimension"] = rep.nullity;
    j["prediction"] = rep.prediction == SIZE_MAX
                          ? ordered_json(nullptr)
                          : ordered_json(rep.prediction);
    j["primes_used"] = rep.primes_used;
    ordered_json vectors = ordered_json::array();
    for (const auto& v : rep.kernel) {
      ordered_json row = ordered_json::array();
      for (const mpz_class& x : v) {
        if (x.fits_slong_p())
          row.push_back(x.get_si());
        else
          row.push_back(x.get_str());
      }
      vectors.push_back(std::move(row));
    }
    j["vectors"] = vectors;
  } else {
    OperatorSpec spec;
    spec.stagger_amplitude = o.stagger;
    SpectrumResult res = diagonalize_full(basis, spec, false);
    const std::size_t pred = kernel_prediction(o.length, bc, o.stagger);
    j["method"] = "numeric";
    j["kernelDimension"] = numeric_zero_modes(res.energies);
    j["prediction"] =
        pred == SIZE_MAX ? ordered_json(nullptr) : ordered_json(pred);
  }
  out.write_json("zeromodes.json", j);

  ordered_json config;
  config["subcommand"] = "zeromodes";
  config["length"] = o.length;
  config["bc"] = o.bc;
  config["stagger"] = o.stagger;
  config["exact"] = o.exact;
  config["out"] = o.out;
  out.finish(config, command);
}

// ---------------------------------------------------------------------------
// reproduce bundles

void fig2(const CommonOpts& o, const std::string& command) {
  if (o.length > 24)
    throw std::invalid_argument("fig2 runs at L <= 24");
  ConstrainedBasis basis(o.length, Boundary::PBC);

  std::vector<std::pair<std::string, Pattern>> initials;
  initials.emplace_back("z2", Pattern::Z2);
  if (o.length % 3 == 0) initials.emplace_back("z3", Pattern::Z3);
  if (o.length % 4 == 0) initials.emplace_back("z4", Pattern::Z4);
  initials.emplace_back("vacuum", Pattern::Vacuum);

  OutputDir out(o.out);
  ordered_json ran = ordered_json::array();
  for (const auto& [name, pattern] : initials) {
    QuenchOptions qo;
    qo.tmax = o.tmax;
    qo.dt = o.dt;
    QuenchResult run = quench(basis, product_state(pattern, o.length), qo);
    out.write_table("timeseries_" + name, timeseries_table(run), o.format);
    OscillationAnalysis a = oscillation_analysis(run, 0.0, o.tmax);
    out.write_json("analysis_" + name + ".json", analysis_json(a, run));
    ran.push_back(name);
  }

  ordered_json config;
  config["subcommand"] = "reproduce fig2";
  config["length"] = o.length;
  config["bc"] = "pbc";
  config["initials"] = ran;
  config["tmax"] = o.tmax;
  config["dt"] = o.dt;
  config["format"] = o.format;
  config["out"] = o.out;
  out.finish(config, command);
}

void fig3a(const CommonOpts& o, const std::string& command) {
  if (o.length > 24)
    throw std::invalid_argument("fig3a runs at L <= 24");
  CommonOpts alias = o;
  alias.bc = "pbc";
  cmd_scars(alias, command, "reproduce fig3a");
}

void fig3bc(const CommonOpts& o, const std::string& command) {
  if (o.length > 24 && o.length != 32)
    throw std::invalid_argument("fig3bc runs at L <= 24, or L = 32 without "
                                "exact eigenstates");
  ConstrainedBasis basis(o.length, Boundary::PBC);
  FsaResult fsa = run_fsa(basis);
  OutputDir out(o.out);
  out.write_json("fsa.json", fsa_json(fsa));

  ordered_json config;
  config["subcommand"] = "reproduce fig3bc";
  config["length"] = o.length;
  config["bc"] = "pbc";
  config["format"] = o.format;

  if (o.length <= 24) {
    BandScatter bs(basis, dense_cap());
    ScarBand band = detect_band(bs.scatter, fsa.energies);

    Table comp;
    comp.columns = {"n", "fsa_energy", "exact_energy"};
    const std::size_t n = fsa.energies.size();
    for (std::size_t j = 0; j < n; ++j) {
      ordered_json row;
      row["n"] = j;
      row["fsa_energy"] = fsa.energies[j];
      row["exact_energy"] = bs.scatter.points[band.members[j]].energy;
      comp.rows.push_back(std::move(row));
    }
    out.write_table("band_energies", comp, o.format);

    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> psi = bs.embed_point(bs.scatter.points[band.members[j]]);
      std::vector<double> exact_prob = fsa_profile(fsa, psi);
      Table prof;
      prof.columns = {"n", "exact_prob", "fsa_prob"};
      for (std::size_t layer = 0; layer < n; ++layer) {
        ordered_json row;
        row["n"] = layer;
        row["exact_prob"] = exact_prob[layer];
        row["fsa_prob"] = fsa.modes[layer + j * n] * fsa.modes[layer + j * n];
        prof.rows.push_back(std::move(row));
      }
      char name[32];
      std::snprintf(name, sizeof(name), "profile_%02zu", j);
      out.write_table(name, prof, o.format);
    }
    config["profiles"] = n;
  } else {
    config["profiles"] = 0;
  }
  config["out"] = o.out;
  out.finish(config, command);
}

void fig3d(const CommonOpts& o, const std::string& command) {
  OutputDir out(o.out);
  Table sweep;
  sweep.columns = {"L", "omega", "pr2_band_mean", "pr2_bulk_mean", "pr2_ratio"};
  ordered_json sizes = ordered_json::array();
  for (int L = 12; L <= 24; L += 2) {
    ConstrainedBasis basis(L, Boundary::PBC);
    FsaResult fsa = run_fsa(basis);
    BandScatter bs(basis, dense_cap());
    ScarBand band = detect_band(bs.scatter, fsa.energies);
    ordered_json row;
    row["L"] = L;
    row["omega"] = band.omega;
    row["pr2_band_mean"] = band.pr2_band_mean;
    row["pr2_bulk_mean"] = band.pr2_bulk_mean;
    row["pr2_ratio"] = band.pr2_ratio;
    sweep.rows.push_back(std::move(row));
    sizes.push_back(L);
  }
  out.write_table("sweep", sweep, o.format);

  ordered_json config;
  config["subcommand"] = "reproduce fig3d";
  config["lengths"] = sizes;
  config["bc"] = "pbc";
  config["format"] = o.format;
  config["out"] = o.out;
  out.finish(config, command);
}

void fig4(const CommonOpts& o, const std::string& command) {
  if (o.length > 28)
    throw std::invalid_argument("fig4 runs at L <= 28");
  CommonOpts alias = o;
  alias.momentum_set = true;
  alias.momentum = 0;
  alias.inversion_set = true;
  alias.inversion = +1;
  cmd_levelstats(alias, "", 0, command, "reproduce fig4");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained-chain spectra, scarred eigenstates and quench "
               "dynamics: batch analyses with machine-readable output."};
  app.set_version_flag("--version", std::string("scarlab ") + kVersion);
  app.require_subcommand(1);
  const std::string command = join_argv(argc, argv);

  auto add_length = [](CLI::App* sub, CommonOpts& o, bool required = true) {
    auto* opt = sub->add_option("--length,-L", o.length, "number of sites")
                    ->check(CLI::Range(2, 32));
    if (required) opt->required();
    return opt;
  };
  auto add_bc = [](CLI::App* sub, CommonOpts& o) {
    sub->add_option("--bc", o.bc, "boundary condition")
        ->check(CLI::IsMember({"pbc", "obc"}))
        ->capture_default_str();
  };
  auto add_format = [](CLI::App* sub, CommonOpts& o) {
    sub->add_option("--format", o.format, "table output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };
  auto add_out = [](CLI::App* sub, CommonOpts& o, const char* fallback) {
    o.out = fallback;
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };
  auto add_sector = [](CLI::App* sub, CommonOpts& o) {
    auto* mk = sub->add_option("--momentum", o.momentum,
                               "momentum index k (PBC sectors)")
                   ->check(CLI::Range(0, 31));
    auto* mi = sub->add_option("--inversion", o.inversion,
                               "inversion parity (k = 0 or L/2 only)")
                   ->check(CLI::IsMember({-1, 1}));
    sub->parse_complete_callback([&o, mk, mi]() {
      o.momentum_set = mk->count() > 0;
      o.inversion_set = mi->count() > 0;
    });
  };

  // basis
  {
    auto o = std::make_shared<CommonOpts>();
    CLI::App* sub = app.add_subcommand("basis", "enumerate the constrained basis");
    add_length(sub, *o);
    add_bc(sub, *o);
    add_sector(sub, *o);
    add_out(sub, *o, "scarlab-basis");
    sub->callback([o, command]() { cmd_basis(*o, command); });
  }
  // graph
  {
    auto o = std::make_shared<CommonOpts>();
    CLI::App* sub = app.add_subcommand("graph", "adjacency graph of the basis");
    add_length(sub, *o);
    add_bc(sub, *o);
    add_out(sub, *o, "scarlab-graph");
    sub->callback([o, command]() { cmd_graph(*o, command); });
  }
  // spectrum
  {
    auto o = std::make_shared<CommonOpts>();
    auto matrix = std::make_shared<bool>(false);
    CLI::App* sub = app.add_subcommand("spectrum", "dense eigenvalues");
    add_length(sub, *o);
    add_bc(sub, *o);
    add_sector(sub, *o);
    sub->add_option("--stagger", o->stagger, "staggered-field amplitude")
        ->capture_default_str();
    sub->add_flag("--matrix", *matrix, "also export Hamiltonian triplets");
    add_format(sub, *o);
    add_out(sub, *o, "scarlab-spectrum");
    sub->callback([o, matrix, command]() { cmd_spectrum(*o, *matrix, command); });
  }
  // levelstats
  {
    auto o = std::make_shared<CommonOpts>();
    auto synthetic = std::make_shared<std::string>();
    auto levels = std::make_shared<std::size_t>(5000);
    CLI::App* sub =
        app.add_subcommand("levelstats", "unfolded level-spacing statistics");
    add_length(sub, *o, false);
    add_sector(sub, *o);
    sub->add_option("--synthetic", *synthetic,
                    "random-matrix control ensemble")
        ->check(CLI::IsMember({"poisson", "goe"}));
    sub->add_option("--levels", *levels, "synthetic control sample size")
        ->capture_default_str();
    sub->add_option("--seed", o->seed, "synthetic control RNG seed")
        ->capture_default_str();
    add_out(sub, *o, "scarlab-levelstats");
    sub->callback([o, synthetic, levels, command]() {
      cmd_levelstats(*o, *synthetic, *levels, command);
    });
  }
  // scars
  {
    auto o = std::make_shared<CommonOpts>();
    CLI::App* sub =
        app.add_subcommand("scars", "overlap scatter and the special band");
    add_length(sub, *o);
    add_format(sub, *o);
    add_out(sub, *o, "scarlab-scars");
    sub->callback([o, command]() { cmd_scars(*o, command); });
  }
  // fsa
  {
    auto o = std::make_shared<CommonOpts>();
    CLI::App* sub =
        app.add_subcommand("fsa", "forward-scattering approximation ladder");
    add_length(sub, *o);
    add_out(sub, *o, "scarlab-fsa");
    sub->callback([o, command]() { cmd_fsa(*o, command); });
  }
  // dynamics
  {
    auto o = std::make_shared<CommonOpts>();
    auto initial = std::make_shared<std::string>("z2");
    auto fit_lo = std::make_shared<double>(0.0);
    auto fit_hi = std::make_shared<double>(0.0);
    CLI::App* sub = app.add_subcommand("dynamics", "quench time evolution");
    add_length(sub, *o);
    add_bc(sub, *o);
    sub->add_option("--initial", *initial, "initial product state")
        ->check(CLI::IsMember({"z2", "z2prime", "z3", "z4", "vacuum"}))
        ->capture_default_str();
    sub->add_option("--tmax", o->tmax, "evolution time")->capture_default_str();
    sub->add_option("--dt", o->dt, "sampling step")->capture_default_str();
    sub->add_flag("--exact", o->exact,
                  "use the dense spectral propagator instead of Krylov");
    sub->add_option("--fit-lo", *fit_lo, "analysis window start")
        ->capture_default_str();
    sub->add_option("--fit-hi", *fit_hi,
                    "analysis window end (default: tmax)");
    add_format(sub, *o);
    add_out(sub, *o, "scarlab-dynamics");
    sub->callback([o, initial, fit_lo, fit_hi, command]() {
      cmd_dynamics(*o, *initial, *fit_lo, *fit_hi, command);
    });
  }
  // zeromodes
  {
    auto o = std::make_shared<CommonOpts>();
    CLI::App* sub = app.add_subcommand("zeromodes", "E = 0 degeneracy");
    add_length(sub, *o);
    add_bc(sub, *o);
    sub->add_option("--stagger", o->stagger, "staggered-field amplitude")
        ->capture_default_str();
    sub->add_flag("--exact", o->exact,
                  "certified integer kernel instead of a numeric count");
    add_out(sub, *o, "scarlab-zeromodes");
    sub->callback([o, command]() { cmd_zeromodes(*o, command); });
  }
  // reproduce
  {
    CLI::App* rep = app.add_subcommand(
        "reproduce", "figure-oriented bundles over the analysis pipeline");
    rep->require_subcommand(1);
    struct FigSpec {
      const char* name;
      const char* help;
      int default_length;
      void (*fn)(const CommonOpts&, const std::string&);
    };
    const FigSpec figs[] = {
        {"fig2", "quench time series and oscillation analysis", 20, fig2},
        {"fig3a", "overlap scatter with the special band", 20, fig3a},
        {"fig3bc", "ladder spectrum and layer profiles", 16, fig3bc},
        {"fig3d", "band separation and participation sweep", 0, fig3d},
        {"fig4", "bulk level statistics vs reference ensembles", 24, fig4},
    };
    for (const FigSpec& f : figs) {
      auto o = std::make_shared<CommonOpts>();
      CLI::App* sub = rep->add_subcommand(f.name, f.help);
      if (f.default_length > 0) {
        o->length = f.default_length;
        sub->add_option("--length,-L", o->length, "number of sites")
            ->check(CLI::Range(2, 32))
            ->capture_default_str();
      }
      sub->add_option("--tmax", o->tmax, "evolution time")
          ->capture_default_str();
      sub->add_option("--dt", o->dt, "sampling step")->capture_default_str();
      add_format(sub, *o);
      add_out(sub, *o, (std::string("scarlab-") + f.name).c_str());
      auto fn = f.fn;
      sub->callback([o, fn, command]() { fn(*o, command); });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
