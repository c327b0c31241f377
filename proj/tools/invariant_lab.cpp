// Command-line front end: exact and shot-sampled invariant computations,
// spectrum recovery, witness grids, and the noise / sample-complexity studies.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invlab/circuits.hpp"
#include "invlab/estimation.hpp"
#include "invlab/invariants.hpp"
#include "invlab/io.hpp"
#include "invlab/nonclassicality.hpp"
#include "invlab/parallel.hpp"
#include "invlab/rng.hpp"
#include "invlab/spectrum.hpp"

namespace {

using namespace invlab;

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stod(token));
  }
  if (out.empty()) throw CLI::ValidationError("expected a comma-separated number list");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

// Sink for results: stdout by default, file with --out. Headers echo the tool
// version, the full argv, and the seed so runs are replayable.
class Output {
 public:
  Output(const std::string& path, std::string argv_echo)
      : argv_echo_(std::move(argv_echo)) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error(path + ": cannot open for writing");
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  void header(const std::string& subcommand, const std::string& backend,
              std::optional<std::uint64_t> seed) {
    stream() << "# invariant-lab " << INVLAB_VERSION << "\n";
    stream() << "# subcommand: " << subcommand << "\n";
    stream() << "# args:" << argv_echo_ << "\n";
    stream() << "# backend: " << backend << "\n";
    if (seed) stream() << "# seed: " << *seed << "\n";
  }

 private:
  std::string argv_echo_;
  std::ofstream file_;
};

OrthonormalBasis load_basis(const std::string& spec, int dim) {
  if (spec == "computational" || spec == "z") return OrthonormalBasis::computational(dim);
  if (spec == "fourier") return OrthonormalBasis::fourier(dim);
  return OrthonormalBasis::from_columns(load_matrix(spec));
}

int resolve_threads(int threads_flag) {
  if (threads_flag > 0) return threads_flag;
  if (const char* env = std::getenv("INVARIANT_LAB_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 0;  // library default: hardware concurrency
}

struct SeedGuard {
  std::uint64_t value = 0;
  bool set = false;
};

void require_seed(const SeedGuard& seed, const std::string& context) {
  if (!seed.set) {
    throw CLI::ValidationError("--seed is required for " + context +
                               " (stochastic runs take no silent entropy)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant-lab: Bargmann-invariant computations, cycle-test circuit "
               "simulation, spectrum recovery, and nonclassicality witnesses"};
  app.require_subcommand(1);

  std::string argv_echo;
  for (int k = 1; k < argc; ++k) argv_echo += std::string(" ") + argv[k];

  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "cap on worker threads (env INVARIANT_LAB_THREADS)");

  SeedGuard seed;
  auto add_seed = [&seed](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&seed](const std::uint64_t& v) {
          seed.value = v;
          seed.set = true;
        },
        "RNG seed (required for stochastic runs)");
  };
  std::string out_path;
  auto add_out = [&out_path](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  };

  // ---- invariant ----
  auto* cmd_invariant = app.add_subcommand("invariant", "Bargmann invariant of a state list");
  std::vector<std::string> state_paths;
  long long shots = 0;
  cmd_invariant->add_option("--states", state_paths, "state JSON files (vectors or matrices)")
      ->required()
      ->expected(-1);
  cmd_invariant->add_option("--shots", shots, "shots per part (0 = exact backend)");
  add_seed(cmd_invariant);
  add_out(cmd_invariant);

  // ---- kd ----
  auto* cmd_kd = app.add_subcommand("kd", "Kirkwood-Dirac distribution of a state");
  std::string kd_state, kd_basis_i = "computational", kd_basis_f = "fourier";
  cmd_kd->add_option("--state", kd_state, "density-matrix or vector JSON file")->required();
  cmd_kd->add_option("--basis-i", kd_basis_i, "computational | fourier | unitary JSON file");
  cmd_kd->add_option("--basis-f", kd_basis_f, "computational | fourier | unitary JSON file");
  add_out(cmd_kd);

  // ---- weak-value ----
  auto* cmd_wv = app.add_subcommand("weak-value", "weak value of an observable");
  std::string wv_obs, wv_pre, wv_post;
  long long wv_shots = 0;
  double wv_tol = 1e-10;
  cmd_wv->add_option("--observable", wv_obs, "Hermitian matrix JSON file")->required();
  cmd_wv->add_option("--pre", wv_pre, "pre-selection state JSON file")->required();
  cmd_wv->add_option("--post", wv_post, "post-selection state JSON file")->required();
  cmd_wv->add_option("--shots", wv_shots, "shots per part (0 = exact backend)");
  cmd_wv->add_option("--tol", wv_tol, "anomaly classification tolerance");
  add_seed(cmd_wv);
  add_out(cmd_wv);

  // ---- spectrum ----
  auto* cmd_spectrum = app.add_subcommand("spectrum", "eigenvalues from univariate traces");
  std::string spectrum_traces, spectrum_state;
  int spectrum_truncate = -1;
  cmd_spectrum->add_option("--traces", spectrum_traces, "comma list Tr(rho),Tr(rho^2),...");
  cmd_spectrum->add_option("--state", spectrum_state, "density-matrix JSON file (traces computed exactly)");
  cmd_spectrum->add_option("--truncate", spectrum_truncate,
                           "report only the largest eigenvalue of the degree-(d-k) truncation");
  add_out(cmd_spectrum);

  // ---- qfi ----
  auto* cmd_qfi = app.add_subcommand("qfi", "post-selected quantum Fisher information");
  std::string qfi_state, qfi_generator, qfi_projector;
  double qfi_theta = 0.0;
  cmd_qfi->add_option("--state", qfi_state, "pure state JSON file")->required();
  cmd_qfi->add_option("--generator", qfi_generator, "Hermitian generator JSON file")->required();
  cmd_qfi->add_option("--post-projector", qfi_projector, "projector JSON file")->required();
  cmd_qfi->add_option("--theta", qfi_theta, "encoded parameter")->required();
  add_out(cmd_qfi);

  // ---- otoc ----
  auto* cmd_otoc = app.add_subcommand("otoc", "out-of-time-ordered correlator");
  std::string otoc_state, otoc_w, otoc_v, otoc_u;
  cmd_otoc->add_option("--state", otoc_state, "density-matrix JSON file")->required();
  cmd_otoc->add_option("--w", otoc_w, "Hermitian W JSON file")->required();
  cmd_otoc->add_option("--v", otoc_v, "Hermitian V JSON file")->required();
  cmd_otoc->add_option("--unitary", otoc_u, "evolution unitary JSON file")->required();
  add_out(cmd_otoc);

  // ---- witness ----
  auto* cmd_witness = app.add_subcommand("witness", "overlap-triple nonclassicality witnesses");
  std::string witness_triple;
  int rebit_grid = 0, real_grid = 0;
  double witness_alpha = 0.11;
  cmd_witness->add_option("--triple", witness_triple, "d12,d13,d23 overlap triple");
  cmd_witness->add_option("--rebit-grid", rebit_grid, "emit an N x N (theta, phi, region) grid");
  cmd_witness->add_option("--real-grid", real_grid,
                          "emit an N x N (beta, gamma, h3, delta3) grid at fixed alpha");
  cmd_witness->add_option("--alpha", witness_alpha, "alpha for --real-grid");
  add_out(cmd_witness);

  // ---- noise-study ----
  auto* cmd_noise = app.add_subcommand("noise-study", "Gaussian trace-noise RMSE table");
  std::string noise_dims = "2,3,4,5,6,7,8", noise_eps = "1e-5,1e-4,1e-3";
  int noise_states = 500, noise_noisy = 200, noise_rank = 0;
  cmd_noise->add_option("--dims", noise_dims, "comma list of dimensions");
  cmd_noise->add_option("--epsilons", noise_eps, "comma list of noise levels");
  cmd_noise->add_option("--states", noise_states, "Ginibre states per dimension");
  cmd_noise->add_option("--noisy", noise_noisy, "noisy draws per state");
  cmd_noise->add_option("--rank", noise_rank, "Ginibre rank (0 = full)");
  add_seed(cmd_noise);
  add_out(cmd_noise);

  // ---- compare-complexity ----
  auto* cmd_compare = app.add_subcommand("compare-complexity",
                                         "cycle-test vs weak-measurement error scaling");
  std::string compare_overlaps = "0.5,0.1,0.02";
  double compare_eps = 0.01, compare_delta = 0.05;
  int compare_reps = 200;
  cmd_compare->add_option("--overlaps", compare_overlaps, "comma list of Delta_2 values");
  cmd_compare->add_option("--epsilon", compare_eps, "target precision for the shot plan");
  cmd_compare->add_option("--delta", compare_delta, "failure probability for the shot plan");
  cmd_compare->add_option("--reps", compare_reps, "repetitions per cell");
  add_seed(cmd_compare);
  add_out(cmd_compare);

  // ---- export-circuit ----
  auto* cmd_export = app.add_subcommand("export-circuit", "emit a circuit as json-ir or qasm-like text");
  std::string export_kind = "cycle", export_format = "json-ir";
  std::string export_generator, export_unitary;
  int export_order = 3, export_dim = 2, export_s = 0;
  double export_theta = 0.0;
  cmd_export->add_option("--kind", export_kind,
                         "cycle | kd | weak-value-numerator | weak-value-denominator | psqfi | otoc");
  cmd_export->add_option("--order", export_order, "cycle order (kind=cycle)");
  cmd_export->add_option("--dim", export_dim, "system wire dimension");
  cmd_export->add_option("--s", export_s, "0 = real part, 1 = imaginary part");
  cmd_export->add_option("--format", export_format, "json-ir | qasm-like");
  cmd_export->add_option("--theta", export_theta, "psqfi parameter");
  cmd_export->add_option("--generator", export_generator, "psqfi generator JSON file");
  cmd_export->add_option("--unitary", export_unitary, "otoc unitary JSON file");
  add_out(cmd_export);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  const int threads = resolve_threads(threads_flag);

  try {
    if (*cmd_invariant) {
      std::vector<StateInput> inputs;
      std::vector<DensityMatrix> rhos;
      for (const auto& path : state_paths) {
        const std::string text = read_text(path);
        if (text.find("[[") != std::string::npos || text.find("[ [") != std::string::npos) {
          DensityMatrix rho(parse_matrix_json(text, path));
          inputs.emplace_back(rho);
          rhos.push_back(std::move(rho));
        } else {
          PureState psi(parse_vector_json(text, path));
          rhos.push_back(DensityMatrix::from_pure(psi));
          inputs.emplace_back(std::move(psi));
        }
      }
      cplx value;
      std::string backend;
      if (shots > 0) {
        require_seed(seed, "sampled invariant estimation");
        value = estimate_invariant(inputs, shots, seed.value);
        backend = "sampled";
      } else {
        value = bargmann(rhos).value;
        backend = "exact";
      }
      Output out(out_path, argv_echo);
      out.header("invariant", backend, seed.set ? std::optional{seed.value} : std::nullopt);
      out.stream() << num(value.real()) << " " << num(value.imag()) << "\n";
    } else if (*cmd_kd) {
      const std::string text = read_text(kd_state);
      DensityMatrix rho = text.find("[[") != std::string::npos
                              ? DensityMatrix(parse_matrix_json(text, kd_state))
                              : DensityMatrix::from_pure(PureState(parse_vector_json(text, kd_state)));
      const auto basis_i = load_basis(kd_basis_i, rho.dim());
      const auto basis_f = load_basis(kd_basis_f, rho.dim());
      const KDGrid grid = kd_distribution(rho, basis_i, basis_f);
      Output out(out_path, argv_echo);
      out.header("kd", "exact", std::nullopt);
      out.stream() << "i,f,re,im\n";
      for (int i = 0; i < grid.dim(); ++i)
        for (int f = 0; f < grid.dim(); ++f)
          out.stream() << i << "," << f << "," << num(grid.value(i, f).real()) << ","
                       << num(grid.value(i, f).imag()) << "\n";
    } else if (*cmd_wv) {
      const Observable a = spectral_decompose(load_matrix(wv_obs));
      const PureState pre = load_pure_state(wv_pre);
      const PureState post = load_pure_state(wv_post);
      cplx value;
      std::string backend;
      if (wv_shots > 0) {
        require_seed(seed, "sampled weak-value estimation");
        value = estimate_weak_value_cycle(pre, post, a, wv_shots, wv_shots, seed.value);
        backend = "sampled";
      } else {
        value = weak_value(a, pre, post).value;
        backend = "exact";
      }
      const WeakValueResult exact = weak_value(a, pre, post);
      WeakValueResult labeled = exact;
      labeled.value = value;
      Output out(out_path, argv_echo);
      out.header("weak-value", backend, seed.set ? std::optional{seed.value} : std::nullopt);
      const char* label = "classical";
      switch (anomaly_check(labeled, a, wv_tol)) {
        case WeakValueClass::anomalous_real: label = "anomalous-real"; break;
        case WeakValueClass::anomalous_imaginary: label = "anomalous-imaginary"; break;
        default: break;
      }
      out.stream() << num(value.real()) << " " << num(value.imag()) << " " << label << "\n";
    } else if (*cmd_spectrum) {
      std::vector<double> traces;
      if (!spectrum_traces.empty()) {
        traces = parse_double_list(spectrum_traces);
      } else if (!spectrum_state.empty()) {
        const DensityMatrix rho = load_density_matrix(spectrum_state);
        traces = univariate_traces(rho, rho.dim());
      } else {
        throw CLI::ValidationError("spectrum requires --traces or --state");
      }
      Output out(out_path, argv_echo);
      out.header("spectrum", "exact", std::nullopt);
      if (spectrum_truncate >= 0) {
        const int d = static_cast<int>(traces.size()) + spectrum_truncate;
        const double largest = largest_eigenvalue_truncated(traces, d, spectrum_truncate);
        out.stream() << num(largest) << "\n";
      } else {
        const SpectrumEstimate est = spectrum_from_traces(traces);
        for (std::size_t k = 0; k < est.eigenvalues.size(); ++k)
          out.stream() << (k ? " " : "") << num(est.eigenvalues[k]);
        out.stream() << "\n";
      }
    } else if (*cmd_qfi) {
      const PureState psi = load_pure_state(qfi_state);
      const Observable generator = spectral_decompose(load_matrix(qfi_generator));
      const Mat projector = load_matrix(qfi_projector);
      const double value = ps_qfi(psi, generator, projector, qfi_theta);
      Output out(out_path, argv_echo);
      out.header("qfi", "exact", std::nullopt);
      out.stream() << num(value) << "\n";
    } else if (*cmd_otoc) {
      const DensityMatrix rho = load_density_matrix(otoc_state);
      const Observable w = spectral_decompose(load_matrix(otoc_w));
      const Observable v = spectral_decompose(load_matrix(otoc_v));
      const OtocResult result = otoc(rho, w, v, load_matrix(otoc_u));
      Output out(out_path, argv_echo);
      out.header("otoc", "exact", std::nullopt);
      out.stream() << num(result.value.real()) << " " << num(result.value.imag()) << "\n";
    } else if (*cmd_witness) {
      Output out(out_path, argv_echo);
      out.header("witness", "exact", std::nullopt);
      if (rebit_grid > 0) {
        const double pi = std::acos(-1.0);
        out.stream() << "theta,phi,region,delta3\n";
        for (int a = 0; a < rebit_grid; ++a) {
          for (int b = 0; b < rebit_grid; ++b) {
            const double theta = pi * (a + 0.5) / rebit_grid;
            const double phi = pi * (b + 0.5) / rebit_grid;
            const RebitPoint p = rebit_triple(theta, phi);
            out.stream() << num(theta) << "," << num(phi) << "," << p.region << ","
                         << num(p.delta3) << "\n";
          }
        }
      } else if (real_grid > 0) {
        const double pi = std::acos(-1.0);
        out.stream() << "beta,gamma,h3,delta3\n";
        for (int a = 0; a < real_grid; ++a) {
          for (int b = 0; b < real_grid; ++b) {
            const double beta = pi * (a + 0.5) / real_grid;
            const double gamma = pi * (b + 0.5) / real_grid;
            const RealTriple t = real_triple(witness_alpha, beta, gamma);
            out.stream() << num(beta) << "," << num(gamma) << "," << num(t.h3) << ","
                         << num(t.delta3) << "\n";
          }
        }
      } else if (!witness_triple.empty()) {
        const std::vector<double> vals = parse_double_list(witness_triple);
        if (vals.size() != 3) throw CLI::ValidationError("--triple expects three overlaps");
        const OverlapTriple t{vals[0], vals[1], vals[2]};
        const WitnessReport report = witness_report(t);
        static const char* kPatterns[3] = {"(+,+,-)", "(+,-,+)", "(-,+,+)"};
        for (int k = 0; k < 3; ++k) {
          out.stream() << "inequality " << kPatterns[k] << ": lhs " << num(report.inequality_lhs[k])
                       << (report.violated[k] ? " violated" : " satisfied") << "\n";
        }
        out.stream() << "convex-body: lhs " << num(report.convex_body_lhs)
                     << (report.convex_body_satisfied ? " satisfied" : " violated") << "\n";
      } else {
        throw CLI::ValidationError("witness requires --triple, --rebit-grid, or --real-grid");
      }
    } else if (*cmd_noise) {
      require_seed(seed, "noise-study");
      const auto rows = noise_study(parse_int_list(noise_dims), parse_double_list(noise_eps),
                                    noise_states, noise_noisy, seed.value, threads, noise_rank);
      Output out(out_path, argv_echo);
      out.header("noise-study", "exact+noise", seed.value);
      out.stream() << "dim,epsilon,rmse_real_full,rmse_imag_full,rmse_largest,n_states,n_noisy,seed\n";
      for (const auto& row : rows) {
        out.stream() << row.dim << "," << num(row.epsilon) << "," << num(row.rmse_real_full) << ","
                     << num(row.rmse_imag_full) << "," << num(row.rmse_largest) << ","
                     << row.n_states << "," << row.n_noisy << "," << row.seed << "\n";
      }
    } else if (*cmd_compare) {
      require_seed(seed, "compare-complexity");
      const ComplexityReport report = compare_sample_complexity(
          parse_double_list(compare_overlaps), compare_eps, compare_delta, compare_reps,
          seed.value, threads);
      Output out(out_path, argv_echo);
      out.header("compare-complexity", "sampled", seed.value);
      out.stream() << "# exponents: cycle " << num(report.cycle_exponent) << ", weak "
                   << num(report.weak_exponent) << ", weighted " << num(report.weighted_exponent)
                   << ", ratio " << num(report.cycle_exponent / report.weak_exponent) << "\n";
      out.stream() << "scheme,delta2,epsilon,shots,mean_abs_error,stderr,seed\n";
      for (const auto& cell : report.cells) {
        out.stream() << cell.scheme << "," << num(cell.delta2) << "," << num(cell.epsilon) << ","
                     << cell.shots << "," << num(cell.mean_abs_error) << ","
                     << num(cell.stderr_mean) << "," << cell.seed << "\n";
      }
    } else if (*cmd_export) {
      CircuitIR circuit;
      if (export_kind == "cycle") {
        circuit = build_cycle_test(export_order, export_dim, export_s);
      } else if (export_kind == "kd") {
        circuit = build_kd_circuit(export_dim, export_s);
      } else if (export_kind == "weak-value-numerator") {
        circuit = build_weak_value_circuits(export_dim, export_s).first;
      } else if (export_kind == "weak-value-denominator") {
        circuit = build_weak_value_circuits(export_dim, export_s).second;
      } else if (export_kind == "psqfi") {
        if (export_generator.empty())
          throw CLI::ValidationError("psqfi export requires --generator");
        circuit = build_psqfi_circuit(export_dim, export_s, export_theta,
                                      spectral_decompose(load_matrix(export_generator)));
      } else if (export_kind == "otoc") {
        if (export_unitary.empty()) throw CLI::ValidationError("otoc export requires --unitary");
        circuit = build_otoc_circuit(export_dim, export_s, load_matrix(export_unitary));
      } else {
        throw CLI::ValidationError("unknown --kind '" + export_kind + "'");
      }
      const CircuitFormat format = export_format == "qasm-like" ? CircuitFormat::qasm_like
                                   : export_format == "json-ir"
                                       ? CircuitFormat::json_ir
                                       : throw CLI::ValidationError("unknown --format");
      Output out(out_path, argv_echo);
      out.stream() << export_circuit(circuit, format);
      if (format == CircuitFormat::json_ir) out.stream() << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
