// cencov: validate, transform and report on groupoids, states, kernels and
// statistical models stored as JSON files.
//
// exit codes: 0 ok, 1 validation failure, 2 I/O or schema, 3 numerical

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "cencov/channels.hpp"
#include "cencov/error.hpp"
#include "cencov/estimation.hpp"
#include "cencov/gns.hpp"
#include "cencov/io.hpp"
#include "cencov/states.hpp"

using namespace cencov;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  double tol = 1e-9;
  double h = kDefaultStep;
  bool json_out = false;
  std::uint64_t seed = 0;
  std::string out;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io:
    case ErrorKind::Schema:
      return 2;
    case ErrorKind::NoConvergence:
    case ErrorKind::FoliumViolation:
    case ErrorKind::ZeroInformation:
    case ErrorKind::SupportBoundary:
    case ErrorKind::DegenerateState:
    case ErrorKind::IntervalExceeded:
    case ErrorKind::NotSquare:
      return 3;
    default:
      return 1;
  }
}

void print_human(const json& j, const std::string& indent = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      std::cout << indent << k << ":\n";
      print_human(v, indent + "  ");
    } else {
      std::cout << indent << k << ": " << v.dump() << '\n';
    }
  }
}

void emit(const Globals& g, const json& report) {
  if (g.json_out) {
    std::cout << report.dump() << '\n';
  } else {
    print_human(report);
  }
}

// Writes a produced file to -o, or prints it when no path is given.
void emit_file(const Globals& g, const json& file, json report) {
  if (g.out.empty()) {
    std::cout << file.dump(g.json_out ? -1 : 2) << '\n';
    return;
  }
  io::save_json(file, g.out);
  report["written"] = g.out;
  emit(g, report);
}

StateTolerances state_tol(const Globals& g) { return {g.tol, g.tol, g.tol}; }
KernelTolerances kernel_tol(const Globals& g) { return {g.tol, g.tol, g.tol}; }

json state_report_json(const StateReport& r) {
  return {{"positive", r.positive},
          {"normalized", r.normalized},
          {"symmetric", r.symmetric},
          {"min_fiber_eigenvalue", *std::min_element(r.fiber_min_eigenvalue.begin(), r.fiber_min_eigenvalue.end())},
          {"normalization_deficit", r.normalization_deficit},
          {"symmetry_deficit", r.symmetry_deficit}};
}

json kernel_report_json(const KernelReport& r) {
  return {{"passed", r.passed()},
          {"normalized", r.normalized},
          {"positive", r.positive},
          {"hermitian", r.hermitian},
          {"normalization_deficit", r.normalization_deficit},
          {"positivity_min_eigenvalue", r.positivity_min_eigenvalue},
          {"hermiticity_deficit", r.hermiticity_deficit},
          {"jointly_positive", r.jointly_positive},
          {"joint_min_eigenvalue", r.joint_min_eigenvalue}};
}

State load_state(const fs::path& p, const Globals& g, io::GroupoidRef* ref = nullptr) {
  io::FunctionFile f = io::read_state(p);
  if (ref) *ref = f.groupoid;
  return State::make(f.groupoid.groupoid, std::move(f.values), state_tol(g));
}

int cmd_validate(const Globals& g, const fs::path& file) {
  const json j = io::load_json(file);
  io::require_format(j, file.string());
  const io::FileKind kind = io::detect_kind(j);
  json r = {{"kind", io::to_string(kind)}};
  bool ok = true;
  try {
    switch (kind) {
      case io::FileKind::Groupoid: {
        const GroupoidPtr gr = validate(io::spec_from_json(j));
        r["elements"] = gr->size();
        r["outcomes"] = gr->num_outcomes();
        r["pair"] = gr->is_pair();
        break;
      }
      case io::FileKind::State: {
        const io::FunctionFile f = io::read_state(file);
        const StateReport rep = check_state(f.values, *f.groupoid.groupoid, state_tol(g));
        r["report"] = state_report_json(rep);
        ok = rep.passed();
        break;
      }
      case io::FileKind::Element: {
        io::FunctionFile f = io::read_element(file);
        const AlgebraElement a{f.groupoid.groupoid, f.values};
        r["self_adjoint"] = max_abs_diff(star(a).coeff, a.coeff) <= 1e-10;
        break;
      }
      case io::FileKind::Kernel: {
        const io::KernelFile k = io::read_kernel(file);
        const KernelReport rep = validate_kernel(k.kernel, kernel_tol(g));
        r["report"] = kernel_report_json(rep);
        ok = rep.passed();
        break;
      }
      case io::FileKind::Classical: {
        const ClassicalKernel k = ClassicalKernel::make(io::read_classical(file));
        r["rows"] = k.rows();
        r["cols"] = k.cols();
        break;
      }
      case io::FileKind::Kraus: {
        const auto kraus = io::read_kraus(file);
        const std::size_t n = kraus.front().cols();
        ComplexMatrix c(n, n);
        for (const auto& a : kraus) {
          if (a.rows() != kraus.front().rows() || a.cols() != n) {
            throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in shape");
          }
          c += a.adjoint() * a;
        }
        const double dev = max_abs_diff(c, ComplexMatrix::identity(n));
        r["completeness_deviation"] = dev;
        if (dev > g.tol) throw Error(ErrorKind::NonTracePreserving, "max |sum A†A - I| = " + std::to_string(dev));
        break;
      }
      case io::FileKind::Model: {
        const io::ModelFile m = io::read_model(file);
        (void)m.model.state_at(m.model.s0);
        r["knots"] = m.knots.size();
        r["s0"] = m.model.s0;
        break;
      }
      case io::FileKind::Pipeline: {
        const io::PipelineFile pf = io::read_pipeline(file);
        io::GroupoidRef ref;
        (void)load_state(pf.state, g, &ref);
        GroupoidPtr current = ref.groupoid;
        for (const auto& kp : pf.kernels) {
          const io::KernelFile k = io::read_kernel(kp);
          require_same_groupoid(*current, *k.source.groupoid, "pipeline");
          current = k.target.groupoid;
        }
        r["stages"] = pf.kernels.size();
        break;
      }
    }
  } catch (const Error& e) {
    if (exit_code(e.kind()) != 1) throw;
    ok = false;
    r["error"] = std::string(to_string(e.kind()));
    r["message"] = e.what();
  }
  r["valid"] = ok;
  emit(g, r);
  return ok ? 0 : 1;
}

int cmd_compose(const Globals& g, const fs::path& a, const fs::path& b) {
  const io::KernelFile k1 = io::read_kernel(a);
  const io::KernelFile k2 = io::read_kernel(b);
  const QuantumKernel c = compose(k1.kernel, k2.kernel);
  const KernelReport rep = validate_kernel(c, kernel_tol(g));
  emit_file(g, io::kernel_to_json(k1.source, k2.target, c), {{"report", kernel_report_json(rep)}});
  return 0;
}

int cmd_push(const Globals& g, const fs::path& state, const fs::path& kernel) {
  const State rho = load_state(state, g);
  const io::KernelFile k = io::read_kernel(kernel);
  const State out = push_state(rho, k.kernel, state_tol(g));
  emit_file(g, io::function_to_json(k.target, out.phi(), "phi"),
            {{"report", state_report_json(check_state(out.phi(), *out.groupoid(), state_tol(g)))}});
  return 0;
}

int cmd_pull(const Globals& g, const fs::path& kernel, const fs::path& obs) {
  const io::KernelFile k = io::read_kernel(kernel);
  const io::FunctionFile f = io::read_element(obs);
  const AlgebraElement out = pull_observable(k.kernel, {f.groupoid.groupoid, f.values});
  emit_file(g, io::function_to_json(k.source, out.coeff, "coeff"), {{"elements", out.coeff.size()}});
  return 0;
}

int cmd_pipeline(const Globals& g, const fs::path& config) {
  const io::PipelineFile pf = io::read_pipeline(config);
  io::GroupoidRef ref;
  State rho = load_state(pf.state, g, &ref);
  json stages = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < pf.kernels.size() && ok; ++i) {
    const io::KernelFile k = io::read_kernel(pf.kernels[i]);
    require_same_groupoid(*rho.groupoid(), *k.source.groupoid, "pipeline");
    const CVector phi = push_phi(k.kernel, rho.phi());
    const StateReport rep = check_state(phi, *k.target.groupoid, state_tol(g));
    json st = state_report_json(rep);
    st["stage"] = i + 1;
    st["kernel"] = pf.kernels[i].string();
    st["passed"] = rep.passed();
    stages.push_back(std::move(st));
    if (!rep.passed()) {
      ok = false;
      break;
    }
    rho = State::make(k.target.groupoid, phi, state_tol(g));
    ref = k.target;
  }
  json r = {{"stages", std::move(stages)}, {"passed", ok}};
  if (ok) {
    r["final_distribution"] = outcome_distribution(rho);
    if (!g.out.empty()) {
      io::save_json(io::function_to_json(ref, rho.phi(), "phi"), g.out);
      r["written"] = g.out;
    }
  }
  emit(g, r);
  return ok ? 0 : 1;
}

int cmd_gns(const Globals& g, const fs::path& state, double rank_tol) {
  const State rho = load_state(state, g);
  const GnsSpace s = build_gns(rho, rank_tol);
  emit(g, {{"dim", s.dim()}, {"ideal_dim", s.ideal_basis.size()}, {"gram_spectrum", s.spectrum}});
  return 0;
}

bool is_classical(const FiniteGroupoid& gr) {
  for (FiniteGroupoid::Index a = 0; a < gr.size(); ++a) {
    if (!gr.is_unit(a)) return false;
  }
  return true;
}

int cmd_fisher(const Globals& g, const fs::path& model) {
  const io::ModelFile m = io::read_model(model);
  const GnsSpace s = build_gns(m.model.state_at(m.model.s0));
  const FisherResult f = fisher_metric(m.model, s, g.h);
  json r = {{"fisher", f.value}, {"imag", f.imag}, {"folium_residual", f.riesz.folium_residual}};
  if (is_classical(*m.groupoid.groupoid)) {
    const double c = classical_fisher_rao(m.model, g.h);
    r["classical"] = c;
    r["agreement_deficit"] = std::abs(c - f.value);
  } else {
    r["classical"] = nullptr;
    r["agreement_deficit"] = nullptr;
  }
  emit(g, r);
  return 0;
}

int cmd_crb(const Globals& g, const fs::path& model, const std::string& estimator) {
  const io::ModelFile m = io::read_model(model);
  const GnsSpace s = build_gns(m.model.state_at(m.model.s0));
  if (estimator.empty()) {
    emit(g, {{"bound", cramer_rao_bound(m.model, s, g.h)}});
    return 0;
  }
  const io::FunctionFile f = io::read_element(estimator);
  require_same_groupoid(*f.groupoid.groupoid, *m.groupoid.groupoid, "crb");
  const Estimator a = Estimator::make({f.groupoid.groupoid, f.values});
  const CramerRaoAudit audit = cramer_rao_audit(m.model, a, s, g.h);
  const UnbiasedReport ub = check_unbiased(m.model, a, m.audit_grid, 1e-6);
  emit(g, {{"bound", audit.bound},
           {"second_moment", audit.second_moment},
           {"slack", audit.slack},
           {"saturated", audit.saturated},
           {"fisher", audit.fisher},
           {"local_bias", audit.local_bias},
           {"grid_bias", ub.max_deviation},
           {"unbiased", ub.passed && audit.local_bias <= 1e-6}});
  return 0;
}

int cmd_cp(const Globals& g, const fs::path& kernel) {
  const io::KernelFile k = io::read_kernel(kernel);
  const CpVerdict v = cp_verdict(k.kernel, g.tol);
  emit(g, {{"is_cp", v.is_cp}, {"min_choi_eigenvalue", v.min_choi_eigenvalue}, {"choi_rank", v.choi_rank}});
  return 0;
}

int cmd_from_kraus(const Globals& g, const fs::path& file) {
  const auto kraus = io::read_kraus(file);
  const std::string src = "pair:" + std::to_string(kraus.front().cols());
  const std::string dst = "pair:" + std::to_string(kraus.front().rows());
  const io::GroupoidRef g1{io::builtin_groupoid(src), src};
  const io::GroupoidRef g2{io::builtin_groupoid(dst), dst};
  const QuantumKernel k = choi_to_kernel(kraus, g1.groupoid, g2.groupoid, g.tol);
  emit_file(g, io::kernel_to_json(g1, g2, k), {{"report", kernel_report_json(validate_kernel(k, kernel_tol(g)))}});
  return 0;
}

int cmd_embed(const Globals& g, const fs::path& file) {
  const ClassicalKernel k = ClassicalKernel::make(io::read_classical(file));
  const std::string src = "trivial:" + std::to_string(k.rows());
  const std::string dst = "trivial:" + std::to_string(k.cols());
  const io::GroupoidRef g1{io::builtin_groupoid(src), src};
  const io::GroupoidRef g2{io::builtin_groupoid(dst), dst};
  emit_file(g, io::kernel_to_json(g1, g2, embed_classical(k, g1.groupoid, g2.groupoid)), json::object());
  return 0;
}

// Random corpus files; the only place randomness enters the tool.
int cmd_sample(const Globals& g, const std::string& what, std::size_t n) {
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> gauss;
  auto random_matrix = [&](std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (auto& z : m.data()) z = {gauss(rng), gauss(rng)};
    return m;
  };
  const std::string id = "pair:" + std::to_string(n);
  const io::GroupoidRef ref{io::builtin_groupoid(id), id};
  if (what == "state") {
    const ComplexMatrix b = random_matrix(n, n);
    ComplexMatrix d = b.adjoint() * b;
    d *= 1.0 / d.trace().real();
    const State rho = state_from_density(d, ref.groupoid);
    emit_file(g, io::function_to_json(ref, rho.phi(), "phi"), json::object());
    return 0;
  }
  if (what == "kraus") {
    // A_k = B_k S^(-1/2) with S = sum B_k† B_k is trace preserving.
    std::vector<ComplexMatrix> bs;
    ComplexMatrix s(n, n);
    for (int k = 0; k < 2; ++k) {
      bs.push_back(random_matrix(n, n));
      s += bs.back().adjoint() * bs.back();
    }
    const EigenResult e = hermitian_eigen(s);
    ComplexMatrix inv_sqrt(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = 1.0 / std::sqrt(e.eigenvalues[k]);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv_sqrt(i, j) += w * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
      }
    }
    for (auto& b : bs) b = b * inv_sqrt;
    emit_file(g, io::kraus_to_json(bs), json::object());
    return 0;
  }
  throw Error(ErrorKind::Schema, "sample: unknown kind '" + what + "' (state, kraus)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite groupoid states, quantum Markov kernels and Cramer-Rao reports"};
  app.require_subcommand(1);
  app.fallthrough();
  // -h would clash with --h
  app.set_help_flag("--help", "print help");
  Globals g;
  app.add_option("--tol", g.tol, "tolerance for state/kernel checks")->capture_default_str();
  app.add_option("--h", g.h, "finite-difference step")->capture_default_str();
  app.add_flag("--json", g.json_out, "machine-readable output");
  app.add_option("--seed", g.seed, "seed for sample")->capture_default_str();
  app.add_option("-o,--output", g.out, "output file");

  std::string f1, f2, estimator, kind;
  std::size_t n = 2;
  double rank_tol = 1e-9;

  auto* validate_cmd = app.add_subcommand("validate", "check any cencov file");
  validate_cmd->add_option("file", f1)->required();
  auto* compose_cmd = app.add_subcommand("compose", "compose two kernels");
  compose_cmd->add_option("k1", f1)->required();
  compose_cmd->add_option("k2", f2)->required();
  auto* push_cmd = app.add_subcommand("push", "push a state through a kernel");
  push_cmd->add_option("state", f1)->required();
  push_cmd->add_option("kernel", f2)->required();
  auto* pull_cmd = app.add_subcommand("pull", "pull an observable back through a kernel");
  pull_cmd->add_option("kernel", f1)->required();
  pull_cmd->add_option("observable", f2)->required();
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run a state through a chain of kernels");
  pipeline_cmd->add_option("config", f1)->required();
  auto* gns_cmd = app.add_subcommand("gns", "GNS dimension and gram spectrum of a state");
  gns_cmd->add_option("state", f1)->required();
  gns_cmd->add_option("--rank-tol", rank_tol)->capture_default_str();
  auto* fisher_cmd = app.add_subcommand("fisher", "Fisher metric of a model at s0");
  fisher_cmd->add_option("model", f1)->required();
  auto* crb_cmd = app.add_subcommand("crb", "Cramer-Rao bound, with an audit when an estimator is given");
  crb_cmd->add_option("model", f1)->required();
  crb_cmd->add_option("--estimator", estimator);
  auto* cp_cmd = app.add_subcommand("cp", "Choi verdict for a kernel between pair groupoids");
  cp_cmd->add_option("kernel", f1)->required();
  auto* kraus_cmd = app.add_subcommand("from-kraus", "kernel file from a Kraus file");
  kraus_cmd->add_option("kraus", f1)->required();
  auto* embed_cmd = app.add_subcommand("embed", "kernel file from a classical kernel file");
  embed_cmd->add_option("K", f1)->required();
  auto* sample_cmd = app.add_subcommand("sample", "random state or Kraus file on pair:N");
  sample_cmd->add_option("kind", kind)->required();
  sample_cmd->add_option("--n", n)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(g, f1);
    if (compose_cmd->parsed()) return cmd_compose(g, f1, f2);
    if (push_cmd->parsed()) return cmd_push(g, f1, f2);
    if (pull_cmd->parsed()) return cmd_pull(g, f1, f2);
    if (pipeline_cmd->parsed()) return cmd_pipeline(g, f1);
    if (gns_cmd->parsed()) return cmd_gns(g, f1, rank_tol);
    if (fisher_cmd->parsed()) return cmd_fisher(g, f1);
    if (crb_cmd->parsed()) return cmd_crb(g, f1, estimator);
    if (cp_cmd->parsed()) return cmd_cp(g, f1);
    if (kraus_cmd->parsed()) return cmd_from_kraus(g, f1);
    if (embed_cmd->parsed()) return cmd_embed(g, f1);
    if (sample_cmd->parsed()) return cmd_sample(g, kind, n);
  } catch (const Error& e) {
    if (g.json_out) std::cout << json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump() << '\n';
    std::cerr << "cencov: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "cencov: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
