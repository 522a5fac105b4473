#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcfib/curvature.hpp"
#include "gcfib/errors.hpp"
#include "gcfib/fibration.hpp"
#include "gcfib/grassmann.hpp"
#include "gcfib/serialize.hpp"
#include "gcfib/volume.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerification = 3;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) throw gcfib::Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

struct BuildArgs {
  std::array<double, 4> f{};
  std::string out;
  double tol_roundtrip = 1e-12;
};

int run_build(const BuildArgs& args) {
  gcfib::Mat2 f{args.f[0], args.f[1], args.f[2], args.f[3]};
  double d = gcfib::eig2_discriminant(f);
  gcfib::AlmostComplexStructure j = gcfib::phi_to_structure(gcfib::PhiMap::unchecked(f));
  gcfib::Mat2 back = gcfib::structure_to_phi(j).f;
  double err = (back - f).max_abs();

  json doc;
  doc["schemaVersion"] = 1;
  doc["F"] = gcfib::to_json(f);
  doc["D"] = d;
  doc["J"] = gcfib::to_json(j.j);
  doc["roundTripError"] = err;
  write_output(args.out, gcfib::json_dump(doc));
  return err <= args.tol_roundtrip ? kExitOk : kExitVerification;
}

struct CheckArgs {
  std::array<double, 4> f{};
  int samples = 1000;
  std::uint64_t seed = 42;
  bool force_invalid = false;
  std::string out;
};

int run_check(const CheckArgs& args) {
  gcfib::Mat2 f{args.f[0], args.f[1], args.f[2], args.f[3]};
  double d = gcfib::eig2_discriminant(f);
  bool invalid = d >= -1e-12;
  if (invalid && !args.force_invalid)
    throw gcfib::RealEigenvalues("phi map has real eigenvalues (rerun with --force-invalid)");

  gcfib::GreatCircleFibration fib =
      gcfib::GreatCircleFibration::special(gcfib::PhiMap::unchecked(f));
  gcfib::FibrationReport report = gcfib::verify_fibration(fib, args.samples, args.seed);

  json doc;
  doc["schemaVersion"] = 1;
  doc["F"] = gcfib::to_json(f);
  doc["D"] = d;
  doc["report"] = gcfib::to_json(report);
  if (invalid) {
    doc["orthogonalPairResidual"] = nullptr;
  } else {
    doc["orthogonalPairResidual"] = gcfib::orthogonal_fiber_pair(fib, 24).residual;
  }
  write_output(args.out, gcfib::json_dump(doc));
  return report.clean ? kExitOk : kExitVerification;
}

struct GrassmannArgs {
  std::array<double, 4> f{};
  int samples = 500;
  std::uint64_t seed = 42;
  std::string out;
  std::string surface_out;
  double tol_lipschitz = 1e-6;
  double tol_fit = 1e-6;
};

int run_grassmann(const GrassmannArgs& args) {
  gcfib::Mat2 f{args.f[0], args.f[1], args.f[2], args.f[3]};
  gcfib::GreatCircleFibration fib =
      gcfib::GreatCircleFibration::special(gcfib::PhiMap::checked(f));
  std::vector<gcfib::SurfacePoint> pts = gcfib::base_surface(fib, args.samples, args.seed);
  gcfib::DomainFactor domain = gcfib::graph_domain(pts);
  gcfib::LipschitzReport lip = gcfib::lipschitz_check(pts, domain);
  gcfib::GageDecomposition gage = gcfib::gage_decompose(pts, domain);

  json doc;
  doc["schemaVersion"] = 1;
  doc["F"] = gcfib::to_json(f);
  doc["D"] = gcfib::eig2_discriminant(f);
  doc["samples"] = static_cast<int>(pts.size());
  doc["spreadMinus"] = gcfib::factor_spread(pts, gcfib::DomainFactor::Minus);
  doc["spreadPlus"] = gcfib::factor_spread(pts, gcfib::DomainFactor::Plus);
  doc["domainFactor"] = gcfib::domain_factor_name(domain);
  doc["maxRatio"] = lip.max_ratio;
  doc["domainCollapsed"] = lip.domain_collapsed;
  doc["lipschitzWitness"] = json::array({lip.witness.first, lip.witness.second});
  doc["decomposition"] = gcfib::to_json(gage);
  write_output(args.out, gcfib::json_dump(doc));
  if (!args.surface_out.empty()) write_output(args.surface_out, gcfib::surface_csv(pts));

  bool ok = lip.max_ratio <= 1.0 + args.tol_lipschitz && gage.fit_residual < args.tol_fit;
  return ok ? kExitOk : kExitVerification;
}

struct CurvatureArgs {
  std::array<double, 4> f{};
  double gamma = -1.0;
  double beta = -1.0;
  int samples = 50;
  std::uint64_t seed = 42;
  std::string out;
  double tol_roundtrip = 1e-10;
};

int run_curvature(const CurvatureArgs& args) {
  gcfib::Mat2 fm{args.f[0], args.f[1], args.f[2], args.f[3]};
  gcfib::PhiMap f = gcfib::PhiMap::checked(fm);
  gcfib::CurvatureTensor4 tensor = gcfib::build_tensor(f, args.gamma, args.beta);
  gcfib::PropertyReport report = gcfib::verify_r2_r3(tensor, f, args.samples, args.seed);
  gcfib::PhiMap recovered = gcfib::recover_fibration(tensor);
  double err = (recovered.f - fm).max_abs();

  json doc;
  doc["schemaVersion"] = 1;
  doc["F"] = gcfib::to_json(fm);
  doc["gamma"] = args.gamma;
  doc["beta"] = args.beta;
  doc["tensor"] = gcfib::to_json(tensor);
  doc["report"] = gcfib::to_json(report);
  doc["recoveredF"] = gcfib::to_json(recovered.f);
  doc["roundTripError"] = err;
  write_output(args.out, gcfib::json_dump(doc));
  return report.all_ok() && err <= args.tol_roundtrip ? kExitOk : kExitVerification;
}

struct VolumeArgs {
  int a = 2;
  int n = 1;
  std::string out;
  double tol_identity = 1e-8;
  double tol_holder = 1e-6;
};

int run_volume(const VolumeArgs& args) {
  gcfib::ModelSpaceParams p = gcfib::ModelSpaceParams::checked(args.a, args.n);
  gcfib::QuadratureConfig cfg;
  double quad = gcfib::beta_quadrature(p, cfg);
  double closed = gcfib::beta_closed_form(p);
  double rel = std::fabs(quad - closed) / closed;
  double lemma = gcfib::lemma27_residual(p, cfg);
  bool holder_defined = p.a * p.n - p.a >= 2;
  double holder = holder_defined ? gcfib::holder_equality_residual(p, cfg) : 0.0;

  json doc;
  doc["schemaVersion"] = 1;
  doc["a"] = p.a;
  doc["n"] = p.n;
  doc["betaQuadrature"] = quad;
  doc["betaClosedForm"] = closed;
  doc["betaRelDiff"] = rel;
  doc["sphereVolume"] = gcfib::sphere_volume(p.dim() - 1);
  doc["crossVolume"] = gcfib::cross_volume(p);
  doc["lemma27Residual"] = lemma;
  doc["holderResidual"] = holder_defined ? json(holder) : json(nullptr);
  write_output(args.out, gcfib::json_dump(doc));

  bool ok = rel <= args.tol_identity && lemma <= args.tol_identity &&
            (!holder_defined || holder <= args.tol_holder);
  return ok ? kExitOk : kExitVerification;
}

struct BergerArgs {
  double s_min = 0.1;
  double s_max = 1.0;
  int steps = 10;
  std::string format = "csv";
  std::string out;
};

int run_berger(const BergerArgs& args) {
  if (args.steps < 1) throw gcfib::InvalidParams("steps must be positive");
  if (!(args.s_min > 0.0) || !(args.s_max <= 1.0) || !(args.s_min <= args.s_max))
    throw gcfib::InvalidParams("need 0 < sMin <= sMax <= 1");

  std::vector<gcfib::BergerMetricReport> rows;
  rows.reserve(static_cast<std::size_t>(args.steps));
  for (int i = 0; i < args.steps; ++i) {
    double s = args.steps == 1
                   ? args.s_min
                   : (i == args.steps - 1
                          ? args.s_max
                          : args.s_min + (args.s_max - args.s_min) * i / (args.steps - 1));
    rows.push_back(gcfib::berger_report(s));
  }

  if (args.format == "json") {
    json doc;
    doc["schemaVersion"] = 1;
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(gcfib::to_json(r));
    doc["rows"] = arr;
    write_output(args.out, gcfib::json_dump(doc));
  } else {
    write_output(args.out, gcfib::berger_csv(rows));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Great-circle fibrations of the 3-sphere: construction, "
               "verification, and volume identities"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CheckArgs check_args;
  GrassmannArgs grassmann_args;
  CurvatureArgs curvature_args;
  VolumeArgs volume_args;
  BergerArgs berger_args;

  auto add_phi = [](CLI::App* cmd, std::array<double, 4>& f) {
    cmd->add_option("a", f[0], "Phi map entry (1,1)")->required();
    cmd->add_option("b", f[1], "Phi map entry (1,2)")->required();
    cmd->add_option("c", f[2], "Phi map entry (2,1)")->required();
    cmd->add_option("d", f[3], "Phi map entry (2,2)")->required();
  };

  CLI::App* fibration = app.add_subcommand("fibration", "Phi-map and structure operations");
  fibration->require_subcommand(1);

  CLI::App* build = fibration->add_subcommand("build", "Structure matrix from a phi map");
  add_phi(build, build_args.f);
  build->add_option("--out", build_args.out, "Output path (default stdout)");
  build->add_option("--tol.roundtrip", build_args.tol_roundtrip, "Round-trip tolerance");

  CLI::App* check = fibration->add_subcommand("check", "Verify pairwise-disjoint fibers");
  add_phi(check, check_args.f);
  check->add_option("--samples", check_args.samples, "Fiber pairs to sample");
  check->add_option("--seed", check_args.seed, "Sampling seed");
  check->add_flag("--force-invalid", check_args.force_invalid,
                  "Run the detector on a map with real eigenvalues");
  check->add_option("--out", check_args.out, "Output path (default stdout)");

  CLI::App* grassmann = app.add_subcommand("grassmann", "Base surface and its decomposition");
  add_phi(grassmann, grassmann_args.f);
  grassmann->add_option("--samples", grassmann_args.samples, "Surface points to sample");
  grassmann->add_option("--seed", grassmann_args.seed, "Sampling seed");
  grassmann->add_option("--out", grassmann_args.out, "Report path (default stdout)");
  grassmann->add_option("--surface-out", grassmann_args.surface_out, "Surface CSV path");
  grassmann->add_option("--tol.lipschitz", grassmann_args.tol_lipschitz,
                        "Allowed excess over ratio 1");
  grassmann->add_option("--tol.fit", grassmann_args.tol_fit, "Fit residual tolerance");

  CLI::App* curvature = app.add_subcommand("curvature", "Curvature tensor for a fibration");
  add_phi(curvature, curvature_args.f);
  curvature->add_option("gamma", curvature_args.gamma, "Vertical curvature offset, negative")
      ->required();
  curvature->add_option("beta", curvature_args.beta, "Second curvature offset, negative")
      ->required();
  curvature->add_option("--samples", curvature_args.samples, "Verification samples");
  curvature->add_option("--seed", curvature_args.seed, "Sampling seed");
  curvature->add_option("--out", curvature_args.out, "Output path (default stdout)");
  curvature->add_option("--tol.roundtrip", curvature_args.tol_roundtrip,
                        "Recovery round-trip tolerance");

  CLI::App* volume = app.add_subcommand("volume", "Model-space volume identities");
  volume->add_option("a", volume_args.a, "Base field real dimension (1, 2, 4, 8)")->required();
  volume->add_option("n", volume_args.n, "Projective dimension")->required();
  volume->add_option("--out", volume_args.out, "Output path (default stdout)");
  volume->add_option("--tol.identity", volume_args.tol_identity,
                     "Quadrature/identity residual tolerance");
  volume->add_option("--tol.holder", volume_args.tol_holder, "Equality-case tolerance");

  CLI::App* berger = app.add_subcommand("berger", "Shrunk-metric curvature sweep");
  berger->add_option("sMin", berger_args.s_min, "Smallest shrink factor")->required();
  berger->add_option("sMax", berger_args.s_max, "Largest shrink factor")->required();
  berger->add_option("steps", berger_args.steps, "Number of sweep rows")->required();
  berger->add_option("--format", berger_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  berger->add_option("--out", berger_args.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (build->parsed()) return run_build(build_args);
    if (check->parsed()) return run_check(check_args);
    if (grassmann->parsed()) return run_grassmann(grassmann_args);
    if (curvature->parsed()) return run_curvature(curvature_args);
    if (volume->parsed()) return run_volume(volume_args);
    if (berger->parsed()) return run_berger(berger_args);
  } catch (const gcfib::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
