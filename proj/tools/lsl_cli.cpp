#include <boost/program_options.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsl/families.hpp"
#include "lsl/metric.hpp"
#include "lsl/report.hpp"
#include "lsl/suites.hpp"

namespace po = boost::program_options;
using lsl::ordered_json;

namespace {

struct Options {
  std::string space = "r41";
  std::string family = "i";
  std::string lambdaName = "zero";
  double theta = 1.0;
  double c = 0.0;
  int grid = 16;
  double window = 0.5;
  double fdStep = 1e-3;
  double tol = 1e-6;
  double lambdaG = 0.0;
  bool lambdaGSet = false;
  std::uint64_t seed = 1;
  int points = 5;
  int frames = 3;
  std::string chart = "flat";
  bool base = false;
  std::string csvPath;
  std::string outPath;
};

lsl::LambdaFn resolveLambda(const std::string& name, std::uint64_t seed) {
  if (name.rfind("lattice:", 0) == 0) {
    std::ifstream in(name.substr(8));
    if (!in) throw std::invalid_argument("cannot open lattice file: " + name.substr(8));
    nlohmann::json spec;
    in >> spec;
    return lsl::lambdaFromLattice(spec);
  }
  return lsl::lambdaLibrary(name, seed);
}

lsl::FamilySpec makeSpec(const Options& opt) {
  lsl::FamilySpec spec;
  spec.form = lsl::SpaceForm::fromName(opt.space);
  spec.tag = lsl::familyTagFromName(opt.family);
  spec.lambda = resolveLambda(opt.lambdaName, opt.seed);
  spec.lambdaName = opt.lambdaName;
  spec.theta = opt.theta;
  spec.c = opt.c;
  spec.grid.u0 = -opt.window;
  spec.grid.u1 = opt.window;
  spec.grid.v0 = -opt.window;
  spec.grid.v1 = opt.window;
  spec.grid.nu = opt.grid;
  spec.grid.nv = opt.grid;
  spec.fdStep = opt.fdStep;
  return spec;
}

ordered_json specJson(const Options& opt) {
  ordered_json j;
  j["space"] = opt.space;
  j["family"] = opt.family;
  j["lambda"] = opt.lambdaName;
  j["theta"] = opt.theta;
  j["c"] = opt.c;
  j["grid"] = opt.grid;
  j["window"] = opt.window;
  j["fd_step"] = opt.fdStep;
  j["tol"] = opt.tol;
  j["seed"] = opt.seed;
  return j;
}

lsl::MetricChart resolveChart(const std::string& name) {
  if (name.rfind("lattice:", 0) == 0) {
    std::ifstream in(name.substr(8));
    if (!in) throw std::invalid_argument("cannot open lattice file: " + name.substr(8));
    nlohmann::json spec;
    in >> spec;
    return lsl::latticeChart(spec);
  }
  if (name == "flat") return lsl::flatChart();
  if (name == "conformal") return lsl::conformalFlatChart(0.3);
  if (name == "warped") return lsl::warpedChart(0.3);
  if (name == "sphere-graph") return lsl::sphereGraphChart();
  if (name == "hyperbolic-graph") return lsl::hyperbolicGraphChart();
  throw std::invalid_argument("unknown chart: " + name);
}

void emit(const Options& opt, const ordered_json& report) {
  const std::string text = report.dump(2) + "\n";
  if (opt.outPath.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.outPath);
    if (!out) throw std::runtime_error("cannot open output file: " + opt.outPath);
    out << text;
  }
}

int runClassify(const Options& opt) {
  const lsl::FamilySpec spec = makeSpec(opt);
  const lsl::Immersion im = opt.base ? lsl::familyBase(spec) : lsl::buildFamily(spec);
  ordered_json report;
  report["command"] = "classify";
  report["spec"] = specJson(opt);
  report["surface"] = lsl::surfaceReport(im, opt.tol);
  if (!opt.csvPath.empty()) {
    std::ofstream csv(opt.csvPath);
    if (!csv) throw std::runtime_error("cannot open csv file: " + opt.csvPath);
    lsl::writeSurfaceCsv(csv, im);
    report["csv"] = opt.csvPath;
  }
  emit(opt, report);
  return 0;
}

int runVerify(const Options& opt) {
  const lsl::FamilySpec spec = makeSpec(opt);
  std::vector<lsl::SuiteResult> suites = lsl::verifyFamily(spec, opt.tol);
  if (spec.form.kind == lsl::SpaceKind::S41 && lsl::isIType(spec)) {
    suites.push_back(lsl::transportSuite(spec.lambda, spec.grid, spec.fdStep));
  }
  if (spec.form.flat() && spec.tag == lsl::FamilyTag::ILambda) {
    suites.push_back(lsl::convergenceSuite(spec.fdStep));
  }
  if (opt.lambdaGSet) {
    suites.push_back(lsl::tensionSuite(lsl::buildFamily(spec), opt.lambdaG, opt.tol));
  }
  ordered_json report;
  report["command"] = "verify";
  report["spec"] = specJson(opt);
  report["suites"] = ordered_json::array();
  bool pass = true;
  for (const auto& s : suites) {
    report["suites"].push_back(lsl::suiteToJson(s));
    pass = pass && s.pass;
  }
  report["pass"] = pass;
  emit(opt, report);
  return pass ? 0 : 1;
}

int runDeform(const Options& opt) {
  const lsl::FamilySpec spec = makeSpec(opt);
  const lsl::SuiteResult r = lsl::deformationSuite(spec);
  ordered_json report;
  report["command"] = "deform";
  report["spec"] = specJson(opt);
  report["suite"] = lsl::suiteToJson(r);
  report["pass"] = r.pass;
  emit(opt, report);
  return r.pass ? 0 : 1;
}

int runAudit(const Options& opt) {
  const lsl::MetricChart chart = resolveChart(opt.chart);
  const lsl::SuiteResult r =
      lsl::integrabilityAudit(chart, opt.points, opt.frames, opt.seed, opt.tol);
  ordered_json report;
  report["command"] = "audit";
  report["chart"] = opt.chart;
  report["points"] = opt.points;
  report["frames"] = opt.frames;
  report["seed"] = opt.seed;
  report["tol"] = opt.tol;
  report["suite"] = lsl::suiteToJson(r);
  report["pass"] = r.pass;
  emit(opt, report);
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string usage =
      "usage: lsl <classify|verify|deform|audit> [options]\n"
      "Spacelike surface toolkit for the three Lorentzian model spaces.\n";
  try {
    if (argc < 2) {
      std::cerr << usage;
      return 2;
    }
    const std::string command = argv[1];

    Options opt;
    po::options_description desc("options");
    desc.add_options()
        ("help,h", "show this help")
        ("space", po::value<std::string>(&opt.space)->default_value("r41"),
         "model space: r41, s41 or h41")
        ("family", po::value<std::string>(&opt.family)->default_value("i"),
         "family tag: i, j, ic or jc")
        ("lambda", po::value<std::string>(&opt.lambdaName)->default_value("zero"),
         "support function name or lattice:<file.json>")
        ("theta", po::value<double>(&opt.theta)->default_value(1.0),
         "sphere radius of the flat j family")
        ("c", po::value<double>(&opt.c)->default_value(0.0),
         "slicing constant of the quadric families")
        ("grid", po::value<int>(&opt.grid)->default_value(16), "nodes per grid side")
        ("window", po::value<double>(&opt.window)->default_value(0.5),
         "chart window half width")
        ("fd-step", po::value<double>(&opt.fdStep)->default_value(1e-3),
         "differencing step")
        ("tol", po::value<double>(&opt.tol)->default_value(1e-6), "residual tolerance")
        ("lambda-g", po::value<double>(&opt.lambdaG),
         "fibre coupling; adds the tension suite to verify")
        ("seed", po::value<std::uint64_t>(&opt.seed)->default_value(1), "sampling seed")
        ("points", po::value<int>(&opt.points)->default_value(5),
         "audit: number of random points")
        ("frames", po::value<int>(&opt.frames)->default_value(3),
         "audit: random frames per point")
        ("chart", po::value<std::string>(&opt.chart)->default_value("flat"),
         "audit: ambient chart name or lattice:<file.json>")
        ("base", po::bool_switch(&opt.base), "classify: use the umbilic base surface")
        ("csv", po::value<std::string>(&opt.csvPath), "classify: write per node rows here")
        ("out", po::value<std::string>(&opt.outPath), "write the JSON report here");

    po::variables_map vm;
    po::store(po::parse_command_line(argc - 1, argv + 1, desc), vm);
    po::notify(vm);
    opt.lambdaGSet = vm.count("lambda-g") > 0;

    if (command == "help" || vm.count("help")) {
      std::cout << usage << "\n" << desc << "\n";
      return 0;
    }
    if (command == "classify") return runClassify(opt);
    if (command == "verify") return runVerify(opt);
    if (command == "deform") return runDeform(opt);
    if (command == "audit") return runAudit(opt);
    std::cerr << usage;
    return 2;
  } catch (const po::error& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
